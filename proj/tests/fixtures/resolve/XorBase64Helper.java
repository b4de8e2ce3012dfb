import java.util.Base64;
import javax.crypto.Cipher;

public class XorBase64Helper {
    static final class Utils {
        static String base64DecodeAndXor(String str) {
            return xorMessage(new String(Base64.getDecoder().decode(str)));
        }

        static String xorMessage(String m) {
            char[] key = "com.kakao.api".toCharArray();
            char[] out = new char[m.length()];
            for (int i = 0; i < m.length(); i++) {
                out[i] = (char) (m.charAt(i) ^ key[i % key.length]);
            }
            return new String(out);
        }
    }

    public Cipher make() throws Exception {
        String cipherAlgorithm = Utils.base64DecodeAndXor("Iio+ASgjKE4/ZSIjXDMOCUoCDww=");
        Cipher cipher = Cipher.getInstance(cipherAlgorithm);
        return cipher;
    }
}
