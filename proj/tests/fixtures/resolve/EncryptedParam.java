import java.nio.charset.StandardCharsets;
import java.util.Base64;
import javax.crypto.Cipher;
import javax.crypto.spec.GCMParameterSpec;
import javax.crypto.spec.SecretKeySpec;

public class EncryptedParam {
    private static final String KEY_AES = "AES";
    private static final String KEY_CIPHER = "AES/GCM/NoPadding";
    public static final String KEY_GCM = "OGEseetime201800";

    public Cipher make() throws Exception {
        String algorithmStr_encode = "32Bi2A5oaH61xilScou92x9faAiO0SOBXmb0X/wqAijapt8K";
        return Cipher.getInstance(decode(algorithmStr_encode));
    }

    public static String decode(String str) {
        try {
            return str.isEmpty() ? "" : new String(decrypt(getbase64ToBytes(str), KEY_GCM));
        } catch (Exception e) {
            e.printStackTrace();
            return null;
        }
    }

    static byte[] getbase64ToBytes(String str) {
        return Base64.getDecoder().decode(str);
    }

    static byte[] getKey(String k) {
        return k.getBytes(StandardCharsets.UTF_8);
    }

    public static byte[] decrypt(byte[] bArr, String str) {
        try {
            SecretKeySpec secretKeySpec = new SecretKeySpec(getKey(KEY_GCM), KEY_AES);
            byte[] bytes = str.getBytes(StandardCharsets.UTF_8);
            Cipher cipher = Cipher.getInstance(KEY_CIPHER);
            cipher.init(2, secretKeySpec, new GCMParameterSpec(128, bytes));
            return cipher.doFinal(bArr);
        } catch (Exception e) {
            e.printStackTrace();
            return new byte[0];
        }
    }
}
