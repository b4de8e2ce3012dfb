import javax.crypto.Cipher;

public class NestedConstant {
    static final class SecurityConstants {
        static final String AES_MODE = "AES/ECB/PKCS5Padding";
    }

    public Cipher make() throws Exception {
        return Cipher.getInstance(SecurityConstants.AES_MODE);
    }
}
