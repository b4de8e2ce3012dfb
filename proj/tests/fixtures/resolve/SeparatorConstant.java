import java.security.Provider;
import javax.crypto.Cipher;

public class SeparatorConstant {
    static final class RDMConstants {
        static final String SLASH = "/";
    }

    public Cipher make(Provider provider) throws Exception {
        String str5 = "AES";
        String str2 = "ECB";
        String str4 = "NoPadding";
        return Cipher.getInstance(str5 + RDMConstants.SLASH + str2 + RDMConstants.SLASH + str4, provider);
    }
}
