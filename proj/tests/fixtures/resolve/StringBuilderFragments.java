import java.security.Provider;
import java.security.Security;
import javax.crypto.Cipher;

public class StringBuilderFragments {
    private Cipher cipher;

    public void init() throws Exception {
        StringBuilder sb = new StringBuilder();
        sb.append("AES");
        sb.append("/EC");
        sb.append("B/PKCS7P");
        sb.append("adding");
        Provider provider = Security.getProvider("BC");
        cipher = Cipher.getInstance(sb.toString(), provider);
    }
}
