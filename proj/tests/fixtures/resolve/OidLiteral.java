import javax.crypto.Cipher;

public class OidLiteral {
    public Cipher make() throws Exception {
        return Cipher.getInstance("1.2.840.113549.3.2");
    }
}
