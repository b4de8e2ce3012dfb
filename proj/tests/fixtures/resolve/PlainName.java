import javax.crypto.Cipher;

public class PlainName {
    public Cipher make() throws Exception {
        return Cipher.getInstance("Blowfish");
    }
}
