import javax.crypto.Cipher;

public class ConcatField {
    private static final String padding = "PKCS5Padding";

    public Cipher make() throws Exception {
        return Cipher.getInstance("AES/ECB/" + padding);
    }
}
