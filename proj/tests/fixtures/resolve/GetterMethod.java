import javax.crypto.Cipher;

public class GetterMethod {
    private static String getCipherAlgorithm() {
        return "DES";
    }

    public Cipher make() throws Exception {
        return Cipher.getInstance(getCipherAlgorithm());
    }
}
