import javax.crypto.Cipher;

public class TernaryGetter {
    static int f882fB;

    private static String getTransformation() {
        return f882fB >= 2 ? "AES/GCM/NoPadding" : "AES";
    }

    public Cipher make() throws Exception {
        return Cipher.getInstance(getTransformation());
    }
}
