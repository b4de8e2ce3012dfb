import javax.crypto.Cipher;

public class NativeInstance {
    private String f6401b;

    private final native String getCypherTransformation();

    public Cipher make(NativeInstance crypto) throws Exception {
        f6401b = crypto.getCypherTransformation();
        return Cipher.getInstance(f6401b);
    }
}
