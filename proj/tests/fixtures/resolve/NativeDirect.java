import javax.crypto.Cipher;

public class NativeDirect {
    public static native String requestTransform(int i);

    public Cipher make() throws Exception {
        return Cipher.getInstance(requestTransform(1));
    }
}
