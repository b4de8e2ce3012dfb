import javax.crypto.Cipher;

public class NativeLocal {
    private static native String nativeGetString(int i);

    public Cipher make() throws Exception {
        String nativeGetString = nativeGetString(1);
        return Cipher.getInstance(nativeGetString);
    }
}
