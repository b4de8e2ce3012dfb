import javax.crypto.Cipher;

public class TernaryFlag {
    public Cipher make(boolean z) throws Exception {
        return Cipher.getInstance(z ? "AES/GCM/NoPadding" : "AES/CBC/PKCS5Padding");
    }
}
