import javax.crypto.Cipher;

public class ThisField {
    private String mTransformation;

    public ThisField() {
        this.mTransformation = "AES/ECB/PKCS7Padding";
    }

    public Cipher make() throws Exception {
        return Cipher.getInstance(this.mTransformation);
    }
}
