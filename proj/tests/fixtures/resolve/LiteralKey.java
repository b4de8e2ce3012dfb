import javax.crypto.spec.SecretKeySpec;

public class LiteralKey {
    public SecretKeySpec key() throws Exception {
        return new SecretKeySpec("oejkdirztefhnvscxhdmdzedfotuabje".getBytes("UTF-8"), "AES");
    }
}
