import javax.crypto.Cipher;

public class ReplaceMarker {
    public Cipher make() throws Exception {
        return Cipher.getInstance("DE$S".replace("$", ""));
    }
}
