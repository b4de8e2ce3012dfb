import android.util.Base64;
import javax.crypto.Cipher;

public class Base64Split {
    public Cipher make() throws Exception {
        return Cipher.getInstance(new String (Base64.decode("REVTL0NCQy9QS0NTNVBhZGRpb mc=",2)));
    }
}
