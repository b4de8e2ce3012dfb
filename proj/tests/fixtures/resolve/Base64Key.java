import android.util.Base64;
import javax.crypto.spec.SecretKeySpec;

public class Base64Key {
    public SecretKeySpec key() {
        return new SecretKeySpec(Base64.decode("oik6PdDdMnOXemTbwvMn9de/h9 lFnfBaCWbGMMZqqoSaQaqUOqjVGm5NqsmjcBI1x+sS9ugjB55HEJWR iFXYFw==", 2), "HmacSHA256");
    }
}
