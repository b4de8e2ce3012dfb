import android.content.SharedPreferences;
import android.os.Build;
import javax.crypto.Cipher;
import kotlin.jvm.internal.Intrinsics;

public class NestedTernary {
    private SharedPreferences sharedPreferences;

    public Cipher make() throws Exception {
        return Cipher.getInstance(Intrinsics.areEqual(this. sharedPreferences.getString("cipher.used", Build.VERSION.SDK_INT >= 23 ? "M" : "PREM"), "M") ? "RSA/ECB/OAEPWithSHA-1AndMGF1Padding" : "RSA/ECB/PKCS1Padding");
    }
}
