import javax.crypto.Cipher;

public class EnumPayload {
    enum Algo {
        A("AES/GCM/NoPadding"),
        B("AES/ECB/PKCS5Padding");

        final String f13865d;

        Algo(String d) {
            this.f13865d = d;
        }
    }

    public Cipher make() throws Exception {
        Algo aVar = Algo.B;
        return Cipher.getInstance(aVar.f13865d);
    }
}
