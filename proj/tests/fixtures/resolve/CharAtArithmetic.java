import javax.crypto.Cipher;

public class CharAtArithmetic {
    public Cipher make() throws Exception {
        return Cipher.getInstance("AES/" + ((char) ("AES/GCM/NoPadding".charAt(4) - 2)) + "AES/GCM/NoPadding".charAt(5) + ((char) ("AES/GCM/NoPadding".charAt(6) - 11)) + "/NoPadding");
    }
}
