import javax.crypto.Cipher;

public class ByteLoop {
    public static String m7713c() {
        int[] iArr = {55, 49, 59, 54, 47, 45, 36, 43, 41};
        StringBuilder sb = new StringBuilder();
        for (int i2 = 8; i2 < 9 && i2 >= 0; i2 -= 3) {
            sb.append(Character.toChars(iArr[i2] + 24));
        }
        return sb.toString();
    }

    public Cipher make() throws Exception {
        Cipher cipher = Cipher.getInstance(m7713c());
        return cipher;
    }
}
