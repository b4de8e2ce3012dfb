import javax.crypto.Cipher;

public class XorMask {
    public Cipher create() throws Exception {
        String Qhi = Qhi("AES/CBC/PKCS5Padding");
        return Cipher.getInstance(Qhi);
    }

    public static String Qhi(String str) {
        int[] iArr = new int[str.length()];
        iArr[4] = 6;
        iArr[5] = 1;
        iArr[6] = 1;
        return new String(Qhi(str.getBytes(), iArr));
    }

    public static byte[] Qhi(byte[] bArr, int[] iArr) {
        if (bArr == null || bArr.length == 0 || iArr == null || iArr.length == 0) {
            return bArr;
        }
        byte[] bArr2 = new byte[bArr.length];
        for (int i = 0; i < bArr.length; i++) {
            bArr2[i] = (byte) (bArr[i] ^ iArr[i % iArr.length]);
        }
        return bArr2;
    }
}
