import javax.crypto.Cipher;

public class StringBufferAppend {
    private Cipher f13712c;

    public void init() throws Exception {
        StringBuffer stringBuffer = new StringBuffer();
        stringBuffer.append("DESede/CBC/");
        stringBuffer.append("NoPadding");
        this.f13712c = Cipher.getInstance(stringBuffer.toString());
    }
}
