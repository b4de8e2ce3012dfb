import java.security.MessageDigest;
import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.X509TrustManager;

public class Sha1Fingerprint implements X509TrustManager {
    public void checkServerTrusted(X509Certificate[] x509CertificateArr, String str2) throws CertificateException {
        try {
            if (AdjustBridgeUtil.byte2HexFormatted(MessageDigest .getInstance("SHA1").digest(x509CertificateArr[0] .getEncoded())) .equalsIgnoreCase("7BCFF44099A35BC093BB48C5A6B9A516CDFDA0D1")) {
                return;
            }
        } catch (Exception e) {
        }
        throw new CertificateException();
    }

    public void checkClientTrusted(X509Certificate[] chain, String authType) throws CertificateException {
    }

    public X509Certificate[] getAcceptedIssuers() {
        return new X509Certificate[0];
    }
}
