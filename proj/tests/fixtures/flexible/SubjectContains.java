import java.security.MessageDigest;
import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.X509TrustManager;

public class SubjectContains implements X509TrustManager {
    public void checkServerTrusted(X509Certificate[] x509CertificateArr, String str) throws CertificateException {
        X509Certificate x509Certificate = x509CertificateArr[0];
        if (!x509Certificate.getSubjectDN().toString().contains
        ("EMAIL ADDRESS=sales-usa@extron.com, CN=Quantum Ultra, OU=Engineering, O=ExtronElectronics, L=Anaheim, ST=CA, C=US")) {
            throw new CertificateException("bad subject");
        }
    }

    public void checkClientTrusted(X509Certificate[] chain, String authType) throws CertificateException {
    }

    public X509Certificate[] getAcceptedIssuers() {
        return new X509Certificate[0];
    }
}
