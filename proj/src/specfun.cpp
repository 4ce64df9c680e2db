#include "cqmtf/specfun.hpp"

#include "cqmtf/errors.hpp"

#include <cmath>
#include <numbers>

namespace cqmtf::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = 0.57721566490153286061;
constexpr double kEps = 1e-16;

// Power series around 0, fine for |z| <= 2.
BesselK01 k01_series(cd z) {
    const cd q = 0.25 * z * z;
    const cd lg = std::log(0.5 * z);
    cd term0 = 1.0;  // q^k/(k!)^2
    cd term1 = 1.0;  // q^k/(k!(k+1)!)
    cd i0 = 0.0, i1s = 0.0, s0 = 0.0, s1 = 0.0;
    double hk = 0.0;  // harmonic number H_k
    for (int k = 0; k < 60; ++k) {
        const double psi1 = -kEuler + hk;            // psi(k+1)
        const double psi2 = -kEuler + hk + 1.0 / (k + 1);  // psi(k+2)
        i0 += term0;
        i1s += term1;
        s0 += term0 * psi1;
        s1 += term1 * (psi1 + psi2);
        if (std::abs(term0) < kEps * std::abs(i0) && k > 2) break;
        term0 *= q / double((k + 1) * (k + 1));
        term1 *= q / double((k + 1) * (k + 2));
        hk += 1.0 / (k + 1);
    }
    const cd i1 = 0.5 * z * i1s;
    BesselK01 r;
    r.k0 = -lg * i0 + s0;
    r.k1 = 1.0 / z + lg * i1 - 0.25 * z * s1;
    return r;
}

// Steed's continued fraction (Temme's CF2) for order 0, valid for |z| >= 2
// off the negative real axis.
BesselK01 k01_cf2(cd z) {
    cd b = 2.0 * (1.0 + z);
    cd d = 1.0 / b;
    cd h = d, delh = d;
    cd q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    cd q = a1;
    double c = a1;
    double a = -a1;
    cd s = 1.0 + q * delh;
    for (int i = 2; i < 2000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const cd qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cd dels = q * delh;
        s += dels;
        if (std::abs(dels) < kEps * std::abs(s)) break;
    }
    h = a1 * h;
    BesselK01 r;
    r.k0 = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
    r.k1 = r.k0 * (z + 0.5 - h) / z;
    return r;
}

}  // namespace

BesselK01 bessel_k01(cd z) {
    if (z.real() < 0.0) throw DomainError("bessel_k01: Re z < 0");
    const double az = std::abs(z);
    if (az == 0.0) throw DomainError("bessel_k01: z = 0");
    if (z.real() > 740.0) return {0.0, 0.0};
    return az <= 2.0 ? k01_series(z) : k01_cf2(z);
}

cd bessel_k0(cd z) { return bessel_k01(z).k0; }
cd bessel_k1(cd z) { return bessel_k01(z).k1; }

BesselI01 bessel_i01(cd z) {
    const double az = std::abs(z);
    BesselI01 r;
    if (az <= 8.0) {
        const cd q = 0.25 * z * z;
        cd t0 = 1.0, t1 = 0.5;
        cd i0 = 0.0, i1z = 0.0;
        for (int k = 0; k < 80; ++k) {
            i0 += t0;
            i1z += t1;
            if (std::abs(t0) < kEps * std::abs(i0) && std::abs(t1) < kEps * std::abs(i1z) && k > 2)
                break;
            t0 *= q / double((k + 1) * (k + 1));
            t1 *= q / double((k + 1) * (k + 2));
        }
        r.i0 = i0;
        r.i1_over_z = i1z;
        return r;
    }
    // (1/pi) int_0^pi e^{z cos th} (1, cos th) d th; periodic integrand, so
    // the trapezoid rule converges geometrically once n exceeds |z|.
    const int n = static_cast<int>(az) + 24;
    cd s0 = 0.0, s1 = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double th = kPi * j / n;
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        const double ct = std::cos(th);
        const cd e = std::exp(z * ct);
        s0 += w * e;
        s1 += w * e * ct;
    }
    r.i0 = s0 / double(n);
    r.i1_over_z = s1 / double(n) / z;
    return r;
}

QuadRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n < 1");
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            const double pn = (n == 1) ? x : p1;
            const double pnm1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

QuadRule gauss_legendre_angle(int n) {
    const QuadRule g = gauss_legendre(n);
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // phi decreasing so that t = cos(phi) increases
        const double phi = 0.5 * kPi * (1.0 - g.nodes[i]);
        r.nodes[i] = std::cos(phi);
        r.weights[i] = 0.5 * kPi * g.weights[i] * std::sin(phi);
    }
    return r;
}

double cheb_t(int n, double t) {
    if (std::abs(t) <= 1.0) return std::cos(n * std::acos(t));
    double a = 1.0, b = t;
    if (n == 0) return a;
    for (int k = 1; k < n; ++k) {
        const double c = 2.0 * t * b - a;
        a = b;
        b = c;
    }
    return b;
}

double cheb_u(int n, double t) {
    double a = 1.0, b = 2.0 * t;
    if (n == 0) return a;
    for (int k = 1; k < n; ++k) {
        const double c = 2.0 * t * b - a;
        a = b;
        b = c;
    }
    return b;
}

void cheb_u_all(int n, double t, double* out) {
    out[0] = 1.0;
    if (n >= 1) out[1] = 2.0 * t;
    for (int k = 2; k <= n; ++k) out[k] = 2.0 * t * out[k - 1] - out[k - 2];
}

void cheb_t_all(int n, double t, double* out) {
    out[0] = 1.0;
    if (n >= 1) out[1] = t;
    for (int k = 2; k <= n; ++k) out[k] = 2.0 * t * out[k - 1] - out[k - 2];
}

double cheb_u_deriv(int n, double t) {
    if (n == 0) return 0.0;
    // U_n' = ((n+1) T_{n+1} - t U_n) / (t^2 - 1), with the endpoint limits
    if (std::abs(std::abs(t) - 1.0) < 1e-12) {
        const double v = n * (n + 1.0) * (n + 2.0) / 3.0;
        return (t > 0.0 || n % 2 == 1) ? v : -v;
    }
    return ((n + 1) * cheb_t(n + 1, t) - t * cheb_u(n, t)) / (t * t - 1.0);
}

double log_cheb_series(double eta, double tau, int nterms) {
    double s = -std::log(2.0);
    for (int n = 1; n <= nterms; ++n) s -= 2.0 * cheb_t(n, eta) * cheb_t(n, tau) / n;
    return s;
}

std::vector<double> log_moments_t(int jmax, double x) {
    std::vector<double> m(jmax + 1);
    const double ax = std::abs(x);
    if (ax <= 1.0) {
        m[0] = -kPi * std::log(2.0);
        const double th = std::acos(x);
        for (int j = 1; j <= jmax; ++j) m[j] = -kPi / j * std::cos(j * th);
    } else {
        const double z = ax + std::sqrt(ax * ax - 1.0);
        m[0] = kPi * std::log(0.5 * z);
        const double sg = x > 0.0 ? 1.0 : -1.0;
        double zp = 1.0, sp = 1.0;
        for (int j = 1; j <= jmax; ++j) {
            zp /= z;
            sp *= sg;
            m[j] = -kPi / j * zp * sp;
        }
    }
    return m;
}

}  // namespace cqmtf::specfun
