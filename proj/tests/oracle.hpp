#pragma once
// Brute-force reference integrators shared by the unit tests.  Deliberately
// simple and slow; nothing here is used by the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

struct Gl20 {
    std::vector<double> x, w;
    Gl20() {
        const int n = 20;
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 1, p1 = t, dp = 1;
            for (int it = 0; it < 100; ++it) {
                p0 = 1;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            x[i] = t;
            w[i] = 2 / ((1 - t * t) * dp * dp);
        }
    }
};

inline const Gl20& gl20_rule() {
    static const Gl20 r;
    return r;
}

template <class T>
T gl20(const std::function<T(double)>& f, double a, double b) {
    const auto& x = gl20_rule().x;
    const auto& w = gl20_rule().w;
    T s = T(0);
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(m + h * x[i]);
    return s * h;
}

// Adaptive bisection with a 20-point Gauss rule on each half.
template <class T>
T adaptive(const std::function<T(double)>& f, double a, double b, double tol, int depth = 0) {
    const double m = 0.5 * (a + b);
    const T whole = gl20<T>(f, a, b);
    const T left = gl20<T>(f, a, m);
    const T right = gl20<T>(f, m, b);
    const double diff = std::abs(whole - (left + right));
    if (diff < tol || diff < 1e-15 * std::abs(left + right) || depth > 45 || b - a < 1e-9)
        return left + right;
    return adaptive<T>(f, a, m, tol, depth + 1) + adaptive<T>(f, m, b, tol, depth + 1);
}

// Integral over [a,b] with known interior/end singular points.
template <class T>
T adaptive_split(const std::function<T(double)>& f, double a, double b, std::vector<double> cuts,
                 double tol) {
    std::vector<double> pts{a};
    for (double c : cuts)
        if (c > a && c < b) pts.push_back(c);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    T s = T(0);
    for (size_t i = 0; i + 1 < pts.size(); ++i) s += adaptive<T>(f, pts[i], pts[i + 1], tol);
    return s;
}

}  // namespace oracle
