#pragma once

#include <complex>
#include <vector>

namespace cqmtf {

using cd = std::complex<double>;

namespace specfun {

struct BesselK01 {
    cd k0;
    cd k1;
};

// Modified Bessel functions of the second kind, Re z >= 0, z != 0.
BesselK01 bessel_k01(cd z);
cd bessel_k0(cd z);
cd bessel_k1(cd z);

struct BesselI01 {
    cd i0;
    cd i1_over_z;  // I1(z)/z, regular at z = 0
};

BesselI01 bessel_i01(cd z);

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

// Gauss-Legendre in the angle: t = cos(phi), phi in [0, pi].  Clusters nodes
// like t ~ 1 - phi^2/2 at both ends; integrands with (1-t^2)^{k+1/2}
// behaviour become smooth in phi.  Nodes are returned in increasing t.
QuadRule gauss_legendre_angle(int n);

// Chebyshev polynomials.
double cheb_t(int n, double t);
double cheb_u(int n, double t);
// U_0..U_n at t (n+1 values)
void cheb_u_all(int n, double t, double* out);
void cheb_t_all(int n, double t, double* out);
// d/dt U_n
double cheb_u_deriv(int n, double t);

// Truncated product expansion of log|eta - tau| in Chebyshev polynomials,
// -log 2 - 2 sum_{n=1}^{nterms} T_n(eta) T_n(tau) / n.
double log_cheb_series(double eta, double tau, int nterms);

// Closed form of int_{-1}^{1} T_j(eta) log|x - eta| / sqrt(1-eta^2) d eta,
// j = 0..jmax, for any real x.
std::vector<double> log_moments_t(int jmax, double x);

}  // namespace specfun
}  // namespace cqmtf
