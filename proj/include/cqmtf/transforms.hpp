#pragma once

#include <complex>
#include <vector>

namespace cqmtf {

using cd = std::complex<double>;

namespace transforms {

// Chebyshev grids.  "First kind" is the midpoint grid theta_q = (q+1/2)pi/n,
// "second kind" the interior grid theta_j = j pi/(n+1), j = 1..n.
struct ChebGrid {
    int n = 0;
    std::vector<double> theta;
    std::vector<double> t;  // cos(theta)
};

ChebGrid cheb_grid_first_kind(int n);
ChebGrid cheb_grid_second_kind(int n);

// Thin wrappers over FFTW's real-to-real kinds (unnormalized, FFTW conventions).
void dst1(const double* in, double* out, int n);  // RODFT00
void dst2(const double* in, double* out, int n);  // RODFT10
void dct2(const double* in, double* out, int n);  // REDFT10
void dct3(const double* in, double* out, int n);  // REDFT01

// In-place complex DFT; sign = -1 forward, +1 backward, no scaling.
void dft(cd* data, int n, int sign);

// Coefficients f_l with F(t) = sum_l f_l U_l(t), from samples of F on the
// second-kind grid of size n (sine transform of F(cos th) sin th).
std::vector<double> cheb2_coeffs(const std::vector<double>& samples, int ncoef);
std::vector<cd> cheb2_coeffs(const std::vector<cd>& samples, int ncoef);

// T-coefficients from samples on the first-kind grid.
std::vector<double> cheb1_coeffs(const std::vector<double>& samples);

// Quadrature of weighted moments from first-kind samples F_q:
//   moments_u: int F U_l sqrt(1-t^2) dt,  l < nmom
//   moments_t: int F T_l / sqrt(1-t^2) dt, l < nmom
// exact when F is a polynomial with deg F + l < 2n.
void moments_u(const double* f, int n, double* out, int nmom);
void moments_t(const double* f, int n, double* out, int nmom);
void moments_u(const cd* f, int n, cd* out, int nmom);
void moments_t(const cd* f, int n, cd* out, int nmom);

// Product-integration weights on the first-kind grid for the log kernel:
//   sum_q w_q p(t_q) = int p(t) log|x - t| w(t) dt   for deg p < n,
// with w(t) = sqrt(1-t^2) (second_kind = true) or 1/sqrt(1-t^2).
std::vector<double> log_weights(int n, double x, bool second_kind);

}  // namespace transforms
}  // namespace cqmtf
