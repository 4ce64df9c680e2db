#include "cqmtf/transforms.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/specfun.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace cqmtf::transforms {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread safe; execution with the new-array API is.
std::mutex g_plan_mutex;

fftw_plan r2r_plan(int n, fftw_r2r_kind kind) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    const auto key = std::make_pair(n, static_cast<int>(kind));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> a(n), b(n);
    fftw_plan p = fftw_plan_r2r_1d(n, a.data(), b.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("fftw: planning failed");
    cache.emplace(key, p);
    return p;
}

fftw_plan dft_plan(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    const auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cd> a(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan p = fftw_plan_dft_1d(n, pa, pa, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("fftw: planning failed");
    cache.emplace(key, p);
    return p;
}

void run_r2r(fftw_r2r_kind kind, const double* in, double* out, int n) {
    fftw_plan p = r2r_plan(n, kind);
    fftw_execute_r2r(p, const_cast<double*>(in), out);
}

}  // namespace

ChebGrid cheb_grid_first_kind(int n) {
    ChebGrid g;
    g.n = n;
    g.theta.resize(n);
    g.t.resize(n);
    for (int q = 0; q < n; ++q) {
        g.theta[q] = (q + 0.5) * kPi / n;
        g.t[q] = std::cos(g.theta[q]);
    }
    return g;
}

ChebGrid cheb_grid_second_kind(int n) {
    ChebGrid g;
    g.n = n;
    g.theta.resize(n);
    g.t.resize(n);
    for (int j = 0; j < n; ++j) {
        g.theta[j] = (j + 1) * kPi / (n + 1);
        g.t[j] = std::cos(g.theta[j]);
    }
    return g;
}

void dst1(const double* in, double* out, int n) { run_r2r(FFTW_RODFT00, in, out, n); }
void dst2(const double* in, double* out, int n) { run_r2r(FFTW_RODFT10, in, out, n); }
void dct2(const double* in, double* out, int n) { run_r2r(FFTW_REDFT10, in, out, n); }
void dct3(const double* in, double* out, int n) { run_r2r(FFTW_REDFT01, in, out, n); }

void dft(cd* data, int n, int sign) {
    fftw_plan p = dft_plan(n, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

std::vector<double> cheb2_coeffs(const std::vector<double>& samples, int ncoef) {
    const int n = static_cast<int>(samples.size());
    if (ncoef > n) throw DomainError("cheb2_coeffs: more coefficients than samples");
    std::vector<double> x(n), y(n);
    for (int j = 0; j < n; ++j) x[j] = samples[j] * std::sin((j + 1) * kPi / (n + 1));
    dst1(x.data(), y.data(), n);
    std::vector<double> c(ncoef);
    for (int l = 0; l < ncoef; ++l) c[l] = y[l] / (n + 1);
    return c;
}

std::vector<cd> cheb2_coeffs(const std::vector<cd>& samples, int ncoef) {
    const int n = static_cast<int>(samples.size());
    std::vector<double> re(n), im(n);
    for (int j = 0; j < n; ++j) {
        re[j] = samples[j].real();
        im[j] = samples[j].imag();
    }
    const auto cr = cheb2_coeffs(re, ncoef);
    const auto ci = cheb2_coeffs(im, ncoef);
    std::vector<cd> c(ncoef);
    for (int l = 0; l < ncoef; ++l) c[l] = {cr[l], ci[l]};
    return c;
}

std::vector<double> cheb1_coeffs(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    std::vector<double> y(n);
    dct2(samples.data(), y.data(), n);
    for (int j = 0; j < n; ++j) y[j] /= n;
    y[0] *= 0.5;
    return y;
}

void moments_u(const double* f, int n, double* out, int nmom) {
    std::vector<double> x(n), y(n);
    for (int q = 0; q < n; ++q) x[q] = (kPi / n) * f[q] * std::sin((q + 0.5) * kPi / n);
    dst2(x.data(), y.data(), n);
    for (int l = 0; l < nmom; ++l) out[l] = l < n ? 0.5 * y[l] : 0.0;
}

void moments_t(const double* f, int n, double* out, int nmom) {
    std::vector<double> x(n), y(n);
    for (int q = 0; q < n; ++q) x[q] = (kPi / n) * f[q];
    dct2(x.data(), y.data(), n);
    for (int l = 0; l < nmom; ++l) out[l] = l < n ? 0.5 * y[l] : 0.0;
}

void moments_u(const cd* f, int n, cd* out, int nmom) {
    std::vector<double> re(n), im(n), ore(nmom), oim(nmom);
    for (int q = 0; q < n; ++q) {
        re[q] = f[q].real();
        im[q] = f[q].imag();
    }
    moments_u(re.data(), n, ore.data(), nmom);
    moments_u(im.data(), n, oim.data(), nmom);
    for (int l = 0; l < nmom; ++l) out[l] = {ore[l], oim[l]};
}

void moments_t(const cd* f, int n, cd* out, int nmom) {
    std::vector<double> re(n), im(n), ore(nmom), oim(nmom);
    for (int q = 0; q < n; ++q) {
        re[q] = f[q].real();
        im[q] = f[q].imag();
    }
    moments_t(re.data(), n, ore.data(), nmom);
    moments_t(im.data(), n, oim.data(), nmom);
    for (int l = 0; l < nmom; ++l) out[l] = {ore[l], oim[l]};
}

std::vector<double> log_weights(int n, double x, bool second_kind) {
    const auto mt = specfun::log_moments_t(n + 2, x);
    std::vector<double> m(n);
    if (second_kind) {
        // T_j (1 - t^2) = T_j/2 - (T_{j+2} + T_{|j-2|})/4
        for (int j = 0; j < n; ++j) m[j] = 0.5 * mt[j] - 0.25 * (mt[j + 2] + mt[std::abs(j - 2)]);
    } else {
        for (int j = 0; j < n; ++j) m[j] = mt[j];
    }
    // interpolation on the midpoint grid: c_j = (2 - delta_j0)/n sum_q p_q cos(j th_q),
    // so w_q = (1/n) (M_0 + 2 sum_{j>=1} M_j cos(j th_q)) = DCT-III(M)/n
    std::vector<double> w(n);
    dct3(m.data(), w.data(), n);
    for (auto& v : w) v /= n;
    return w;
}

}  // namespace cqmtf::transforms
