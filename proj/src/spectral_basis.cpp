#include "cqmtf/spectral_basis.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/specfun.hpp"
#include "cqmtf/transforms.hpp"

#include <cmath>

namespace cqmtf {

BlockIndexMap::BlockIndexMap(const Scene& scene, int L) : scene_(&scene), L_(L) {
    if (L < 0) throw DomainError("negative polynomial degree");
    for (int i = 0; i < scene.num_subdomains(); ++i) {
        sub_off_.push_back(total_);
        const int n = 2 * static_cast<int>(scene.sides(i).size()) * (L + 1);
        sub_size_.push_back(n);
        total_ += n;
    }
}

int BlockIndexMap::offset(int subdomain, int interface, int comp) const {
    const auto& sides = scene_->sides(subdomain);
    for (size_t k = 0; k < sides.size(); ++k)
        if (sides[k].interface == interface)
            return sub_off_[subdomain] + (2 * static_cast<int>(k) + comp) * (L_ + 1);
    throw TopologyError("interface " + std::to_string(interface) + " does not bound subdomain " +
                        std::to_string(subdomain));
}

double trial_value(const SideView& s, int l, double t) {
    return specfun::cheb_u(l, t) / s.jacobian(t);
}

double test_value(const SideView& s, int l, double t) {
    return specfun::cheb_u(l, t) * std::sqrt(std::max(0.0, 1.0 - t * t)) / s.jacobian(t);
}

cd eval_trace(const SideView& s, const Eigen::Ref<const Eigen::VectorXcd>& c, double t) {
    const int n = static_cast<int>(c.size());
    std::vector<double> u(n);
    specfun::cheb_u_all(n - 1, t, u.data());
    cd v = 0.0;
    for (int m = 0; m < n; ++m) v += c[m] * u[m];
    return v / s.jacobian(t);
}

Eigen::VectorXcd project_trace(const SideView& s, const std::function<cd(double)>& f, int L,
                               int nsamples) {
    const int n = nsamples > 0 ? nsamples : 2 * L + 64;
    const auto g = transforms::cheb_grid_second_kind(n);
    std::vector<cd> v(n);
    for (int j = 0; j < n; ++j) v[j] = f(g.t[j]) * s.jacobian(g.t[j]);
    const auto c = transforms::cheb2_coeffs(v, L + 1);
    return Eigen::Map<const Eigen::VectorXcd>(c.data(), L + 1);
}

Eigen::VectorXcd test_moments(const std::function<cd(double)>& f, int L, int Q) {
    const auto g = transforms::cheb_grid_first_kind(Q);
    std::vector<cd> v(Q);
    for (int q = 0; q < Q; ++q) v[q] = f(g.t[q]);
    Eigen::VectorXcd b(L + 1);
    transforms::moments_u(v.data(), Q, b.data(), L + 1);
    return b;
}

Eigen::MatrixXd duality_block(const SideView& trial, const SideView& test, int L, int Q) {
    if (trial.interface != test.interface)
        throw TopologyError("duality block needs two views of one interface");
    if (Q <= 0) Q = 2 * L + 256;  // 1/J can be poorly resolved (kite)
    const bool flip = trial.reversed != test.reversed;
    const auto g = transforms::cheb_grid_first_kind(Q);
    Eigen::MatrixXd X(L + 1, L + 1);
    std::vector<double> f(Q), out(L + 1);
    for (int m = 0; m <= L; ++m) {
        for (int q = 0; q < Q; ++q) {
            const double t = g.t[q];
            f[q] = specfun::cheb_u(m, flip ? -t : t) / test.jacobian(t);
        }
        transforms::moments_u(f.data(), Q, out.data(), L + 1);
        for (int l = 0; l <= L; ++l) X(l, m) = out[l];
    }
    return X;
}

Eigen::MatrixXd trial_gram(const SideView& s, int L) {
    const auto g = specfun::gauss_legendre(2 * L + 256);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(L + 1, L + 1);
    std::vector<double> u(L + 1);
    for (size_t q = 0; q < g.nodes.size(); ++q) {
        specfun::cheb_u_all(L, g.nodes[q], u.data());
        const double w = g.weights[q] / s.jacobian(g.nodes[q]);
        for (int l = 0; l <= L; ++l)
            for (int m = 0; m <= L; ++m) G(l, m) += w * u[l] * u[m];
    }
    return G;
}

}  // namespace cqmtf
