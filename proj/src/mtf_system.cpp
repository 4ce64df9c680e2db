#include "cqmtf/mtf_system.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/transforms.hpp"

#include <cmath>

namespace cqmtf {

MtfDiscretization::MtfDiscretization(const Scene& scene, int L, const QuadratureSettings& q)
    : scene_(scene), L_(L), Qrhs_(std::max(2 * L + 32, 64)), map_(scene_, L) {
    const int m = scene_.num_subdomains();
    for (int i = 0; i < m; ++i) local_.push_back(std::make_unique<SubdomainOperator>(scene_, i, L, q));

    const int nb = L + 1;
    coupling_ = Eigen::MatrixXcd::Zero(size(), size());
    mass_.resize(m);
    for (int i = 0; i < m; ++i) {
        for (const auto& side : scene_.sides(i)) {
            const int k = side.curve->other(i);
            const SideView other = scene_.side(k, side.interface);
            const Eigen::MatrixXd X = duality_block(other, side, L);
            const int r = map_.offset(i, side.interface, 0);
            const int c = map_.offset(k, side.interface, 0);
            coupling_.block(r, c, nb, nb) = -0.5 * X;
            coupling_.block(r + nb, c + nb, nb, nb) = 0.5 * X;
            mass_[i].push_back(duality_block(side, side, L));
        }
    }
}

Eigen::MatrixXcd MtfDiscretization::assemble(cd s) const {
    std::vector<cd> ss;
    for (double c : scene_.wavespeeds()) ss.push_back(s / c);
    return assemble(ss);
}

Eigen::MatrixXcd MtfDiscretization::assemble(const std::vector<cd>& s_sub) const {
    if (static_cast<int>(s_sub.size()) != scene_.num_subdomains())
        throw DomainError("one frequency per subdomain expected");
    Eigen::MatrixXcd F = coupling_;
    for (int i = 0; i < scene_.num_subdomains(); ++i) {
        const int o = map_.subdomain_offset(i), n = map_.subdomain_size(i);
        F.block(o, o, n, n) += local_[i]->calderon(s_sub[i]);
    }
    return F;
}

Eigen::MatrixXcd MtfDiscretization::coupling() const { return coupling_; }

const Eigen::MatrixXd& MtfDiscretization::mass(int i, int interface) const {
    const auto& sides = scene_.sides(i);
    for (size_t k = 0; k < sides.size(); ++k)
        if (sides[k].interface == interface) return mass_[i][k];
    throw TopologyError("no such side");
}

Eigen::VectorXcd MtfDiscretization::rhs(const JumpFn& jumps) const {
    auto a = [&](int k, const Vec2& x, const Vec2& n) {
        Eigen::VectorXcd v(1);
        v[0] = jumps(k, x, n).first;
        return v;
    };
    auto b = [&](int k, const Vec2& x, const Vec2& n) {
        Eigen::VectorXcd v(1);
        v[0] = jumps(k, x, n).second;
        return v;
    };
    return rhs(a, b, 1).col(0);
}

Eigen::MatrixXcd MtfDiscretization::rhs(
    const std::function<Eigen::VectorXcd(int, const Vec2&, const Vec2&)>& a,
    const std::function<Eigen::VectorXcd(int, const Vec2&, const Vec2&)>& b, int ncols) const {
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(size(), ncols);
    const int nb = L_ + 1;
    const auto grid = transforms::cheb_grid_first_kind(Qrhs_);
    for (int k = 0; k < scene_.num_interfaces(); ++k) {
        const Interface& g = scene_.interface(k);
        const SideView lo = scene_.side(g.lower(), k);
        // sample in the lower side's parameter; the upper side sees t -> -t
        Eigen::MatrixXcd av(Qrhs_, ncols), bv(Qrhs_, ncols);
        for (int q = 0; q < Qrhs_; ++q) {
            const double t = grid.t[q];
            const Vec2 x = lo.point(t), n = lo.normal(t);
            av.row(q) = a(k, x, n).transpose();
            bv.row(q) = b(k, x, n).transpose();
        }
        std::vector<cd> f(Qrhs_), out(nb);
        for (int c = 0; c < ncols; ++c)
            for (int which = 0; which < 2; ++which) {
                const Eigen::MatrixXcd& v = which == 0 ? av : bv;
                for (int side = 0; side < 2; ++side) {
                    // midpoint grid is symmetric: node q at -t is node Q-1-q
                    for (int q = 0; q < Qrhs_; ++q) f[q] = side == 0 ? v(q, c) : v(Qrhs_ - 1 - q, c);
                    transforms::moments_u(f.data(), Qrhs_, out.data(), nb);
                    const int sub = side == 0 ? g.lower() : g.upper();
                    const double sg = (which == 0 && side == 1) ? -0.5 : 0.5;
                    const int r = map_.offset(sub, k, which);
                    for (int l = 0; l < nb; ++l) R(r + l, c) += sg * out[l];
                }
            }
    }
    return R;
}

MtfSystem::MtfSystem(const MtfDiscretization& d, cd s) : F_(d.assemble(s)) { factor(); }

MtfSystem::MtfSystem(const MtfDiscretization& d, const std::vector<cd>& s_sub)
    : F_(d.assemble(s_sub)) {
    factor();
}

void MtfSystem::factor() {
    lu_.compute(F_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-15)) throw NumericalError("MTF matrix is numerically singular");
}

Eigen::MatrixXcd MtfSystem::solve(const Eigen::MatrixXcd& rhs) const {
    Eigen::MatrixXcd x = lu_.solve(rhs);
    if (!x.allFinite()) throw NumericalError("non-finite MTF solution");
    return x;
}

JumpFn plane_wave_jumps(const Scene& scene, cd s0, const Vec2& d) {
    const Scene* sc = &scene;
    return [sc, s0, d](int k, const Vec2& x, const Vec2& n) -> std::pair<cd, cd> {
        if (sc->interface(k).lower() != 0) return {0.0, 0.0};
        const cd u = std::exp(-s0 * x.dot(d));
        // a = -u_inc, b = -dn0 u_inc with n = n0 (outward from the exterior)
        return {-u, s0 * d.dot(n) * u};
    };
}

}  // namespace cqmtf
