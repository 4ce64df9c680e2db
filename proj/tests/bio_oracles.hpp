#pragma once
// Brute-force Galerkin entries of V, K, K', W for the unit tests and the
// acceptance suite.

#include "cqmtf/geometry.hpp"
#include "cqmtf/specfun.hpp"
#include "oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace bio_oracle {

using cqmtf::cd;
using cqmtf::SideView;
using cqmtf::Vec2;

enum class Op { V, K, Kp, W };

inline cd G(cd s, double r) { return cqmtf::specfun::bessel_k0(s * r) / (2 * M_PI); }

// Direct kernels (x on the test side, y on the trial side).  W uses the
// hypersingular kernel -d/dn_x d/dn_y G, only valid for separated sides.
inline cd kernel(Op op, cd s, const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny) {
    const Vec2 d = x - y;
    const double r = d.norm();
    if (r < 1e-14) return 0.0;  // measure zero; only hit by deep bisection
    const auto k = cqmtf::specfun::bessel_k01(s * r);
    switch (op) {
        case Op::V:
            return k.k0 / (2 * M_PI);
        case Op::K:
            return s / (2 * M_PI) * k.k1 / r * d.dot(ny);
        case Op::Kp:
            return -s / (2 * M_PI) * k.k1 / r * d.dot(nx);
        case Op::W: {
            const cd kr = k.k1 / r;
            const cd dk = (-s * r * k.k0 - 2.0 * k.k1) / (r * r);
            const cd dndn = s / (2 * M_PI) * (dk * d.dot(nx) * d.dot(ny) / r + kr * nx.dot(ny));
            return -dndn;
        }
    }
    return 0.0;
}

// Dense tensor Gauss rule; fine for well separated sides.
inline Eigen::MatrixXcd separated_block(Op op, const SideView& trial, const SideView& test, cd s,
                                        int L, int n = 80) {
    const auto gi = cqmtf::specfun::gauss_legendre_angle(n);  // test side, sqrt weight
    const auto go = cqmtf::specfun::gauss_legendre(n);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(L + 1, L + 1);
    for (int i = 0; i < n; ++i) {
        const double eta = gi.nodes[i];
        const Vec2 x = test.point(eta), nx = test.normal(eta);
        const double wi = gi.weights[i] * std::sqrt(1 - eta * eta);
        for (int j = 0; j < n; ++j) {
            const double tau = go.nodes[j];
            const cd kv = kernel(op, s, x, nx, trial.point(tau), trial.normal(tau)) * wi * go.weights[j];
            for (int l = 0; l <= L; ++l)
                for (int m = 0; m <= L; ++m)
                    A(l, m) += kv * cqmtf::specfun::cheb_u(l, eta) * cqmtf::specfun::cheb_u(m, tau);
        }
    }
    return A;
}

// Single entry with adaptive inner integration split at the singular point
// (self pairs) and a Gauss rule in the angle outside.
inline cd self_entry(Op op, const SideView& side, cd s, int l, int m, int nouter = 48) {
    const auto go = cqmtf::specfun::gauss_legendre_angle(nouter);
    cd sum = 0.0;
    for (int i = 0; i < nouter; ++i) {
        const double eta = go.nodes[i];
        const Vec2 x = side.point(eta), nx = side.normal(eta);
        std::function<cd(double)> f = [&](double tau) {
            return kernel(op, s, x, nx, side.point(tau), side.normal(tau)) *
                   cqmtf::specfun::cheb_u(m, tau);
        };
        // stay 1e-6 away from the diagonal, where (x-y).n / r^2 loses all
        // digits to cancellation; the bounded kernel is frozen across the gap.
        const double del = 1e-6;
        cd inner = oracle::adaptive<cd>(f, -1.0, eta - del, 1e-13) +
                   oracle::adaptive<cd>(f, eta + del, 1.0, 1e-13);
        if (op == Op::V)
            inner += oracle::adaptive_split<cd>(f, eta - del, eta + del, {eta}, 1e-16);
        else
            inner += del * (f(eta - del) + f(eta + del));
        sum += go.weights[i] * std::sqrt(1 - eta * eta) * cqmtf::specfun::cheb_u(l, eta) * inner;
    }
    return sum;
}

}  // namespace bio_oracle
