#include <doctest.h>

#include "cqmtf/errors.hpp"
#include "cqmtf/mtf_system.hpp"
#include "cqmtf/specfun.hpp"

#include <cmath>

using namespace cqmtf;

namespace {

// Point source K0(s|x - z|)/(2 pi) and its gradient.
struct Source {
    cd s;
    Vec2 z;
    cd value(const Vec2& x) const { return specfun::bessel_k0(s * (x - z).norm()) / (2 * M_PI); }
    cd dn(const Vec2& x, const Vec2& n) const {
        const Vec2 d = x - z;
        const double r = d.norm();
        return -s * specfun::bessel_k1(s * r) / (2 * M_PI) * d.dot(n) / r;
    }
};

// Coefficients of the exact traces of u on the boundary of subdomain i.
Eigen::VectorXcd exact_traces(const Scene& sc, const BlockIndexMap& map, int i, const Source& u) {
    Eigen::VectorXcd c(map.subdomain_size(i));
    const int L = map.degree(), nb = L + 1;
    for (const auto& v : sc.sides(i)) {
        const int o = map.offset(i, v.interface, 0) - map.subdomain_offset(i);
        c.segment(o, nb) = project_trace(v, [&](double t) { return u.value(v.point(t)); }, L);
        c.segment(o + nb, nb) =
            project_trace(v, [&](double t) { return u.dn(v.point(t), v.normal(t)); }, L);
    }
    return c;
}

double calderon_residual(const Scene& sc, int L, int i, cd s, const Source& u) {
    const MtfDiscretization d(sc, L);
    const Eigen::VectorXcd c = exact_traces(sc, d.map(), i, u);
    const Eigen::MatrixXcd A = d.local(i).calderon(s / sc.wavespeed(i));
    Eigen::VectorXcd half = Eigen::VectorXcd::Zero(c.size());
    const int nb = L + 1;
    for (const auto& v : sc.sides(i)) {
        const int o = d.map().offset(i, v.interface, 0) - d.map().subdomain_offset(i);
        const auto& M = d.mass(i, v.interface);
        half.segment(o, nb) = 0.5 * M * c.segment(o, nb);
        half.segment(o + nb, nb) = 0.5 * M * c.segment(o + nb, nb);
    }
    return (A * c - half).norm() / half.norm();
}

}  // namespace

TEST_CASE("Calderon identity on the unit circle") {
    const Scene sc = build_circle_one(1.0, {1.0, 1.0});
    const cd s(2, 3);
    // interior: source outside; exterior: source inside
    CHECK(calderon_residual(sc, 40, 1, s, {s, Vec2(2.5, 0.3)}) < 1e-8);
    CHECK(calderon_residual(sc, 40, 0, s, {s, Vec2(0.2, -0.1)}) < 1e-8);
}

TEST_CASE("Calderon identity on subdomains with corners") {
    const Scene sc = build_circle_two(0.5, {1.0, 1.0, 1.0});
    const cd s(1, -2);
    CHECK(calderon_residual(sc, 40, 1, s, {s, Vec2(1.1, 0.4)}) < 1e-6);
    CHECK(calderon_residual(sc, 40, 2, s, {s, Vec2(-1.1, 0.4)}) < 1e-6);
    CHECK(calderon_residual(sc, 40, 0, s, {s, Vec2(0.1, 0.05)}) < 1e-6);
    const Scene sq = build_square_four(1.0, {1, 1, 1, 1, 1});
    CHECK(calderon_residual(sq, 30, 2, s, {s, Vec2(-0.3, -0.4)}) < 1e-5);
}

TEST_CASE("manufactured transmission problem with distinct wavespeeds") {
    const Scene sc = build_circle_two(0.5, {1.0, 0.5, 0.25});
    const cd s(1.0, -1.0);
    const int L = 30;
    const MtfDiscretization d(sc, L);
    // field in each subdomain: a point source placed outside it
    const std::vector<Source> u{{s / 1.0, Vec2(0.05, 0.1)}, {s / 0.5, Vec2(0.8, 0.7)},
                                {s / 0.25, Vec2(-0.9, -0.2)}};
    auto jumps = [&](int k, const Vec2& x, const Vec2& n) -> std::pair<cd, cd> {
        const auto& g = sc.interface(k);
        const Source &lo = u[g.lower()], &up = u[g.upper()];
        return {lo.value(x) - up.value(x), lo.dn(x, n) - up.dn(x, n)};
    };
    const MtfSystem sys(d, s);
    const Eigen::VectorXcd x = sys.solve(d.rhs(jumps));
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXcd ex = exact_traces(sc, d.map(), i, u[i]);
        const Eigen::VectorXcd got = x.segment(d.map().subdomain_offset(i), d.map().subdomain_size(i));
        CAPTURE(i);
        CHECK((got - ex).norm() / ex.norm() < 1e-6);
    }
    CHECK(sys.rcond() > 1e-8);
}

TEST_CASE("frequency count is validated") {
    const Scene sc = build_circle_one(1.0, {1.0, 0.5});
    const MtfDiscretization d(sc, 4);
    CHECK_THROWS_AS(d.assemble(std::vector<cd>{1.0}), DomainError);
}
