#include <doctest.h>

#include "bio_oracles.hpp"
#include "cqmtf/bio_assembly.hpp"
#include "cqmtf/errors.hpp"

#include <cmath>

using namespace cqmtf;
using bio_oracle::Op;

namespace {

Interface seg(int a, int b, Vec2 p, Vec2 q) {
    return Interface(a, b, a, [=](double t) { return Vec2(0.5 * (p + q) + 0.5 * t * (q - p)); },
                     [=](double) { return Vec2(0.5 * (q - p)); },
                     [](double) { return Vec2(0, 0); });
}

Interface arc(int a, int b, double r, Vec2 c, double t0, double t1) {
    const double m = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
    return Interface(
        a, b, a, [=](double t) { return Vec2(c + r * Vec2(std::cos(m + h * t), std::sin(m + h * t))); },
        [=](double t) { return Vec2(r * h * Vec2(-std::sin(m + h * t), std::cos(m + h * t))); },
        [=](double t) { return Vec2(-r * h * h * Vec2(std::cos(m + h * t), std::sin(m + h * t))); });
}

SideView view(const Interface& g) {
    SideView v;
    v.curve = &g;
    v.subdomain = g.left();
    return v;
}

double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("separated sides: all four blocks against dense quadrature") {
    const Interface ga = seg(1, 0, Vec2(0, 0), Vec2(1, 0.2));
    const Interface gb = arc(1, 0, 0.6, Vec2(0.4, 1.6), -2.4, -0.6);
    // parabola: non-constant speed exercises the J' terms of W
    const Interface gc(1, 0, 1, [](double t) { return Vec2(1.8 + 0.4 * t, 0.9 + 0.15 * t * t); },
                       [](double t) { return Vec2(0.4, 0.3 * t); }, [](double) { return Vec2(0, 0.3); });
    const int L = 8;
    for (cd s : {cd(2, 3), cd(0.5, -4), cd(1, 0)}) {
        for (auto [tr, te] : {std::pair{&ga, &gb}, std::pair{&gb, &ga}, std::pair{&gc, &ga},
                              std::pair{&gb, &gc}}) {
            const SideView a = view(*tr), b = view(*te);
            const OperatorBlocks ob = assemble_pair(a, b, s, L);
            CHECK(rel(ob.V, bio_oracle::separated_block(Op::V, a, b, s, L)) < 1e-10);
            CHECK(rel(ob.K, bio_oracle::separated_block(Op::K, a, b, s, L)) < 1e-10);
            CHECK(rel(ob.Kp, bio_oracle::separated_block(Op::Kp, a, b, s, L)) < 1e-10);
            CHECK(rel(ob.W, bio_oracle::separated_block(Op::W, a, b, s, L)) < 1e-9);
        }
    }
}

TEST_CASE("self blocks against adaptive quadrature") {
    const Interface g = arc(1, 0, 0.7, Vec2(0, 0), 0.3, 2.2);
    const SideView v = view(g);
    const int L = 8;
    const cd s(2, 3);
    const OperatorBlocks ob = assemble_pair(v, v, s, L);
    for (auto [l, m] : {std::pair{0, 0}, std::pair{3, 5}, std::pair{8, 2}, std::pair{7, 7}}) {
        CAPTURE(l);
        CAPTURE(m);
        CHECK(std::abs(ob.V(l, m) - bio_oracle::self_entry(Op::V, v, s, l, m)) < 1e-9);
        CHECK(std::abs(ob.K(l, m) - bio_oracle::self_entry(Op::K, v, s, l, m)) < 1e-9);
        CHECK(std::abs(ob.Kp(l, m) - bio_oracle::self_entry(Op::Kp, v, s, l, m)) < 1e-9);
    }
}

TEST_CASE("single layer is symmetric in the Galerkin sense on a straight self block") {
    // on a segment with constant J, <V xi_m, chi_l> relates to a symmetric
    // bilinear form only through the weights; check K' = K^T-type duality instead:
    // for a segment (x-y).n vanishes, so K and K' are zero.
    const Interface g = seg(1, 0, Vec2(-0.3, 0.1), Vec2(0.8, 0.5));
    const SideView v = view(g);
    const OperatorBlocks ob = assemble_pair(v, v, cd(1.5, -2.0), 6);
    CHECK(ob.K.norm() < 1e-13);
    CHECK(ob.Kp.norm() < 1e-13);
}

TEST_CASE("regularized remainder stays bounded near the diagonal") {
    const Scene sc = build_kite_two({1, 0.5, 0.25});
    for (const auto& v : sc.sides(1)) CHECK(split_remainder_variation(v, cd(1.0, 2.0), 0.2) < 0.05);
}
