#include <doctest.h>

#include "cqmtf/errors.hpp"
#include "cqmtf/geometry.hpp"

#include <cmath>

using namespace cqmtf;

namespace {

std::vector<Scene> all_scenes() {
    std::vector<Scene> s;
    s.push_back(build_circle_one(0.5, {1, 0.5}));
    s.push_back(build_circle_two(0.5, {1, 0.5, 0.25}));
    s.push_back(build_square_four(1.0, {1, 0.5, 0.25, 0.5, 0.25}));
    s.push_back(build_kite_two({1, 0.5, 0.25}));
    return s;
}

}  // namespace

TEST_CASE("normals point out of their subdomain") {
    for (const Scene& sc : all_scenes()) {
        CAPTURE(sc.name());
        for (int i = 0; i < sc.num_subdomains(); ++i)
            for (const auto& v : sc.sides(i))
                for (double t : {-0.8, -0.1, 0.35, 0.9}) {
                    const Vec2 x = v.point(t), n = v.normal(t);
                    CHECK(sc.inside(i, x - 1e-3 * n));
                    CHECK_FALSE(sc.inside(i, x + 1e-3 * n));
                    CHECK(std::abs(n.norm() - 1.0) < 1e-14);
                }
    }
}

TEST_CASE("the two sides of an interface are mirror parametrizations") {
    for (const Scene& sc : all_scenes())
        for (int k = 0; k < sc.num_interfaces(); ++k) {
            const auto& g = sc.interface(k);
            const SideView a = sc.side(g.lower(), k), b = sc.side(g.upper(), k);
            CHECK(a.reversed != b.reversed);
            for (double t : {-1.0, -0.3, 0.6}) {
                CHECK((a.point(t) - b.point(-t)).norm() < 1e-14);
                CHECK((a.normal(t) + b.normal(-t)).norm() < 1e-14);
                CHECK(std::abs(a.jacobian(t) - b.jacobian(-t)) < 1e-14);
            }
        }
}

TEST_CASE("wavespeed layout and neighbours") {
    const Scene sq = build_square_four(1.0, {1, 0.5, 0.25, 0.5, 0.25});
    // checkerboard: quadrant 1 (top-left) and 3 (bottom-right) share a speed
    CHECK(sq.locate(Vec2(-0.25, 0.25)) == 1);
    CHECK(sq.locate(Vec2(0.25, 0.25)) == 2);
    CHECK(sq.locate(Vec2(0.25, -0.25)) == 3);
    CHECK(sq.locate(Vec2(-0.25, -0.25)) == 4);
    CHECK(sq.locate(Vec2(2.0, 0.0)) == 0);
    CHECK(sq.neighbors(1) == std::vector<int>{0, 2, 4});
    CHECK(sq.neighbors(0) == std::vector<int>{1, 2, 3, 4});
    const Scene c2 = build_circle_two(0.5, {1, 0.5, 0.25});
    CHECK(c2.locate(Vec2(-0.2, 0.1)) == 1);
    CHECK(c2.locate(Vec2(0.2, 0.1)) == 2);
}

TEST_CASE("jacobian derivative of the kite") {
    const Scene k = build_kite_two({1, 0.5, 0.25});
    for (int s = 0; s < 2; ++s) {
        const auto& g = k.interface(s);
        for (double t : {-0.9, -0.2, 0.5, 0.99}) {
            const double h = 1e-5;
            const double fd = (g.jacobian(t + std::min(h, 1 - t)) - g.jacobian(t - h)) /
                              (std::min(h, 1 - t) + h);
            CHECK(g.jacobian_deriv(t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    // straight segment meets the arcs at right angles
    const auto& seg = k.interface(2);
    const auto& up = k.interface(0);
    CHECK(std::abs(seg.tangent(1.0).normalized().dot(up.tangent(-1.0).normalized())) < 1e-12);
}

TEST_CASE("malformed scenes are rejected") {
    auto seg = [](int a, int b, int left, Vec2 p, Vec2 q) {
        return Interface(a, b, left, [=](double t) { return Vec2(0.5 * (p + q) + 0.5 * t * (q - p)); },
                         [=](double) { return Vec2(0.5 * (q - p)); });
    };
    std::vector<Interface> open;
    open.push_back(seg(0, 1, 1, Vec2(0, 0), Vec2(1, 0)));
    open.push_back(seg(0, 1, 1, Vec2(1, 0), Vec2(0, 1)));
    CHECK_THROWS_AS(Scene("open", {1, 1}, open), TopologyError);
    CHECK_THROWS_AS(seg(0, 1, 2, Vec2(0, 0), Vec2(1, 0)), TopologyError);
    CHECK_THROWS_AS(build_circle_two(0.5, {1, 1}), TopologyError);
    // clockwise triangle: subdomain 1 would sit on the right
    std::vector<Interface> cw;
    cw.push_back(seg(0, 1, 1, Vec2(0, 0), Vec2(0, 1)));
    cw.push_back(seg(0, 1, 1, Vec2(0, 1), Vec2(1, 0)));
    cw.push_back(seg(0, 1, 1, Vec2(1, 0), Vec2(0, 0)));
    CHECK_THROWS_AS(Scene("cw", {1, 1}, cw), TopologyError);
    const Scene c = build_circle_one(0.5, {1, 0.5});
    CHECK_THROWS_AS(c.eval_frame(0, 1, 1.5), DomainError);
    CHECK_THROWS_AS(c.side(2, 0), std::out_of_range);
}
