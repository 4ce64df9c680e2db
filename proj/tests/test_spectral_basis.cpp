#include <doctest.h>

#include "cqmtf/errors.hpp"
#include "cqmtf/spectral_basis.hpp"
#include "cqmtf/specfun.hpp"
#include "oracle.hpp"

#include <cmath>
#include <set>

using namespace cqmtf;

TEST_CASE("block index map is a bijection") {
    const Scene sc = build_circle_two(0.5, {1, 0.5, 0.25});
    const int L = 7;
    const BlockIndexMap map(sc, L);
    CHECK(map.size() == 12 * (L + 1));
    std::set<int> seen;
    for (int i = 0; i < 3; ++i)
        for (const auto& v : sc.sides(i))
            for (int comp = 0; comp < 2; ++comp) {
                const int o = map.offset(i, v.interface, comp);
                CHECK(o % (L + 1) == 0);
                CHECK(o >= map.subdomain_offset(i));
                CHECK(o < map.subdomain_offset(i) + map.subdomain_size(i));
                seen.insert(o);
            }
    CHECK(seen.size() == 12);
    // Dirichlet block precedes the Neumann block of the same side
    CHECK(map.offset(1, 2, 1) == map.offset(1, 2, 0) + L + 1);
    CHECK_THROWS_AS(map.offset(0, 2, 0), TopologyError);
}

TEST_CASE("duality block on a straight interface") {
    const Scene sc = build_circle_two(0.5, {1, 0.5, 0.25});
    const SideView a = sc.side(1, 2), b = sc.side(2, 2);
    const int L = 9;
    const auto X = duality_block(b, a, L);
    const auto M = duality_block(a, a, L);
    const double J = 0.5;
    for (int l = 0; l <= L; ++l)
        for (int m = 0; m <= L; ++m) {
            const double ex = (l == m) ? M_PI / 2 / J : 0.0;
            CHECK(std::abs(M(l, m) - ex) < 1e-13);
            CHECK(std::abs(X(l, m) - (m % 2 ? -ex : ex)) < 1e-13);
        }
}

TEST_CASE("duality block on a curved interface against quadrature") {
    const Scene sc = build_kite_two({1, 0.5, 0.25});
    const SideView a = sc.side(0, 0), b = sc.side(1, 0);
    const int L = 6;
    const auto X = duality_block(b, a, L);
    for (int l : {0, 3, 6})
        for (int m : {1, 4}) {
            std::function<double(double)> f = [&](double th) {
                const double t = std::cos(th);
                return specfun::cheb_u(m, -t) * specfun::cheb_u(l, t) * std::sin(th) *
                       std::sin(th) / a.jacobian(t);
            };
            const double ref = oracle::adaptive<double>(f, 0, M_PI, 1e-14);
            CHECK(std::abs(X(l, m) - ref) < 1e-11);
        }
}

TEST_CASE("trace projection and evaluation") {
    const Scene sc = build_circle_two(0.5, {1, 0.5, 0.25});
    const SideView s = sc.side(0, 1);
    auto f = [](double t) { return cd(std::cos(3 * t), std::exp(t)); };
    const auto c = project_trace(s, f, 40);
    for (double t : {-0.99, -0.5, 0.1, 0.8})
        CHECK(std::abs(eval_trace(s, c, t) - f(t)) < 1e-12);
    const auto b = test_moments([&](double t) { return f(t); }, 5, 64);
    for (int l = 0; l <= 5; ++l) {
        std::function<cd(double)> g = [&](double th) {
            const double t = std::cos(th);
            return f(t) * specfun::cheb_u(l, t) * std::sin(th) * std::sin(th);
        };
        CHECK(std::abs(b[l] - oracle::adaptive<cd>(g, 0, M_PI, 1e-14)) < 1e-12);
    }
}

TEST_CASE("trial gram matrix") {
    const Scene sc = build_kite_two({1, 0.5, 0.25});
    const SideView s = sc.side(1, 0);
    const auto G = trial_gram(s, 8);
    std::function<double(double)> f = [&](double t) {
        return specfun::cheb_u(8, t) * specfun::cheb_u(5, t) / s.jacobian(t);
    };
    CHECK(std::abs(G(8, 5) - oracle::adaptive<double>(f, -1, 1, 1e-14)) < 1e-11);
    CHECK((G - G.transpose()).norm() < 1e-13);
}
