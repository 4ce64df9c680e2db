#include <doctest.h>

#include "cqmtf/errors.hpp"
#include "cqmtf/postprocess.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace cqmtf;

namespace {

Eigen::VectorXcd random_vec(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) v(k) = cd(g(gen), g(gen));
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("boundary norms are positive, homogeneous and satisfy Cauchy-Schwarz") {
    const Scene sc = build_circle_two(0.5, {1, 1, 1});
    const MtfDiscretization d(sc, 10);
    for (int i = 0; i < 3; ++i) {
        const NormOperator op(d, i);
        const Eigen::VectorXcd u = random_vec(op.size(), 1 + i), v = random_vec(op.size(), 7 + i);
        for (int comp : {0, 1}) {
            const double nu = op.norm(u, comp);
            CHECK(nu > 0.0);
            CHECK(op.norm(cd(-3.0, 4.0) * u, comp) == doctest::Approx(5.0 * nu).epsilon(1e-12));
            CHECK(op.norm(u + v, comp) <= nu + op.norm(v, comp) + 1e-12);
        }
        // the -1/2 form is Hermitian positive definite
        const Eigen::MatrixXcd& H = op.minus_form();
        CHECK((H - H.adjoint()).norm() <= 1e-12 * H.norm());
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("the +1/2 to -1/2 norm ratio grows with the degree") {
    const Scene sc = build_circle_one(1.0, {1, 1});
    const MtfDiscretization d(sc, 16);
    const NormOperator op(d, 1);
    Eigen::VectorXcd lo = Eigen::VectorXcd::Zero(op.size()), hi = lo;
    lo(0) = lo(17) = 1.0;
    hi(16) = hi(33) = 1.0;
    const double rlo = op.plus_half(lo) / op.minus_half(lo);
    const double rhi = op.plus_half(hi) / op.minus_half(hi);
    CHECK(rhi > 2.0 * rlo);
}

TEST_CASE("trace error: identical, scaled and vanishing references") {
    const Scene sc = build_circle_one(0.5, {1, 0.5});
    const MtfDiscretization d(sc, 8);
    const NormOperator op(d, 1);
    Eigen::MatrixXcd ref(d.size(), 5);
    for (int n = 0; n < 5; ++n) ref.col(n) = random_vec(d.size(), 100 + n);
    for (int comp : {0, 1}) {
        CHECK(trace_error(op, d, 1, comp, ref, ref) == 0.0);
        CHECK(trace_error(op, d, 1, comp, 2.0 * ref, ref) == doctest::Approx(1.0));
        CHECK(trace_error(op, d, 1, comp, 0.5 * ref, ref) == doctest::Approx(0.5));
        const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(d.size(), 5);
        CHECK(std::isnan(trace_error(op, d, 1, comp, ref, zero)));
    }
}

TEST_CASE("field error: relative, and absolute dt-weighted for a vanishing reference") {
    Eigen::MatrixXd ref(3, 4), u(3, 4);
    ref.setConstant(2.0);
    u.setConstant(2.2);
    bool absolute = true;
    CHECK(field_error(u, ref, 0.1, &absolute) == doctest::Approx(0.1));
    CHECK_FALSE(absolute);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 4);
    const Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 4, 0.5);
    CHECK(field_error(e, zero, 0.25, &absolute) == doctest::Approx(std::sqrt(0.25 * 12 * 0.25)));
    CHECK(absolute);
}

TEST_CASE("degree change pads and truncates per side and component") {
    Eigen::VectorXcd v(6);
    v << 1, 2, 3, 4, 5, 6;  // two blocks of degree 2
    const Eigen::VectorXcd up = change_degree(v, 2, 4);
    REQUIRE(up.size() == 10);
    CHECK(up(0) == cd(1));
    CHECK(up(3) == cd(0));
    CHECK(up(5) == cd(4));
    CHECK((change_degree(up, 4, 2) - v).norm() == 0.0);
}

TEST_CASE("order estimation") {
    std::vector<double> dt{0.4, 0.2, 0.1, 0.05};
    std::vector<double> e2, noisy, flat;
    for (double h : dt) {
        e2.push_back(3.0 * h * h);
        flat.push_back(1e-3);
    }
    noisy = e2;
    noisy[2] = noisy[1] * 1.1;
    OrderFit f = estimate_order(dt, e2);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.ok);
    CHECK_FALSE(estimate_order(dt, noisy).ok);
    CHECK_FALSE(estimate_order(dt, flat).ok);
    CHECK_THROWS_AS(estimate_order({0.1, 0.05}, {1e-2, 2.5e-3}), DomainError);
}

TEST_CASE("sample points lie inside their subdomain, away from the interfaces") {
    const Scene sc = build_circle_two(0.5, {1, 1, 1});
    const auto bb = sc.bbox();
    const double diam = std::max(bb[1] - bb[0], bb[3] - bb[2]);
    for (int i = 0; i < 3; ++i) {
        const auto pts = sample_points(sc, i, 12, 0.05);
        CHECK(pts.size() == 12);
        for (const auto& p : pts) {
            CHECK(sc.locate(p) == i);
            CHECK(sc.boundary_distance(p) >= 0.05 * diam - 1e-12);
        }
    }
}

TEST_CASE("output writers: CSV table and snapshot matrix") {
    const auto dir = std::filesystem::temp_directory_path() / "cqmtf_pp_test";
    std::filesystem::create_directories(dir);
    ErrorTable t{{"N", "err"}, {{32, 0.125}, {64, 0.03125}}};
    write_error_table((dir / "t.csv").string(), "# name = x\n", t);
    CHECK(slurp((dir / "t.csv").string()) ==
          "# name = x\nN,err\n3.200000000e+01,1.250000000e-01\n6.400000000e+01,3.125000000e-02\n");

    Snapshot s;
    s.nx = 3;
    s.ny = 2;
    s.bbox = {-1, 1, -0.5, 0.5};
    s.time = 1.25;
    s.values = Eigen::MatrixXd::Zero(2, 3);
    s.values(1, 2) = std::numeric_limits<double>::quiet_NaN();
    write_snapshot((dir / "s.txt").string(), s);
    std::istringstream in(slurp((dir / "s.txt").string()));
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("nx=3 ny=2 bbox=", 0) == 0);
    CHECK(header.find("t=1.25") != std::string::npos);
    int rows = 0;
    while (std::getline(in, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("potential operator rejects points outside the subdomain or too close") {
    const Scene sc = build_circle_one(0.5, {1, 1});
    const MtfDiscretization d(sc, 8);
    CHECK_THROWS_AS(PotentialOperator(d, 1, {Vec2(1.0, 0.0)}), DomainError);
    CHECK_THROWS_AS(PotentialOperator(d, 1, {Vec2(0.499, 0.0)}, 0.01), DomainError);
    CHECK_NOTHROW(PotentialOperator(d, 1, {Vec2(0.1, 0.2)}, 0.01));
}
