#include "cqmtf/td_driver.hpp"

#include "cqmtf/errors.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

namespace cqmtf {

TdProblem::TdProblem(const RunConfig& cfg) : cfg_(cfg) {
    if (cfg.experiment == "planewave") {
        wave_ = TravellingWave::plane_wave(cfg.c.at(0), cfg.omega, cfg.tlag, cfg.d);
    } else if (cfg.experiment == "manufactured") {
        for (size_t i = 2; i < cfg.c.size(); ++i)
            if (cfg.c[i] != cfg.c[1])
                throw ConfigError("manufactured runs need equal interior wavespeeds");
        wave_ = TravellingWave::manufactured(cfg.c.at(1), cfg.omega, cfg.tlag, cfg.d);
    } else {
        throw ConfigError("time-domain run needs a planewave or manufactured experiment");
    }
}

double TdProblem::source(int i, const Vec2& x, double t) const {
    if (cfg_.experiment == "planewave") return i == 0 ? -amplitude * wave_.value(x, t) : 0.0;
    return i == 0 ? 0.0 : amplitude * wave_.value(x, t);
}

double TdProblem::source_dn(int i, const Vec2& x, const Vec2& n, double t) const {
    if (cfg_.experiment == "planewave") return i == 0 ? -amplitude * wave_.dn(x, n, t) : 0.0;
    return i == 0 ? 0.0 : amplitude * wave_.dn(x, n, t);
}

double TdProblem::incident(const Vec2& x, double t) const {
    return cfg_.experiment == "planewave" ? amplitude * wave_.value(x, t) : 0.0;
}

double TdProblem::exact(int i, const Vec2& x, double t) const {
    if (!has_exact()) throw DomainError("no closed-form solution for this experiment");
    return source(i, x, t);
}

Eigen::VectorXd TdProblem::exact_traces(const MtfDiscretization& disc, double t) const {
    if (!has_exact()) throw DomainError("no closed-form solution for this experiment");
    const Scene& sc = disc.scene();
    const int L = disc.degree();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(disc.size());
    for (int i = 0; i < sc.num_subdomains(); ++i)
        for (const SideView& sv : sc.sides(i)) {
            auto d = project_trace(sv, [&](double u) -> cd { return exact(i, sv.point(u), t); }, L);
            auto n = project_trace(
                sv, [&](double u) -> cd { return source_dn(i, sv.point(u), sv.normal(u), t); }, L);
            out.segment(disc.map().offset(i, sv.interface, 0), L + 1) = d.real();
            out.segment(disc.map().offset(i, sv.interface, 1), L + 1) = n.real();
        }
    return out;
}

Eigen::MatrixXcd TdProblem::rhs(const MtfDiscretization& disc, const std::vector<double>& times) const {
    const Scene& sc = disc.scene();
    const int nt = static_cast<int>(times.size());
    auto a = [&](int k, const Vec2& x, const Vec2& n) {
        (void)n;
        const auto& g = sc.interface(k);
        Eigen::VectorXcd v(nt);
        for (int j = 0; j < nt; ++j)
            v(j) = source(g.lower(), x, times[j]) - source(g.upper(), x, times[j]);
        return v;
    };
    auto b = [&](int k, const Vec2& x, const Vec2& n) {
        const auto& g = sc.interface(k);
        Eigen::VectorXcd v(nt);
        for (int j = 0; j < nt; ++j)
            v(j) = source_dn(g.lower(), x, n, times[j]) - source_dn(g.upper(), x, n, times[j]);
        return v;
    };
    return disc.rhs(a, b, nt);
}

TransferEvaluator mtf_evaluator(const MtfDiscretization& disc, double* min_rcond, int* solves) {
    auto mu = std::make_shared<std::mutex>();
    TransferEvaluator ev;
    ev.solve = [&disc, min_rcond, solves, mu](cd s, const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd {
        try {
            MtfSystem sys(disc, s);
            {
                std::lock_guard<std::mutex> lock(*mu);
                if (min_rcond) *min_rcond = std::min(*min_rcond, sys.rcond());
                if (solves) ++*solves;
            }
            return sys.solve(x);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (s = " + std::to_string(s.real()) +
                                 (s.imag() < 0 ? "" : "+") + std::to_string(s.imag()) + "i)");
        }
    };
    ev.apply = [&disc](cd s, const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd {
        return disc.assemble(s) * x;
    };
    return ev;
}

double max_contour_frequency(const CqScheme& scheme, const TimeGrid& grid, const CqOptions& opt) {
    const int M = opt.oversample * (grid.N + 1);
    const double lambda = std::pow(2.220446049250313e-16, 1.0 / (M + grid.N - 1));
    double smax = 0.0;
    for (int k = 0; k <= M / 2; ++k) {
        const cd z = lambda * std::polar(1.0, -2.0 * M_PI * k / M);
        const Eigen::MatrixXcd D = scheme.delta(z);
        if (D.rows() == 1) smax = std::max(smax, std::abs(D(0, 0)));
        else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(D, false);
            smax = std::max(smax, es.eigenvalues().cwiseAbs().maxCoeff());
        }
    }
    return smax / grid.dt();
}

QuadratureSettings time_domain_quadrature(const Scene& scene, int L, const CqScheme& scheme,
                                          const TimeGrid& grid, const QuadratureSettings& base,
                                          const CqOptions& opt) {
    double jmax = 0.0;
    for (int k = 0; k < scene.num_interfaces(); ++k)
        for (int j = 0; j <= 200; ++j)
            jmax = std::max(jmax, scene.interface(k).jacobian(-1.0 + 2.0 * j / 200));
    double cmin = 1e300;
    for (double c : scene.wavespeeds()) cmin = std::min(cmin, c);
    const double kappa = max_contour_frequency(scheme, grid, opt) / cmin * jmax;
    QuadratureSettings q = base;
    int Q = std::max(base.Q > 0 ? base.Q : default_inner_nodes(L),
                     static_cast<int>(std::ceil(0.4 * kappa)));
    Q += Q % 2;
    q.Q = Q;
    q.Ng = std::max(base.Ng, Q);
    q.split_re_limit = -1.0;
    q.split_abs_limit = -1.0;
    return q;
}

TdRun run_simulation(const TdProblem& problem, const MtfDiscretization& disc, const CqScheme& scheme,
                     const TimeGrid& grid, const CqOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    TdRun run;
    run.scheme = scheme;
    run.grid = grid;
    const Eigen::MatrixXcd g = problem.rhs(disc, stage_times(scheme, grid));
    const TransferEvaluator ev = mtf_evaluator(disc, &run.min_rcond, &run.solves);
    run.stages = cq_solve(scheme, grid, ev, g, opt, &run.diag);
    run.steps = step_values(scheme, run.stages).real();
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

}  // namespace cqmtf
