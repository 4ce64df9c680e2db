#include "cqmtf/experiments.hpp"

#include "cqmtf/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace cqmtf {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> error_columns(int M, const std::vector<std::string>& lead) {
    std::vector<std::string> cols = lead;
    for (const char* kind : {"dirichlet", "neumann", "field"})
        for (int i = 0; i < M; ++i) cols.push_back(std::string(kind) + "_" + std::to_string(i));
    return cols;
}

}  // namespace

QuadratureSettings quadrature_of(const RunConfig& cfg) {
    QuadratureSettings q;
    q.Q = cfg.Q;
    q.Ng = cfg.Ng;
    return q;
}

FreqConvResult freq_conv(const RunConfig& cfg, std::ostream* log) {
    if (cfg.experiment != "frequency") throw ConfigError("freq-conv needs a frequency preset");
    const Scene scene = make_scene(cfg);
    const int M = scene.num_subdomains();
    std::vector<std::vector<Vec2>> pts(M);
    for (int i = 0; i < M; ++i) pts[i] = sample_points(scene, i, cfg.field_points, cfg.guard);

    struct Sol {
        Eigen::VectorXcd x;
        std::vector<Eigen::VectorXcd> u;
    };
    auto solve_at = [&](int L) {
        const auto t0 = std::chrono::steady_clock::now();
        const MtfDiscretization disc(scene, L, quadrature_of(cfg));
        const MtfSystem sys(disc, cfg.s);
        Sol sol;
        sol.x = sys.solve(disc.rhs(plane_wave_jumps(scene, cfg.s[0], cfg.d)));
        for (int i = 0; i < M; ++i) {
            const PotentialOperator pot(disc, i, pts[i]);
            sol.u.push_back(pot.matrix(cfg.s[i]) *
                            sol.x.segment(disc.map().subdomain_offset(i), disc.map().subdomain_size(i)));
        }
        if (log)
            *log << "  L = " << L << ": dim " << disc.size() << ", rcond " << sys.rcond() << ", "
                 << seconds_since(t0) << " s\n";
        return sol;
    };

    const Sol ref = solve_at(cfg.L_ref);
    const MtfDiscretization dref(scene, cfg.L_ref, quadrature_of(cfg));
    std::vector<NormOperator> norms;
    for (int i = 0; i < M; ++i) norms.emplace_back(dref, i);

    FreqConvResult res;
    res.table.columns = error_columns(M, {"L"});
    res.dirichlet.assign(M, {});
    res.neumann.assign(M, {});
    res.field.assign(M, {});
    for (int L : cfg.L_list) {
        if (L >= cfg.L_ref) continue;
        const Sol sol = solve_at(L);
        const Eigen::VectorXcd x = change_degree(sol.x, L, cfg.L_ref);
        std::vector<double> row{double(L)};
        std::vector<double> d(M), n(M), f(M);
        for (int i = 0; i < M; ++i) {
            d[i] = trace_error(norms[i], dref, i, 0, x, ref.x);
            n[i] = trace_error(norms[i], dref, i, 1, x, ref.x);
            f[i] = (sol.u[i] - ref.u[i]).norm() / ref.u[i].norm();
            res.dirichlet[i].push_back(d[i]);
            res.neumann[i].push_back(n[i]);
            res.field[i].push_back(f[i]);
        }
        row.insert(row.end(), d.begin(), d.end());
        row.insert(row.end(), n.begin(), n.end());
        row.insert(row.end(), f.begin(), f.end());
        res.L.push_back(L);
        res.table.rows.push_back(row);
    }
    return res;
}

std::vector<SweepResult> sweep(const RunConfig& cfg, const std::vector<std::string>& schemes,
                               const std::vector<int>& Ns_in, std::ostream* log) {
    if (cfg.experiment == "frequency") throw ConfigError("sweep needs a time-domain preset");
    std::vector<int> Ns = Ns_in;
    std::sort(Ns.begin(), Ns.end());
    const bool exact = cfg.reference == "exact";
    if (Ns.size() < (exact ? 1u : 2u)) throw ConfigError("sweep needs more values of N");
    if (!exact)
        for (int N : Ns)
            if (Ns.back() % N != 0) throw ConfigError("finest N must be a multiple of every N");

    const Scene scene = make_scene(cfg);
    const int M = scene.num_subdomains();
    const MtfDiscretization disc(scene, cfg.L, quadrature_of(cfg));
    const TdProblem problem(cfg);
    std::vector<NormOperator> norms;
    std::vector<PotentialOperator> pots;
    for (int i = 0; i < M; ++i) {
        norms.emplace_back(disc, i);
        pots.emplace_back(disc, i, sample_points(scene, i, cfg.field_points, cfg.guard));
    }
    CqOptions opt;
    opt.threads = cfg.threads;

    std::vector<SweepResult> out;
    for (const std::string& name : schemes) {
        const auto t0 = std::chrono::steady_clock::now();
        const CqScheme scheme = CqScheme::from_name(name);
        struct Sol {
            int N;
            Eigen::MatrixXd steps;
            std::vector<Eigen::MatrixXd> u;
        };
        std::vector<Sol> sols;
        for (int N : Ns) {
            const TimeGrid grid{N, cfg.T};
            const MtfDiscretization tdisc(
                scene, cfg.L, time_domain_quadrature(scene, cfg.L, scheme, grid, quadrature_of(cfg), opt));
            const TdRun run = run_simulation(problem, tdisc, scheme, grid, opt);
            Sol s{N, run.steps, {}};
            for (int i = 0; i < M; ++i) s.u.push_back(field_time_domain(disc, pots[i], run, opt));
            if (log)
                *log << "  " << name << " N = " << N << ": " << run.solves << " solves, min rcond "
                     << run.min_rcond << ", " << run.seconds << " s\n";
            sols.push_back(std::move(s));
        }

        SweepResult res;
        res.scheme = name;
        res.table.columns = error_columns(M, {"N", "dt"});
        res.field_absolute.assign(M, false);
        const size_t nrows = exact ? sols.size() : sols.size() - 1;
        for (size_t r = 0; r < nrows; ++r) {
            const Sol& s = sols[r];
            const double dt = cfg.T / s.N;
            Eigen::MatrixXcd ref(disc.size(), s.N + 1);
            std::vector<Eigen::MatrixXd> uref(M);
            if (exact) {
                for (int n = 0; n <= s.N; ++n) ref.col(n) = problem.exact_traces(disc, n * dt).cast<cd>();
                for (int i = 0; i < M; ++i) {
                    uref[i].resize(pots[i].points().size(), s.N + 1);
                    for (size_t p = 0; p < pots[i].points().size(); ++p)
                        for (int n = 0; n <= s.N; ++n) uref[i](p, n) = problem.exact(i, pots[i].points()[p], n * dt);
                }
            } else {
                const Sol& f = sols.back();
                const int stride = f.N / s.N;
                for (int n = 0; n <= s.N; ++n) ref.col(n) = f.steps.col(n * stride).cast<cd>();
                for (int i = 0; i < M; ++i) {
                    uref[i].resize(f.u[i].rows(), s.N + 1);
                    for (int n = 0; n <= s.N; ++n) uref[i].col(n) = f.u[i].col(n * stride);
                }
            }
            const Eigen::MatrixXcd x = s.steps.cast<cd>();
            std::vector<double> row{double(s.N), dt};
            std::vector<double> d(M), nn(M), fe(M);
            for (int i = 0; i < M; ++i) {
                d[i] = trace_error(norms[i], disc, i, 0, x, ref);
                nn[i] = trace_error(norms[i], disc, i, 1, x, ref);
                bool absolute = false;
                fe[i] = field_error(s.u[i], uref[i], dt, &absolute);
                res.field_absolute[i] = absolute;
            }
            row.insert(row.end(), d.begin(), d.end());
            row.insert(row.end(), nn.begin(), nn.end());
            row.insert(row.end(), fe.begin(), fe.end());
            res.table.rows.push_back(row);
        }
        if (res.table.rows.size() >= 3)
            for (size_t c = 2; c < res.table.columns.size(); ++c) {
                std::vector<double> dts, errs;
                bool usable = true;
                for (auto& row : res.table.rows) {
                    dts.push_back(row[1]);
                    errs.push_back(row[c]);
                    usable = usable && std::isfinite(row[c]) && row[c] > 0;
                }
                if (usable) res.orders[res.table.columns[c]] = estimate_order(dts, errs);
            }
        res.seconds = seconds_since(t0);
        out.push_back(std::move(res));
    }
    return out;
}

ErrorTable density_norm_history(const MtfDiscretization& disc, const TdRun& run) {
    const int M = disc.scene().num_subdomains();
    std::vector<NormOperator> norms;
    for (int i = 0; i < M; ++i) norms.emplace_back(disc, i);
    ErrorTable t;
    t.columns.push_back("t");
    for (int i = 0; i < M; ++i) {
        t.columns.push_back("dirichlet_" + std::to_string(i));
        t.columns.push_back("neumann_" + std::to_string(i));
    }
    for (int n = 0; n <= run.grid.N; ++n) {
        std::vector<double> row{n * run.grid.dt()};
        const Eigen::VectorXcd x = run.steps.col(n).cast<cd>();
        for (int i = 0; i < M; ++i) {
            row.push_back(norms[i].plus_half(boundary_component(disc, i, 0, x)));
            row.push_back(norms[i].minus_half(boundary_component(disc, i, 1, x)));
        }
        t.rows.push_back(row);
    }
    return t;
}

double arrival_time(const RunConfig& cfg, const Scene& scene) {
    // f vanishes for arguments below the window start 0.2
    // and the front travels along d, so it first touches the smallest x.d
    double reach = 1e300;
    for (int k = 0; k < scene.num_interfaces(); ++k)
        for (int j = 0; j <= 400; ++j) {
            const Vec2 p = scene.interface(k).point(-1.0 + 2.0 * j / 400);
            reach = std::min(reach, p.dot(cfg.d.normalized()));
        }
    if (cfg.experiment == "planewave") return cfg.tlag + (0.2 + reach) / cfg.c.at(0);
    return (cfg.tlag + 0.2 + reach) / cfg.c.at(1);
}

}  // namespace cqmtf
