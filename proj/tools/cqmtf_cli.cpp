// Command-line front end: self-tests, frequency-domain convergence, single
// time-domain runs and time-step sweeps.

#include "cqmtf/config.hpp"
#include "cqmtf/cq_engine.hpp"
#include "cqmtf/errors.hpp"
#include "cqmtf/experiments.hpp"
#include "cqmtf/mtf_system.hpp"
#include "cqmtf/postprocess.hpp"
#include "cqmtf/specfun.hpp"
#include "cqmtf/td_driver.hpp"
#include "cqmtf/transforms.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cqmtf;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kNumerical = 3, kOther = 4 };

// ---------------------------------------------------------------- selftest

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::vector<Check> suite_quadrature() {
    std::vector<Check> out;
    double err = 0;
    const auto gl = specfun::gauss_legendre(12);
    for (int k = 0; k < 24; ++k) {
        double sum = 0;
        for (size_t q = 0; q < gl.nodes.size(); ++q) sum += gl.weights[q] * std::pow(gl.nodes[q], k);
        err = std::max(err, std::abs(sum - (k % 2 ? 0.0 : 2.0 / (k + 1))));
    }
    out.push_back({"gauss_legendre_exactness", err < 1e-13, "max error " + fmt(err)});
    // log weights against the closed form int log|x-t|/sqrt(1-t^2) dt = -pi log 2 (|x| <= 1)
    const auto w = transforms::log_weights(32, 0.3, false);
    double s = 0;
    for (double v : w) s += v;
    const double e2 = std::abs(s + M_PI * std::log(2.0));
    out.push_back({"log_weights_constant", e2 < 1e-12, "error " + fmt(e2)});
    return out;
}

std::vector<Check> suite_bessel() {
    std::vector<Check> out;
    // Wronskian I0 K1 + I1 K0 = 1/z
    double err = 0;
    for (cd z : {cd(0.3, 0.1), cd(2.5, -4.0), cd(9.0, 12.0), cd(0.0, 20.0)}) {
        const auto k = specfun::bessel_k01(z);
        const auto i = specfun::bessel_i01(z);
        err = std::max(err, std::abs((i.i0 * k.k1 + i.i1_over_z * z * k.k0) * z - 1.0));
    }
    out.push_back({"wronskian", err < 1e-12, "max error " + fmt(err)});
    // K0(1) reference value
    const double e2 = std::abs(specfun::bessel_k0(1.0) - 0.42102443824070833);
    out.push_back({"k0_reference", e2 < 1e-14, "error " + fmt(e2)});
    return out;
}

std::vector<Check> suite_cq(double perturb) {
    std::vector<Check> out;
    const CqScheme bdf = perturb != 0.0 ? CqScheme::bdf2_with_constant(1.5 + perturb) : CqScheme::bdf2();
    const TimeGrid grid{32, 2.0};
    const auto w = cq_weights(bdf, grid, [](cd s) { return s; });
    const double dt = grid.dt();
    double err = 0;
    for (int n = 0; n <= grid.N; ++n) {
        const double ref = n == 0 ? 1.5 / dt : n == 1 ? -2.0 / dt : n == 2 ? 0.5 / dt : 0.0;
        err = std::max(err, std::abs(w(n) - ref));
    }
    out.push_back({"bdf2_weights", err < 1e-10, "max error " + fmt(err)});
    // round trip for a rational transfer function
    double rt = 0;
    for (const CqScheme& sc : {bdf, CqScheme::radau_iia2(), CqScheme::lobatto_iiic3()}) {
        TransferEvaluator ev;
        ev.apply = [](cd s, const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd { return (1.0 + s) / (2.0 + s) * x; };
        ev.solve = [](cd s, const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd { return (2.0 + s) / (1.0 + s) * x; };
        Eigen::MatrixXcd g(1, (grid.N + 1) * sc.stages());
        for (int k = 0; k < g.cols(); ++k) g(0, k) = std::sin(0.37 * k) + 0.1 * k;
        const auto back = cq_forward(sc, grid, ev, cq_solve(sc, grid, ev, g));
        rt = std::max(rt, (back - g).norm() / g.norm());
    }
    out.push_back({"round_trip", rt < 1e-8, "max relative error " + fmt(rt)});
    return out;
}

std::vector<Check> suite_calderon() {
    std::vector<Check> out;
    const Scene sc = build_circle_one(1.0, {1.0, 1.0});
    const cd s(2.0, 3.0);
    const int L = 40;
    const MtfDiscretization d(sc, L);
    const Vec2 z(2.5, 0.3);
    auto u = [&](const Vec2& x) { return specfun::bessel_k0(s * (x - z).norm()) / (2 * M_PI); };
    auto dn = [&](const Vec2& x, const Vec2& n) {
        const Vec2 r = x - z;
        return -s * specfun::bessel_k1(s * r.norm()) / (2 * M_PI) * r.dot(n) / r.norm();
    };
    const int nb = L + 1;
    Eigen::VectorXcd c(d.map().subdomain_size(1)), half(c.size());
    for (const auto& v : sc.sides(1)) {
        const int o = d.map().offset(1, v.interface, 0) - d.map().subdomain_offset(1);
        c.segment(o, nb) = project_trace(v, [&](double t) { return u(v.point(t)); }, L);
        c.segment(o + nb, nb) = project_trace(v, [&](double t) { return dn(v.point(t), v.normal(t)); }, L);
        half.segment(o, nb) = 0.5 * d.mass(1, v.interface) * c.segment(o, nb);
        half.segment(o + nb, nb) = 0.5 * d.mass(1, v.interface) * c.segment(o + nb, nb);
    }
    const double res = (d.local(1).calderon(s) * c - half).norm() / half.norm();
    out.push_back({"projector_residual", res < 1e-8, "relative residual " + fmt(res)});
    return out;
}

int cmd_selftest(const std::vector<std::string>& suites_in, double perturb) {
    const std::vector<std::string> all{"quadrature", "bessel", "cq", "calderon"};
    std::vector<std::string> suites = suites_in.empty() ? all : suites_in;
    bool ok = true;
    for (const auto& name : suites) {
        std::vector<Check> checks;
        if (name == "quadrature") checks = suite_quadrature();
        else if (name == "bessel") checks = suite_bessel();
        else if (name == "cq") checks = suite_cq(perturb);
        else if (name == "calderon") checks = suite_calderon();
        else throw ConfigError("unknown suite '" + name + "' (quadrature, bessel, cq, calderon)");
        std::cout << "suite " << name << "\n";
        for (const auto& c : checks) {
            std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << name << "/" << c.name << ": "
                      << c.detail << "\n";
            ok = ok && c.pass;
        }
    }
    std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
    return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- helpers

struct Common {
    std::string preset, config;
    std::vector<std::string> sets;
    std::string scheme, out;
    int N = 0, L = 0, threads = 0;
    double T = 0;
};

void add_common(CLI::App* app, Common& c) {
    auto* g = app->add_option_group("source");
    g->add_option("--preset", c.preset, "named preset (see presets/)");
    g->add_option("--config", c.config, "key = value config file");
    g->require_option(1);
    app->add_option("--scheme", c.scheme, "bdf2 | radau2 | lobatto3");
    app->add_option("--N", c.N, "number of time steps");
    app->add_option("--L", c.L, "polynomial degree");
    app->add_option("--T", c.T, "final time");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--threads", c.threads, "worker threads for frequency solves");
    app->add_option("--set", c.sets, "override any config key (key=value)");
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config.empty() ? load_preset(c.preset) : load_config_file(c.config);
    auto set = [&](const std::string& k, const std::string& v) { set_option(cfg, k, v); };
    if (!c.scheme.empty()) set("scheme", c.scheme);
    if (c.N) set("N", std::to_string(c.N));
    if (c.L) set("L", std::to_string(c.L));
    if (c.T) set("T", std::to_string(c.T));
    if (!c.out.empty()) set("out", c.out);
    if (c.threads) set("threads", std::to_string(c.threads));
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

void print_table(const ErrorTable& t) {
    for (size_t k = 0; k < t.columns.size(); ++k) std::cout << (k ? "  " : "") << t.columns[k];
    std::cout << "\n";
    for (const auto& row : t.rows) {
        for (size_t k = 0; k < row.size(); ++k) std::cout << (k ? "  " : "") << fmt(row[k]);
        std::cout << "\n";
    }
}

// ---------------------------------------------------------------- commands

int cmd_freq_conv(const RunConfig& cfg) {
    std::cout << metadata_header(cfg);
    const FreqConvResult r = freq_conv(cfg, &std::cout);
    print_table(r.table);
    if (r.L.size() >= 3) {
        std::vector<double> h;
        for (int L : r.L) h.push_back(1.0 / L);
        for (size_t c = 1; c < r.table.columns.size(); ++c) {
            std::vector<double> e;
            for (auto& row : r.table.rows) e.push_back(row[c]);
            const OrderFit f = estimate_order(h, e);
            std::cout << "rate in 1/L  " << r.table.columns[c] << ": " << fmt(f.slope)
                      << (f.ok ? "" : "  (low quality)") << "\n";
        }
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/" + cfg.name + "_freq_errors.csv";
    write_error_table(path, metadata_header(cfg), r.table);
    std::cout << "wrote " << path << "\n";
    return kOk;
}

int cmd_run(const RunConfig& cfg, bool snapshots) {
    if (cfg.experiment == "frequency") throw ConfigError("run needs a time-domain preset");
    std::cout << metadata_header(cfg);
    const Scene scene = make_scene(cfg);
    const CqScheme scheme = CqScheme::from_name(cfg.scheme);
    const TimeGrid grid{cfg.N, cfg.T};
    CqOptions opt;
    opt.threads = cfg.threads;
    const QuadratureSettings q = time_domain_quadrature(scene, cfg.L, scheme, grid, quadrature_of(cfg), opt);
    const MtfDiscretization disc(scene, cfg.L, q);
    const TdProblem problem(cfg);
    const TdRun run = run_simulation(problem, disc, scheme, grid, opt);
    std::cout << "scheme " << scheme.name() << ", N " << grid.N << ", dt " << grid.dt() << ", L "
              << cfg.L << ", Q " << q.Q << ", unknowns " << disc.size() << "\n"
              << "contour radius " << run.diag.lambda << ", frequencies " << run.diag.frequencies
              << ", eigen fallbacks " << run.diag.fallbacks << ", solves " << run.solves
              << ", min rcond " << run.min_rcond << ", " << run.seconds << " s\n";

    std::filesystem::create_directories(cfg.out_dir);
    const std::string stem = cfg.out_dir + "/" + cfg.name + "_" + scheme.name() + "_N" + std::to_string(grid.N);
    const ErrorTable hist = density_norm_history(disc, run);
    write_error_table(stem + "_norms.csv", metadata_header(cfg), hist);
    std::cout << "wrote " << stem << "_norms.csv\n";
    if (cfg.experiment == "planewave") {
        const double ta = arrival_time(cfg, scene);
        double peak = 0, before = 0;
        for (const auto& row : hist.rows) {
            double m = 0;
            for (size_t k = 1; k < row.size(); ++k) m = std::max(m, row[k]);
            peak = std::max(peak, m);
            if (row[0] < ta) before = std::max(before, m);
        }
        std::cout << "wavefront arrival " << ta << ", max density norm before/peak = "
                  << fmt(peak > 0 ? before / peak : 0.0) << "\n";
    }
    if (snapshots && !cfg.snapshot_times.empty()) {
        const auto snaps = field_snapshots(problem, disc, run, cfg.snapshot_times, cfg.snapshot_nx,
                                           cfg.snapshot_ny, cfg.guard, opt);
        for (size_t k = 0; k < snaps.size(); ++k) {
            const std::string p = stem + "_snap" + std::to_string(k) + ".txt";
            write_snapshot(p, snaps[k]);
            std::cout << "wrote " << p << " (t = " << snaps[k].time << ")\n";
        }
    }
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::vector<int> Ns, std::vector<std::string> schemes) {
    if (Ns.empty()) Ns = cfg.N_list;
    if (schemes.empty()) schemes = cfg.schemes;
    if (schemes.empty()) schemes = {cfg.scheme};
    for (const auto& s : schemes) CqScheme::from_name(s);
    std::cout << metadata_header(cfg) << "# sweep N = " << join_ints(Ns) << "\n";
    const auto results = sweep(cfg, schemes, Ns, &std::cout);
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& r : results) {
        std::cout << "scheme " << r.scheme << " (" << r.seconds << " s)\n";
        print_table(r.table);
        for (const auto& [col, fit] : r.orders)
            std::cout << "order " << col << ": " << fmt(fit.slope) << (fit.ok ? "" : "  (low quality)") << "\n";
        std::string header = metadata_header(cfg) + "# scheme = " + r.scheme + "\n";
        for (size_t i = 0; i < r.field_absolute.size(); ++i)
            if (r.field_absolute[i])
                header += "# field_" + std::to_string(i) + " is absolute (reference field vanishes)\n";
        for (const auto& [col, fit] : r.orders)
            header += "# order " + col + " = " + fmt(fit.slope) + "\n";
        const std::string path = cfg.out_dir + "/" + cfg.name + "_" + r.scheme + "_errors.csv";
        write_error_table(path, header, r.table);
        std::cout << "wrote " << path << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-domain acoustic transmission solver (multi-trace formulation, spectral "
                 "Galerkin in space, convolution quadrature in time)"};
    app.require_subcommand(1);

    auto* st = app.add_subcommand("selftest", "run the built-in property checks");
    std::vector<std::string> suites;
    double perturb = 0.0;
    st->add_option("--suite", suites, "quadrature | bessel | cq | calderon (repeatable)");
    st->add_option("--perturb-bdf2", perturb, "shift the BDF2 symbol constant (mutation check)")
        ->group("");

    Common fc, rc, sc;
    auto* fq = app.add_subcommand("freq-conv", "frequency-domain convergence in L");
    add_common(fq, fc);
    std::vector<int> Llist;
    int Lref = 0;
    fq->add_option("--L-list", Llist, "degrees to compare")->delimiter(',');
    fq->add_option("--Lref", Lref, "reference degree");

    auto* rn = app.add_subcommand("run", "one time-domain simulation");
    add_common(rn, rc);
    bool no_snap = false;
    rn->add_flag("--no-snapshots", no_snap, "skip field snapshots");

    auto* sw = app.add_subcommand("sweep", "time-step convergence study");
    add_common(sw, sc);
    std::vector<int> Ns;
    std::vector<std::string> schemes;
    sw->add_option("--N-list", Ns, "numbers of steps")->delimiter(',');
    sw->add_option("--schemes", schemes, "schemes to compare")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_parse = app.exit(e);
        return rc_parse == 0 ? kOk : kConfig;
    }

    try {
        if (st->parsed()) return cmd_selftest(suites, perturb);
        if (fq->parsed()) {
            RunConfig cfg = resolve(fc);
            if (!Llist.empty()) set_option(cfg, "L_list", join_ints(Llist));
            if (Lref) set_option(cfg, "L_ref", std::to_string(Lref));
            validate(cfg);
            return cmd_freq_conv(cfg);
        }
        if (rn->parsed()) return cmd_run(resolve(rc), !no_snap);
        if (sw->parsed()) return cmd_sweep(resolve(sc), Ns, schemes);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const TopologyError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOk;
}
