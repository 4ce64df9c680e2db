#pragma once

#include "cqmtf/config.hpp"
#include "cqmtf/cq_engine.hpp"
#include "cqmtf/mtf_system.hpp"
#include "cqmtf/signals.hpp"

#include <Eigen/Dense>

#include <vector>

namespace cqmtf {

// Time-domain data of an experiment.  Transmission data are the jumps of a
// "source" field g_i per subdomain:  a = g_lower - g_upper,
// b = dn g_lower - dn g_upper  (n: normal of the lower side).
//   planewave:     g_0 = -u_inc, g_i = 0 otherwise   (u_0 is the scattered field)
//   manufactured:  g_i = u_i, the exact solution     (u_0 = 0, u_i = wave with speed c_1)
class TdProblem {
public:
    explicit TdProblem(const RunConfig& cfg);

    const RunConfig& config() const { return cfg_; }
    bool has_exact() const { return cfg_.experiment == "manufactured"; }

    double source(int subdomain, const Vec2& x, double t) const;
    double source_dn(int subdomain, const Vec2& x, const Vec2& n, double t) const;
    double incident(const Vec2& x, double t) const;

    // Exact field (manufactured runs only).
    double exact(int subdomain, const Vec2& x, double t) const;
    // Exact trace coefficients of all subdomains at time t (manufactured only).
    Eigen::VectorXd exact_traces(const MtfDiscretization& disc, double t) const;

    // Right-hand sides at the given times, one column each.
    Eigen::MatrixXcd rhs(const MtfDiscretization& disc, const std::vector<double>& times) const;

    double amplitude = 1.0;

private:
    RunConfig cfg_;
    TravellingWave wave_;
};

struct TdRun {
    CqScheme scheme = CqScheme::bdf2();
    TimeGrid grid;
    Eigen::MatrixXcd stages;  // CQ stage series of the densities
    Eigen::MatrixXd steps;    // densities at t_0..t_N
    CqDiagnostics diag;
    double min_rcond = 1.0;
    int solves = 0;
    double seconds = 0.0;
};

TdRun run_simulation(const TdProblem& problem, const MtfDiscretization& disc, const CqScheme& scheme,
                     const TimeGrid& grid, const CqOptions& opt = {});

// Largest |delta(z)|/dt over the contour frequencies of a run.
double max_contour_frequency(const CqScheme& scheme, const TimeGrid& grid, const CqOptions& opt = {});

// Quadrature for a time-domain run.  One rule for every contour frequency,
// so the discrete transfer function stays analytic in s (the contour
// inversion amplifies frequency-to-frequency inconsistencies by up to
// eps^{-1/2}): the logarithmic split is always used, and Q grows with the
// largest local frequency |s|/c_i so that the kernel stays resolved.
QuadratureSettings time_domain_quadrature(const Scene& scene, int L, const CqScheme& scheme,
                                          const TimeGrid& grid, const QuadratureSettings& base = {},
                                          const CqOptions& opt = {});

// Transfer evaluator of the MTF system (s is the exterior frequency).
TransferEvaluator mtf_evaluator(const MtfDiscretization& disc, double* min_rcond = nullptr,
                                int* solves = nullptr);

}  // namespace cqmtf
