#pragma once

#include "cqmtf/config.hpp"
#include "cqmtf/postprocess.hpp"
#include "cqmtf/td_driver.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cqmtf {

QuadratureSettings quadrature_of(const RunConfig& cfg);

// Time-harmonic plane-wave transmission at the configured frequencies,
// errors against the L_ref solution.
struct FreqConvResult {
    std::vector<int> L;
    ErrorTable table;  // L, dirichlet_i, neumann_i, field_i
    std::vector<std::vector<double>> dirichlet, neumann, field;  // [subdomain][row]
};

FreqConvResult freq_conv(const RunConfig& cfg, std::ostream* log = nullptr);

// Time-domain convergence study for one scheme over N (errors against the
// closed form or the finest run, which is then left out of the table).
struct SweepResult {
    std::string scheme;
    ErrorTable table;  // N, dt, dirichlet_i, neumann_i, field_i
    std::map<std::string, OrderFit> orders;
    std::vector<bool> field_absolute;
    double seconds = 0.0;
};

std::vector<SweepResult> sweep(const RunConfig& cfg, const std::vector<std::string>& schemes,
                               const std::vector<int>& Ns, std::ostream* log = nullptr);

// Per step: Dirichlet (+1/2) and Neumann (-1/2) norms on each subdomain
// boundary; columns t, dirichlet_0, neumann_0, dirichlet_1, ...
ErrorTable density_norm_history(const MtfDiscretization& disc, const TdRun& run);

// First time the incident plane wave's window can reach the scatterer.
double arrival_time(const RunConfig& cfg, const Scene& scene);

}  // namespace cqmtf
