#pragma once

#include "cqmtf/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

namespace cqmtf {

using cd = std::complex<double>;

// Galerkin blocks of the four boundary integral operators for one ordered
// pair (trial side, test side) at complex frequency s, G = K0(s r)/(2 pi).
// Entry (l, m) pairs test function l on the test side with trial function m.
struct OperatorBlocks {
    Eigen::MatrixXcd V, K, Kp, W;
};

struct QuadratureSettings {
    int Q = 0;   // inner (test side) nodes; 0 -> 2L+16
    int Ng = 0;  // outer (trial side) nodes; 0 -> Q
    // Re(s) r and |s| r limits above which the singular part falls back
    // from I0-weighted logarithms to the plain logarithm.
    double split_re_limit = 12.0;
    double split_abs_limit = 60.0;
};

int default_inner_nodes(int L);

// Frequency-independent quadrature data for one pair, reusable across s.
class PairPlan;

class PairOperator {
public:
    PairOperator(const SideView& trial, const SideView& test, int L,
                 const QuadratureSettings& q = {});
    ~PairOperator();
    PairOperator(PairOperator&&) noexcept;
    PairOperator& operator=(PairOperator&&) noexcept;

    OperatorBlocks blocks(cd s) const;
    bool is_self() const;
    bool is_corner() const;

private:
    std::unique_ptr<PairPlan> plan_;
};

OperatorBlocks assemble_pair(const SideView& trial, const SideView& test, cd s, int L,
                             const QuadratureSettings& q = {});

// All pairs of one subdomain's boundary.  calderon(s) returns the local
// matrix without identity terms, rows (test side, D/N, l), columns (trial
// side, D/N, m):  [ -K  V ; W  K' ].
class SubdomainOperator {
public:
    SubdomainOperator(const Scene& scene, int subdomain, int L, const QuadratureSettings& q = {});

    int subdomain() const { return sub_; }
    int num_sides() const { return nsides_; }
    int dim() const { return 2 * nsides_ * (L_ + 1); }
    Eigen::MatrixXcd calderon(cd s) const;
    const PairOperator& pair(int trial, int test) const { return pairs_[trial * nsides_ + test]; }

private:
    int sub_, nsides_, L_;
    std::vector<PairOperator> pairs_;
};

// Variation of the regularized single-layer remainder across two points
// approaching the diagonal; bounded when the singular split is right.
double split_remainder_variation(const SideView& side, cd s, double tau);

}  // namespace cqmtf
