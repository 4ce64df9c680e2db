#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace cqmtf {

using cd = std::complex<double>;

enum class SchemeKind { Bdf2, RadauIIA2, LobattoIIIC3 };

class CqScheme {
public:
    static CqScheme bdf2();
    // BDF2 with a different constant term of delta; only used to check that
    // the validation suites notice a wrong symbol.
    static CqScheme bdf2_with_constant(double delta0);
    static CqScheme radau_iia2();
    static CqScheme lobatto_iiic3();
    static CqScheme from_name(const std::string& name);

    SchemeKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    int stages() const { return static_cast<int>(c_.size()); }
    int order() const { return p_; }
    int stage_order() const { return q_; }
    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& b() const { return b_; }
    const Eigen::VectorXd& c() const { return c_; }

    // delta(z): scalar BDF2 symbol or (A + z/(1-z) 1 b^T)^{-1}.
    Eigen::MatrixXcd delta(cd z) const;

private:
    SchemeKind kind_ = SchemeKind::Bdf2;
    std::string name_;
    int p_ = 2, q_ = 2;
    double delta0_ = 1.5;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_, c_;
};

struct TimeGrid {
    int N = 0;
    double T = 0.0;
    double dt() const { return T / N; }
};

// Time-series layout: one column per (step n = 0..N, stage j), index n*m + j,
// at time t_n + c_j dt.
std::vector<double> stage_times(const CqScheme& scheme, const TimeGrid& grid);
// Values at t_0..t_N (the last stage of the previous block; zero at t_0 for RK).
Eigen::MatrixXcd step_values(const CqScheme& scheme, const Eigen::MatrixXcd& series);

using BlockOp = std::function<Eigen::MatrixXcd(cd s, const Eigen::MatrixXcd& x)>;

struct TransferEvaluator {
    BlockOp apply;  // x -> F(s) x
    BlockOp solve;  // x -> F(s)^{-1} x
};

struct CqOptions {
    int threads = 1;
    double eig_cond_limit = 1e8;
    // F(conj s) = conj F(s) and real data: only half of the frequencies.
    bool real_symmetry = true;
    // M = oversample*(N+1) contour points on radius eps^{1/(M+N-1)}; 1 gives
    // the usual eps^{1/(2N)} circle with its sqrt(eps) accuracy floor.
    int oversample = 1;
};

struct CqDiagnostics {
    double lambda = 0.0;
    int frequencies = 0;
    int fallbacks = 0;
    std::vector<double> eig_cond;
};

Eigen::MatrixXcd cq_forward(const CqScheme& scheme, const TimeGrid& grid, const TransferEvaluator& F,
                            const Eigen::MatrixXcd& g, const CqOptions& opt = {},
                            CqDiagnostics* diag = nullptr);
Eigen::MatrixXcd cq_solve(const CqScheme& scheme, const TimeGrid& grid, const TransferEvaluator& F,
                          const Eigen::MatrixXcd& g, const CqOptions& opt = {},
                          CqDiagnostics* diag = nullptr);

// Scalar BDF2 convolution weights w_0..w_N of F.
Eigen::VectorXcd cq_weights(const CqScheme& scheme, const TimeGrid& grid,
                            const std::function<cd(cd)>& F);

// Small helper: run fn(k) for k in [0, n) on `threads` threads.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cqmtf
