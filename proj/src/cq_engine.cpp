#include "cqmtf/cq_engine.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/transforms.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace cqmtf {

namespace {

constexpr double kEps = 2.220446049250313e-16;

}  // namespace

CqScheme CqScheme::bdf2() { return bdf2_with_constant(1.5); }

CqScheme CqScheme::bdf2_with_constant(double delta0) {
    CqScheme s;
    s.kind_ = SchemeKind::Bdf2;
    s.name_ = "bdf2";
    s.p_ = 2;
    s.q_ = 2;
    s.delta0_ = delta0;
    s.A_ = Eigen::MatrixXd::Constant(1, 1, 1.0);
    s.b_ = Eigen::VectorXd::Ones(1);
    s.c_ = Eigen::VectorXd::Zero(1);
    return s;
}

CqScheme CqScheme::radau_iia2() {
    CqScheme s;
    s.kind_ = SchemeKind::RadauIIA2;
    s.name_ = "radau2";
    s.p_ = 3;
    s.q_ = 2;
    s.A_.resize(2, 2);
    s.A_ << 5.0 / 12, -1.0 / 12, 3.0 / 4, 1.0 / 4;
    s.b_.resize(2);
    s.b_ << 3.0 / 4, 1.0 / 4;
    s.c_.resize(2);
    s.c_ << 1.0 / 3, 1.0;
    return s;
}

CqScheme CqScheme::lobatto_iiic3() {
    CqScheme s;
    s.kind_ = SchemeKind::LobattoIIIC3;
    s.name_ = "lobatto3";
    s.p_ = 4;
    s.q_ = 2;
    s.A_.resize(3, 3);
    s.A_ << 1.0 / 6, -1.0 / 3, 1.0 / 6, 1.0 / 6, 5.0 / 12, -1.0 / 12, 1.0 / 6, 2.0 / 3, 1.0 / 6;
    s.b_.resize(3);
    s.b_ << 1.0 / 6, 2.0 / 3, 1.0 / 6;
    s.c_.resize(3);
    s.c_ << 0.0, 0.5, 1.0;
    return s;
}

CqScheme CqScheme::from_name(const std::string& name) {
    if (name == "bdf2") return bdf2();
    if (name == "radau2" || name == "radauiia2") return radau_iia2();
    if (name == "lobatto3" || name == "lobattoiiic3") return lobatto_iiic3();
    throw ConfigError("unknown CQ scheme '" + name + "' (expected bdf2, radau2, lobatto3)");
}

Eigen::MatrixXcd CqScheme::delta(cd z) const {
    if (kind_ == SchemeKind::Bdf2) {
        Eigen::MatrixXcd d(1, 1);
        d(0, 0) = delta0_ - 2.0 * z + 0.5 * z * z;
        return d;
    }
    const int m = stages();
    Eigen::MatrixXcd M = A_.cast<cd>();
    const cd f = z / (1.0 - z);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) += f * b_(j);
    return M.inverse();
}

std::vector<double> stage_times(const CqScheme& scheme, const TimeGrid& grid) {
    const int m = scheme.stages();
    std::vector<double> t((grid.N + 1) * m);
    for (int n = 0; n <= grid.N; ++n)
        for (int j = 0; j < m; ++j) t[n * m + j] = (n + scheme.c()(j)) * grid.dt();
    return t;
}

Eigen::MatrixXcd step_values(const CqScheme& scheme, const Eigen::MatrixXcd& series) {
    const int m = scheme.stages();
    const int K = static_cast<int>(series.cols()) / m;
    if (scheme.kind() == SchemeKind::Bdf2) return series;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(series.rows(), K);
    for (int n = 1; n < K; ++n) out.col(n) = series.col((n - 1) * m + (m - 1));
    return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(threads, n); ++w)
        pool.emplace_back([&] {
            for (int k; (k = next++) < n;) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

namespace {

// Divided difference F[x_0..x_k] y from apply(); coalescing nodes are spread
// on a small circle around their mean.
Eigen::MatrixXcd divided_difference(const BlockOp& apply, std::vector<cd> x,
                                    const Eigen::MatrixXcd& y) {
    const int k = static_cast<int>(x.size());
    double scale = 0.0, gap = 1e300;
    cd mean = 0.0;
    for (int i = 0; i < k; ++i) {
        scale = std::max(scale, std::abs(x[i]));
        mean += x[i] / double(k);
        for (int j = 0; j < i; ++j) gap = std::min(gap, std::abs(x[i] - x[j]));
    }
    if (k > 1 && gap < 1e-4 * std::max(scale, 1.0)) {
        const double h = 1e-3 * std::max(scale, 1.0);
        for (int i = 0; i < k; ++i) x[i] = mean + h * std::polar(1.0, 2.0 * M_PI * i / k);
    }
    std::vector<Eigen::MatrixXcd> v;
    for (int i = 0; i < k; ++i) v.push_back(apply(x[i], y));
    for (int lev = 1; lev < k; ++lev)
        for (int i = k - 1; i >= lev; --i) v[i] = (v[i] - v[i - 1]) / (x[i] - x[i - lev]);
    return v[k - 1];
}

// Block (i, j) of F(T) for upper-triangular T applied to y:
// sum over chains i = i0 < ... < ir = j of t_{i0 i1}...t F[t_{i0 i0}, ..., t_{ir ir}] y.
Eigen::MatrixXcd triangular_entry(const BlockOp& apply, const Eigen::MatrixXcd& T, int i, int j,
                                  const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(0, 0);
    std::vector<int> chain{i};
    std::function<void(cd)> walk = [&](cd coef) {
        const int last = chain.back();
        if (last == j) {
            std::vector<cd> nodes;
            for (int c : chain) nodes.push_back(T(c, c));
            Eigen::MatrixXcd term = coef * divided_difference(apply, nodes, y);
            if (acc.size() == 0) acc = term;
            else acc += term;
            return;
        }
        for (int nx = last + 1; nx <= j; ++nx) {
            if (T(last, nx) == cd(0.0)) continue;
            chain.push_back(nx);
            walk(coef * T(last, nx));
            chain.pop_back();
        }
    };
    walk(1.0);
    return acc;
}

struct FrequencyResult {
    Eigen::MatrixXcd h;
    double cond = 1.0;
    bool fallback = false;
};

FrequencyResult evaluate_frequency(const CqScheme& scheme, double dt, const TransferEvaluator& F,
                                   bool solve, cd z, const Eigen::MatrixXcd& G,
                                   const CqOptions& opt) {
    const BlockOp& op = solve ? F.solve : F.apply;
    FrequencyResult res;
    const Eigen::MatrixXcd D = scheme.delta(z);
    const int m = scheme.stages();
    if (m == 1) {
        res.h = op(D(0, 0) / dt, G);
        return res;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(D);
    const Eigen::MatrixXcd Q = es.eigenvectors();
    const Eigen::MatrixXcd Qi = Q.inverse();
    res.cond = Q.operatorNorm() * Qi.operatorNorm();
    if (std::isfinite(res.cond) && res.cond <= opt.eig_cond_limit) {
        Eigen::MatrixXcd Y = G * Qi.transpose();
        Eigen::MatrixXcd Z;
        for (int j = 0; j < m; ++j) {
            Eigen::MatrixXcd col = op(es.eigenvalues()(j) / dt, Y.col(j));
            if (j == 0) Z.resize(col.rows(), m);
            Z.col(j) = col;
        }
        res.h = Z * Q.transpose();
        return res;
    }
    // Schur route: delta = U T U^H, F(delta) = U F(T) U^H.
    res.fallback = true;
    Eigen::ComplexSchur<Eigen::MatrixXcd> cs(D);
    const Eigen::MatrixXcd U = cs.matrixU();
    const Eigen::MatrixXcd T = cs.matrixT() / dt;
    const Eigen::MatrixXcd Y = G * U.conjugate();
    std::vector<Eigen::MatrixXcd> Z(m);
    if (!solve) {
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                Eigen::MatrixXcd term = j == i ? F.apply(T(i, i), Y.col(j))
                                               : triangular_entry(F.apply, T, i, j, Y.col(j));
                if (Z[i].size() == 0) Z[i] = term;
                else Z[i] += term;
            }
    } else {
        // Z = F(T)^{-1} Y by back substitution over the stage index.
        for (int i = m - 1; i >= 0; --i) {
            Eigen::MatrixXcd rhs = Y.col(i);
            for (int j = i + 1; j < m; ++j) rhs -= triangular_entry(F.apply, T, i, j, Z[j]);
            Z[i] = F.solve(T(i, i), rhs);
        }
    }
    Eigen::MatrixXcd Zm(Z[0].rows(), m);
    for (int i = 0; i < m; ++i) Zm.col(i) = Z[i];
    res.h = Zm * U.transpose();
    return res;
}

Eigen::MatrixXcd run_cq(const CqScheme& scheme, const TimeGrid& grid, const TransferEvaluator& F,
                        bool solve, const Eigen::MatrixXcd& g, const CqOptions& opt,
                        CqDiagnostics* diag) {
    const int m = scheme.stages();
    const int N = grid.N;
    if (N < 1 || !(grid.T > 0.0)) throw DomainError("CQ needs N >= 1 and T > 0");
    const int K = N + 1;
    if (g.cols() != K * m) throw DomainError("CQ data has the wrong number of columns");
    if ((solve && !F.solve) || (!solve && !F.apply)) throw DomainError("CQ evaluator is missing");
    if (m > 1 && !F.apply) throw DomainError("CQ evaluator needs apply() for RK schemes");
    if (opt.oversample < 1) throw DomainError("CQ oversampling must be >= 1");
    const int M = opt.oversample * K;
    const double dt = grid.dt();
    const double lambda = std::pow(kEps, 1.0 / (M + N - 1));
    const long rows = g.rows();

    // Scaled DFT along the (zero-padded) step index for every (row, stage).
    std::vector<Eigen::MatrixXcd> Ghat(M, Eigen::MatrixXcd(rows, m));
    std::vector<cd> buf(M);
    std::vector<double> pw(K);
    for (int n = 0; n < K; ++n) pw[n] = std::pow(lambda, n);
    for (long r = 0; r < rows; ++r)
        for (int j = 0; j < m; ++j) {
            std::fill(buf.begin(), buf.end(), cd(0.0));
            for (int n = 0; n < K; ++n) buf[n] = pw[n] * g(r, n * m + j);
            transforms::dft(buf.data(), M, -1);
            for (int k = 0; k < M; ++k) Ghat[k](r, j) = buf[k];
        }

    const int kmax = opt.real_symmetry ? M / 2 : M - 1;
    std::vector<FrequencyResult> H(M);
    parallel_for(kmax + 1, opt.threads, [&](int k) {
        const cd z = lambda * std::polar(1.0, -2.0 * M_PI * k / M);
        H[k] = evaluate_frequency(scheme, dt, F, solve, z, Ghat[k], opt);
        if (!H[k].h.allFinite()) throw NumericalError("CQ: non-finite value at a frequency");
    });
    const long orows = H[0].h.rows();
    for (int k = kmax + 1; k < M; ++k) {
        H[k].h = H[M - k].h.conjugate();
        H[k].cond = H[M - k].cond;
    }

    Eigen::MatrixXcd out(orows, K * m);
    for (long r = 0; r < orows; ++r)
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < M; ++k) buf[k] = H[k].h(r, j);
            transforms::dft(buf.data(), M, +1);
            for (int n = 0; n < K; ++n) out(r, n * m + j) = buf[n] / (M * pw[n]);
        }
    if (diag) {
        diag->lambda = lambda;
        diag->frequencies = kmax + 1;
        diag->fallbacks = 0;
        diag->eig_cond.resize(M);
        for (int k = 0; k < M; ++k) {
            diag->eig_cond[k] = H[k].cond;
            if (k <= kmax && H[k].fallback) ++diag->fallbacks;
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd cq_forward(const CqScheme& scheme, const TimeGrid& grid, const TransferEvaluator& F,
                            const Eigen::MatrixXcd& g, const CqOptions& opt, CqDiagnostics* diag) {
    return run_cq(scheme, grid, F, false, g, opt, diag);
}

Eigen::MatrixXcd cq_solve(const CqScheme& scheme, const TimeGrid& grid, const TransferEvaluator& F,
                          const Eigen::MatrixXcd& g, const CqOptions& opt, CqDiagnostics* diag) {
    return run_cq(scheme, grid, F, true, g, opt, diag);
}

Eigen::VectorXcd cq_weights(const CqScheme& scheme, const TimeGrid& grid,
                            const std::function<cd(cd)>& F) {
    if (scheme.stages() != 1) throw DomainError("cq_weights is defined for multistep schemes");
    if (grid.N < 1 || !(grid.T > 0.0)) throw DomainError("CQ needs N >= 1 and T > 0");
    // Oversampled contour: aliasing ~1e-15, roundoff amplification rho^-N ~ 1e4.
    const int M = 4 * (grid.N + 1);
    const double rho = std::pow(1e-15, 1.0 / M);
    std::vector<cd> buf(M);
    for (int k = 0; k < M; ++k) {
        const cd z = rho * std::polar(1.0, -2.0 * M_PI * k / M);
        buf[k] = F(scheme.delta(z)(0, 0) / grid.dt());
    }
    transforms::dft(buf.data(), M, +1);
    Eigen::VectorXcd w(grid.N + 1);
    for (int n = 0; n <= grid.N; ++n) w(n) = buf[n] / (M * std::pow(rho, n));
    return w;
}

}  // namespace cqmtf
