#include "cqmtf/bio_assembly.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/specfun.hpp"
#include "cqmtf/transforms.hpp"

#include <cmath>
#include <numbers>

namespace cqmtf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPanelPts = 16;
constexpr double kGrading = 0.25;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

struct Kernels {
    cd G, kK, kKp;
};

inline Kernels eval_kernels(cd s, double r, double dxny, double dxnx) {
    const cd z = s * r;
    if (z.real() > 740.0) return {0.0, 0.0, 0.0};
    const auto k = specfun::bessel_k01(z);
    const cd gf = s * k.k1 / (kTwoPi * r);
    return {k.k0 / kTwoPi, gf * dxny, -gf * dxnx};
}

}  // namespace

int default_inner_nodes(int L) { return 2 * L + 16; }

class PairPlan {
public:
    PairPlan(const SideView& trial, const SideView& test, int L, const QuadratureSettings& qs);
    OperatorBlocks blocks(cd s) const;

    enum class Kind { Self, Corner, Separated };
    Kind kind;

private:
    SideView a_, b_;
    int L_, Q_, Ng_;
    double split_re_, split_abs_;

    MatrixXd trial_u_, trial_curl_;  // Ng x (L+1), outer weights folded in
    Eigen::VectorXd f_start_, f_end_;

    // test grid (midpoint rule)
    std::vector<double> eta_, s2_, invj_, jpj2_;
    MatrixXd uval_, tval_;  // Q x (L+1), Q x (L+2)

    // rows evaluated on the shared test grid
    std::vector<int> shared_rows_;  // unified row index (0..Ng-1 outer, Ng start, Ng+1 end)
    MatrixXd r_, dxny_, dxnx_, nxny_, lsum_, wu_, wt_;
    std::vector<char> row_log_;
    double rmax_log_ = 0.0;

    // rows with their own graded rule (outer rows of corner pairs)
    std::vector<int> ragged_rows_;
    std::vector<int> rstart_;
    std::vector<double> gth_, gw_, gr_, gdny_, gdnx_, gnn_, gij_, gjp_;

    void add_shared_row(int row, const Vec2& y, const Vec2& ny, const std::vector<double>& sing);
    void add_ragged_row(int row, double tau, const Vec2& y, const Vec2& ny,
                        const std::vector<std::pair<double, double>>& corners);
};

PairPlan::PairPlan(const SideView& trial, const SideView& test, int L, const QuadratureSettings& qs)
    : a_(trial), b_(test), L_(L) {
    Q_ = qs.Q > 0 ? qs.Q : default_inner_nodes(L);
    Ng_ = qs.Ng > 0 ? qs.Ng : Q_;
    if (Q_ % 2) ++Q_;  // keep midpoints away from eta = 0
    if (Ng_ % 2) ++Ng_;
    split_re_ = qs.split_re_limit;
    split_abs_ = qs.split_abs_limit;

    const bool same = a_.curve == b_.curve;
    if (same && a_.reversed != b_.reversed)
        throw TopologyError("pair operator between opposite sides of one interface");
    const double tol = 1e-10;
    std::vector<std::pair<double, double>> corners;  // (e_a, e_b)
    if (!same)
        for (double ea : {-1.0, 1.0})
            for (double eb : {-1.0, 1.0})
                if ((a_.point(ea) - b_.point(eb)).norm() < tol) corners.emplace_back(ea, eb);
    kind = same ? Kind::Self : (corners.empty() ? Kind::Separated : Kind::Corner);

    // outer rule and trial data
    const auto og = specfun::gauss_legendre_angle(Ng_);
    trial_u_.resize(Ng_, L + 1);
    trial_curl_.resize(Ng_, L + 1);
    std::vector<double> u(L + 1);
    for (int g = 0; g < Ng_; ++g) {
        const double t = og.nodes[g], w = og.weights[g];
        const double J = a_.jacobian(t), Jp = a_.jacobian_deriv(t);
        specfun::cheb_u_all(L, t, u.data());
        for (int m = 0; m <= L; ++m) {
            trial_u_(g, m) = w * u[m];
            trial_curl_(g, m) = w * (specfun::cheb_u_deriv(m, t) / J - u[m] * Jp / (J * J));
        }
    }
    f_start_.resize(L + 1);
    f_end_.resize(L + 1);
    for (int m = 0; m <= L; ++m) {
        f_start_[m] = (m % 2 ? -1.0 : 1.0) * (m + 1) / a_.jacobian(-1.0);
        f_end_[m] = (m + 1) / a_.jacobian(1.0);
    }

    // test grid
    const auto tg = transforms::cheb_grid_first_kind(Q_);
    eta_ = tg.t;
    s2_.resize(Q_);
    invj_.resize(Q_);
    jpj2_.resize(Q_);
    uval_.resize(Q_, L + 1);
    tval_.resize(Q_, L + 2);
    std::vector<double> tt(L + 2);
    for (int q = 0; q < Q_; ++q) {
        const double e = eta_[q];
        s2_[q] = std::pow(std::sin(tg.theta[q]), 2);
        const double J = b_.jacobian(e);
        invj_[q] = 1.0 / J;
        jpj2_[q] = b_.jacobian_deriv(e) / (J * J);
        specfun::cheb_u_all(L, e, u.data());
        specfun::cheb_t_all(L + 1, e, tt.data());
        for (int l = 0; l <= L; ++l) uval_(q, l) = u[l];
        for (int l = 0; l <= L + 1; ++l) tval_(q, l) = tt[l];
    }

    // rows
    int nshared = (kind == Kind::Corner ? 0 : Ng_) + 2;
    r_.resize(nshared, Q_);
    dxny_.resize(nshared, Q_);
    dxnx_.resize(nshared, Q_);
    nxny_.resize(nshared, Q_);
    lsum_ = MatrixXd::Zero(nshared, Q_);
    wu_ = MatrixXd::Zero(nshared, Q_);
    wt_ = MatrixXd::Zero(nshared, Q_);
    rstart_.push_back(0);
    for (int g = 0; g < Ng_; ++g) {
        const double t = og.nodes[g];
        const Vec2 y = a_.point(t), ny = a_.normal(t);
        if (kind == Kind::Corner)
            add_ragged_row(g, t, y, ny, corners);
        else
            add_shared_row(g, y, ny, kind == Kind::Self ? std::vector<double>{t} : std::vector<double>{});
    }
    for (double e : {-1.0, 1.0}) {
        const Vec2 p = a_.point(e);
        std::vector<double> sing;
        for (double eb : {-1.0, 1.0})
            if ((p - b_.point(eb)).norm() < tol) sing.push_back(eb);
        add_shared_row(e < 0 ? Ng_ : Ng_ + 1, p, Vec2::Zero(), sing);
    }
}

void PairPlan::add_shared_row(int row, const Vec2& y, const Vec2& ny,
                              const std::vector<double>& sing) {
    const int k = static_cast<int>(shared_rows_.size());
    shared_rows_.push_back(row);
    row_log_.push_back(!sing.empty());
    for (int q = 0; q < Q_; ++q) {
        const Vec2 x = b_.point(eta_[q]), nx = b_.normal(eta_[q]);
        const Vec2 d = x - y;
        r_(k, q) = d.norm();
        dxny_(k, q) = d.dot(ny);
        dxnx_(k, q) = d.dot(nx);
        nxny_(k, q) = nx.dot(ny);
        if (!sing.empty()) rmax_log_ = std::max(rmax_log_, r_(k, q));
        for (double xc : sing) lsum_(k, q) += std::log(std::abs(xc - eta_[q]));
    }
    for (double xc : sing) {
        const auto wu = transforms::log_weights(Q_, xc, true);
        const auto wt = transforms::log_weights(Q_, xc, false);
        for (int q = 0; q < Q_; ++q) {
            wu_(k, q) += wu[q];
            wt_(k, q) += wt[q];
        }
    }
}

void PairPlan::add_ragged_row(int row, double tau, const Vec2& y, const Vec2& ny,
                              const std::vector<std::pair<double, double>>& corners) {
    ragged_rows_.push_back(row);
    // distance to each shared corner in units of the test parameter
    double theta_min_lo = -1.0, theta_min_hi = -1.0;  // grading towards theta = 0 / pi
    for (auto [ea, eb] : corners) {
        const double alpha = a_.jacobian(ea) / b_.jacobian(eb) * (1.0 - ea * tau);
        const double tmin = 0.5 * std::sqrt(2.0 * std::max(alpha, 1e-300));
        if (eb > 0)
            theta_min_lo = tmin;  // eta = +1 <-> theta = 0
        else
            theta_min_hi = tmin;
    }
    const int nbase = std::max(3, (Q_ + 11) / 12);
    const double h = kPi / nbase;
    std::vector<double> br;
    // graded breakpoints near theta = 0
    br.push_back(0.0);
    if (theta_min_lo > 0.0) {
        std::vector<double> g;
        for (double b = h * kGrading; b > theta_min_lo; b *= kGrading) g.push_back(b);
        for (auto it = g.rbegin(); it != g.rend(); ++it) br.push_back(*it);
    }
    for (int j = 1; j < nbase; ++j) br.push_back(j * h);
    if (theta_min_hi > 0.0)
        for (double b = h * kGrading; b > theta_min_hi; b *= kGrading) br.push_back(kPi - b);
    br.push_back(kPi);
    std::sort(br.begin(), br.end());

    static const specfun::QuadRule gl = specfun::gauss_legendre(kPanelPts);
    for (size_t p = 0; p + 1 < br.size(); ++p) {
        const double lo = br[p], hi = br[p + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < kPanelPts; ++j) {
            const double th = mid + half * gl.nodes[j];
            const double e = std::cos(th);
            const Vec2 x = b_.point(e), nx = b_.normal(e);
            const Vec2 d = x - y;
            const double J = b_.jacobian(e);
            gth_.push_back(th);
            gw_.push_back(half * gl.weights[j]);
            gr_.push_back(d.norm());
            gdny_.push_back(d.dot(ny));
            gdnx_.push_back(d.dot(nx));
            gnn_.push_back(nx.dot(ny));
            gij_.push_back(1.0 / J);
            gjp_.push_back(b_.jacobian_deriv(e) / (J * J));
        }
    }
    rstart_.push_back(static_cast<int>(gth_.size()));
}

OperatorBlocks PairPlan::blocks(cd s) const {
    const int nrows = Ng_ + 2, L = L_;
    // moments: U-type for G, kK, kKp, G nn, G J'/J^2; T-type for G/J
    MatrixXcd muG(nrows, L + 1), muK(nrows, L + 1), muKp(nrows, L + 1), muNN(nrows, L + 1),
        muJP(nrows, L + 1), mtIJ(nrows, L + 2);

    // shared rows
    const int ns = static_cast<int>(shared_rows_.size());
    if (ns > 0) {
        const bool analytic = s.real() * rmax_log_ <= split_re_ && std::abs(s) * rmax_log_ <= split_abs_;
        MatrixXcd yG(ns, Q_), yK(ns, Q_), yKp(ns, Q_), yNN(ns, Q_), yJP(ns, Q_), yIJ(ns, Q_);
        const double c = kPi / Q_;
        for (int k = 0; k < ns; ++k) {
            const bool lg = row_log_[k];
            for (int q = 0; q < Q_; ++q) {
                const double r = r_(k, q);
                const Kernels kv = eval_kernels(s, r, dxny_(k, q), dxnx_(k, q));
                cd aG = 0.0, aK = 0.0, aKp = 0.0;
                if (lg) {
                    if (analytic) {
                        const auto i = specfun::bessel_i01(s * r);
                        aG = -i.i0 / kTwoPi;
                        const cd ag = s * s * i.i1_over_z / kTwoPi;
                        aK = ag * dxny_(k, q);
                        aKp = -ag * dxnx_(k, q);
                    } else {
                        aG = -1.0 / kTwoPi;
                    }
                }
                const double L0 = lsum_(k, q), wu = wu_(k, q), wt = wt_(k, q), s2 = s2_[q];
                const cd rG = kv.G - aG * L0, rK = kv.kK - aK * L0, rKp = kv.kKp - aKp * L0;
                const double nn = nxny_(k, q), ij = invj_[q], jp = jpj2_[q];
                yG(k, q) = c * rG * s2 + aG * wu;
                yK(k, q) = c * rK * s2 + aK * wu;
                yKp(k, q) = c * rKp * s2 + aKp * wu;
                yNN(k, q) = nn * yG(k, q);
                yJP(k, q) = jp * yG(k, q);
                yIJ(k, q) = ij * (c * rG + aG * wt);
            }
        }
        auto mul = [](const MatrixXcd& y, const MatrixXd& v) {
            MatrixXcd out(y.rows(), v.cols());
            out.real() = y.real() * v;
            out.imag() = y.imag() * v;
            return out;
        };
        const MatrixXcd mG = mul(yG, uval_), mK = mul(yK, uval_), mKp = mul(yKp, uval_),
                        mNN = mul(yNN, uval_), mJP = mul(yJP, uval_), mIJ = mul(yIJ, tval_);
        for (int k = 0; k < ns; ++k) {
            const int row = shared_rows_[k];
            muG.row(row) = mG.row(k);
            muK.row(row) = mK.row(k);
            muKp.row(row) = mKp.row(k);
            muNN.row(row) = mNN.row(k);
            muJP.row(row) = mJP.row(k);
            mtIJ.row(row) = mIJ.row(k);
        }
    }

    // graded rows
    std::vector<double> uu(L + 1), tt(L + 2);
    for (size_t k = 0; k < ragged_rows_.size(); ++k) {
        const int row = ragged_rows_[k];
        Eigen::RowVectorXcd aG = Eigen::RowVectorXcd::Zero(L + 1), aK = aG, aKp = aG, aNN = aG,
                            aJP = aG;
        Eigen::RowVectorXcd aIJ = Eigen::RowVectorXcd::Zero(L + 2);
        for (int j = rstart_[k]; j < rstart_[k + 1]; ++j) {
            const Kernels kv = eval_kernels(s, gr_[j], gdny_[j], gdnx_[j]);
            const double th = gth_[j], e = std::cos(th), st = std::sin(th);
            const double w = gw_[j], wu = w * st * st;
            specfun::cheb_u_all(L, e, uu.data());
            specfun::cheb_t_all(L + 1, e, tt.data());
            const cd g = kv.G * wu, kk = kv.kK * wu, kp = kv.kKp * wu;
            const cd gn = g * gnn_[j], gj = g * gjp_[j], gi = kv.G * w * gij_[j];
            for (int l = 0; l <= L; ++l) {
                aG[l] += g * uu[l];
                aK[l] += kk * uu[l];
                aKp[l] += kp * uu[l];
                aNN[l] += gn * uu[l];
                aJP[l] += gj * uu[l];
            }
            for (int l = 0; l <= L + 1; ++l) aIJ[l] += gi * tt[l];
        }
        muG.row(row) = aG;
        muK.row(row) = aK;
        muKp.row(row) = aKp;
        muNN.row(row) = aNN;
        muJP.row(row) = aJP;
        mtIJ.row(row) = aIJ;
    }

    // curl pairing of the test function: -(l+1) T-moment_{l+1}(G/J) - U-moment_l(G J'/J^2)
    MatrixXcd ic(nrows, L + 1);
    for (int l = 0; l <= L; ++l) ic.col(l) = -double(l + 1) * mtIJ.col(l + 1) - muJP.col(l);

    auto outer = [&](const MatrixXcd& mom, const MatrixXd& tr) {
        MatrixXcd out(L + 1, L + 1);
        const auto top = mom.topRows(Ng_);
        out.real() = top.real().transpose() * tr;
        out.imag() = top.imag().transpose() * tr;
        return out;
    };
    OperatorBlocks b;
    b.V = outer(muG, trial_u_);
    b.K = outer(muK, trial_u_);
    b.Kp = outer(muKp, trial_u_);
    b.W = outer(ic, trial_curl_) + s * s * outer(muNN, trial_u_);
    for (int l = 0; l <= L; ++l)
        for (int m = 0; m <= L; ++m)
            b.W(l, m) += f_start_[m] * ic(Ng_, l) - f_end_[m] * ic(Ng_ + 1, l);
    return b;
}

PairOperator::PairOperator(const SideView& trial, const SideView& test, int L,
                           const QuadratureSettings& q)
    : plan_(std::make_unique<PairPlan>(trial, test, L, q)) {}
PairOperator::~PairOperator() = default;
PairOperator::PairOperator(PairOperator&&) noexcept = default;
PairOperator& PairOperator::operator=(PairOperator&&) noexcept = default;

OperatorBlocks PairOperator::blocks(cd s) const { return plan_->blocks(s); }
bool PairOperator::is_self() const { return plan_->kind == PairPlan::Kind::Self; }
bool PairOperator::is_corner() const { return plan_->kind == PairPlan::Kind::Corner; }

OperatorBlocks assemble_pair(const SideView& trial, const SideView& test, cd s, int L,
                             const QuadratureSettings& q) {
    return PairOperator(trial, test, L, q).blocks(s);
}

SubdomainOperator::SubdomainOperator(const Scene& scene, int subdomain, int L,
                                     const QuadratureSettings& q)
    : sub_(subdomain), L_(L) {
    const auto& sides = scene.sides(subdomain);
    nsides_ = static_cast<int>(sides.size());
    pairs_.reserve(nsides_ * nsides_);
    for (int a = 0; a < nsides_; ++a)
        for (int b = 0; b < nsides_; ++b) pairs_.emplace_back(sides[a], sides[b], L, q);
}

Eigen::MatrixXcd SubdomainOperator::calderon(cd s) const {
    const int nb = L_ + 1;
    Eigen::MatrixXcd A(dim(), dim());
    for (int a = 0; a < nsides_; ++a)
        for (int b = 0; b < nsides_; ++b) {
            const OperatorBlocks ob = pair(a, b).blocks(s);
            const int r0 = 2 * b * nb, c0 = 2 * a * nb;
            A.block(r0, c0, nb, nb) = -ob.K;
            A.block(r0, c0 + nb, nb, nb) = ob.V;
            A.block(r0 + nb, c0, nb, nb) = ob.W;
            A.block(r0 + nb, c0 + nb, nb, nb) = ob.Kp;
        }
    if (!A.allFinite()) throw NumericalError("non-finite boundary operator entries");
    return A;
}

double split_remainder_variation(const SideView& side, cd s, double tau) {
    auto remainder = [&](double eta) {
        const double r = (side.point(eta) - side.point(tau)).norm();
        const cd g = specfun::bessel_k0(s * r) / kTwoPi;
        const cd a = -specfun::bessel_i01(s * r).i0 / kTwoPi;
        return g - a * std::log(std::abs(eta - tau));
    };
    return std::abs(remainder(tau + 1e-3) - remainder(tau + 1e-7));
}

}  // namespace cqmtf
