#include "cqmtf/postprocess.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

namespace cqmtf {

namespace {

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& A) { return 0.5 * (A + A.adjoint()); }

}  // namespace

NormOperator::NormOperator(const MtfDiscretization& disc, int i, double s) {
    const SubdomainOperator& op = disc.local(i);
    const int nb = disc.degree() + 1;
    const int ns = op.num_sides();
    const int n = ns * nb;
    const Eigen::MatrixXcd A = op.calderon(s);
    V_.resize(n, n);
    Eigen::MatrixXd G1 = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
    const auto& sides = disc.scene().sides(i);
    for (int p = 0; p < ns; ++p) {
        for (int q = 0; q < ns; ++q) V_.block(p * nb, q * nb, nb, nb) = A.block(2 * p * nb, 2 * q * nb + nb, nb, nb);
        G1.block(p * nb, p * nb, nb, nb) = trial_gram(sides[p], disc.degree());
        M.block(p * nb, p * nb, nb, nb) = disc.mass(i, sides[p].interface);
    }
    const Eigen::MatrixXcd Mc = M.cast<cd>(), Gc = G1.cast<cd>();
    // V phi ~ sum v_k xi_k with M v = V c;  V^{-1} u ~ sum w_k xi_k with V w = M c.
    Hminus_ = hermitian_part(Gc * Mc.partialPivLu().solve(V_));
    Hplus_ = hermitian_part(Gc * V_.partialPivLu().solve(Mc));
}

double NormOperator::form(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v) const {
    if (v.size() != H.rows()) throw DomainError("norm: coefficient vector has the wrong size");
    const double q = (v.adjoint() * H * v)(0, 0).real();
    const double scale = H.norm() * v.squaredNorm();
    if (q < -1e-12 * scale) throw NumericalError("norm operator is not positive (defect)");
    return std::sqrt(std::max(q, 0.0));
}

double NormOperator::plus_half(const Eigen::VectorXcd& u) const { return form(Hplus_, u); }
double NormOperator::minus_half(const Eigen::VectorXcd& phi) const { return form(Hminus_, phi); }

Eigen::VectorXcd boundary_component(const MtfDiscretization& disc, int i, int comp,
                                    const Eigen::VectorXcd& full) {
    const int nb = disc.degree() + 1;
    const auto& sides = disc.scene().sides(i);
    Eigen::VectorXcd out(sides.size() * nb);
    for (size_t p = 0; p < sides.size(); ++p)
        out.segment(p * nb, nb) = full.segment(disc.map().offset(i, sides[p].interface, comp), nb);
    return out;
}

Eigen::VectorXcd change_degree(const Eigen::VectorXcd& v, int L_from, int L_to) {
    const int a = L_from + 1, b = L_to + 1;
    if (v.size() % a != 0) throw DomainError("change_degree: size is not a multiple of L+1");
    const long nblk = v.size() / a;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(nblk * b);
    const int m = std::min(a, b);
    for (long k = 0; k < nblk; ++k) out.segment(k * b, m) = v.segment(k * a, m);
    return out;
}

double trace_error(const NormOperator& op, const MtfDiscretization& disc, int i, int comp,
                   const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& ref) {
    if (x.rows() != ref.rows() || x.cols() != ref.cols())
        throw DomainError("trace_error: series have different shapes");
    double num = 0.0, den = 0.0;
    for (long n = 0; n < x.cols(); ++n) {
        const Eigen::VectorXcd r = boundary_component(disc, i, comp, ref.col(n));
        const Eigen::VectorXcd e = r - boundary_component(disc, i, comp, x.col(n));
        num += std::pow(op.norm(e, comp), 2);
        den += std::pow(op.norm(r, comp), 2);
    }
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(num / den);
}

double field_error(const Eigen::MatrixXd& u, const Eigen::MatrixXd& ref, double dt, bool* absolute) {
    if (u.rows() != ref.rows() || u.cols() != ref.cols())
        throw DomainError("field_error: fields have different shapes");
    const double num = (u - ref).norm(), den = ref.norm();
    if (absolute) *absolute = den == 0.0;
    return den == 0.0 ? std::sqrt(dt) * num : num / den;
}

std::vector<Vec2> sample_points(const Scene& scene, int i, int count, double guard) {
    const auto bb = scene.bbox();
    const double diam = std::max(bb[1] - bb[0], bb[3] - bb[2]);
    const double pad = i == 0 ? 0.5 * diam : 0.0;
    const int n = 41;
    std::vector<Vec2> all;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // slightly irrational offsets keep grid points off symmetry lines
            const double x = bb[0] - pad + (bb[1] - bb[0] + 2 * pad) * (a + 0.5 + 0.0123) / n;
            const double y = bb[2] - pad + (bb[3] - bb[2] + 2 * pad) * (b + 0.5 + 0.0371) / n;
            const Vec2 p(x, y);
            if (scene.locate(p) == i && scene.boundary_distance(p) >= guard * diam) all.push_back(p);
        }
    if (all.empty()) throw DomainError("no sample points fit inside subdomain " + std::to_string(i));
    if (static_cast<int>(all.size()) <= count) return all;
    std::vector<Vec2> out;
    for (int k = 0; k < count; ++k) out.push_back(all[(static_cast<long>(k) * all.size()) / count]);
    return out;
}

struct PotentialOperator::SidePlan {
    int offset_d = 0, offset_n = 0;
    struct Group {
        std::vector<int> points;
        std::vector<Vec2> y, ny;
        Eigen::VectorXd w;      // quadrature weight (dt)
        Eigen::MatrixXd utab;   // U_m(t_q)
    };
    std::vector<Group> groups;
};

PotentialOperator::~PotentialOperator() = default;
PotentialOperator::PotentialOperator(PotentialOperator&&) noexcept = default;

PotentialOperator::PotentialOperator(const MtfDiscretization& disc, int i, std::vector<Vec2> points,
                                     double min_distance)
    : sub_(i), pts_(std::move(points)) {
    const Scene& sc = disc.scene();
    const int L = disc.degree(), nb = L + 1;
    nloc_ = disc.map().subdomain_size(i);
    const int base = disc.map().subdomain_offset(i);
    for (const Vec2& p : pts_) {
        if (sc.locate(p) != i)
            throw DomainError("potential: point is not inside subdomain " + std::to_string(i));
        if (sc.boundary_distance(p) < min_distance)
            throw DomainError("potential: point violates the boundary guard distance");
    }
    int pmin = 2;
    while (16 * pmin < nb + 16) pmin *= 2;
    const auto gl = specfun::gauss_legendre(16);
    for (const SideView& sv : sc.sides(i)) {
        SidePlan plan;
        plan.offset_d = disc.map().offset(i, sv.interface, 0) - base;
        plan.offset_n = disc.map().offset(i, sv.interface, 1) - base;
        const int ns = 400;
        std::vector<Vec2> samp(ns);
        double jmax = 0.0;
        for (int k = 0; k < ns; ++k) {
            const double t = -1.0 + 2.0 * (k + 0.5) / ns;
            samp[k] = sv.point(t);
            jmax = std::max(jmax, sv.jacobian(t));
        }
        std::map<int, std::vector<int>> by_panels;
        for (size_t k = 0; k < pts_.size(); ++k) {
            double d = 1e300;
            for (const Vec2& y : samp) d = std::min(d, (y - pts_[k]).norm());
            const double dparam = std::max(d / jmax, 1e-6);
            int P = pmin;
            while (2.0 / P > dparam && P < 1024) P *= 2;
            by_panels[P].push_back(static_cast<int>(k));
        }
        for (auto& [P, idx] : by_panels) {
            SidePlan::Group g;
            g.points = idx;
            const int nq = 16 * P;
            g.w.resize(nq);
            g.utab.resize(nq, nb);
            std::vector<double> u(nb);
            for (int p = 0; p < P; ++p)
                for (int q = 0; q < 16; ++q) {
                    const double a = -1.0 + 2.0 * p / P, h = 2.0 / P;
                    const double t = a + 0.5 * h * (gl.nodes[q] + 1.0);
                    const int k = p * 16 + q;
                    g.w(k) = 0.5 * h * gl.weights[q];
                    g.y.push_back(sv.point(t));
                    g.ny.push_back(sv.normal(t));
                    specfun::cheb_u_all(L, t, u.data());
                    for (int m = 0; m < nb; ++m) g.utab(k, m) = u[m];
                }
            plan.groups.push_back(std::move(g));
        }
        plans_.push_back(std::move(plan));
    }
}

Eigen::MatrixXcd PotentialOperator::matrix(cd s) const {
    const int npts = static_cast<int>(pts_.size());
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(npts, nloc_);
    const double inv2pi = 0.5 / M_PI;
    for (const SidePlan& plan : plans_)
        for (const auto& g : plan.groups) {
            const int nq = static_cast<int>(g.w.size());
            const int nb = static_cast<int>(g.utab.cols());
            Eigen::MatrixXcd S(g.points.size(), nq), D(g.points.size(), nq);
            for (size_t r = 0; r < g.points.size(); ++r) {
                const Vec2& x = pts_[g.points[r]];
                for (int q = 0; q < nq; ++q) {
                    const Vec2 diff = x - g.y[q];
                    const double rr = diff.norm();
                    const auto kk = specfun::bessel_k01(s * rr);
                    S(r, q) = g.w(q) * inv2pi * kk.k0;
                    D(r, q) = -g.w(q) * inv2pi * s * kk.k1 / rr * diff.dot(g.ny[q]);
                }
            }
            const Eigen::MatrixXcd Sn = S * g.utab, Dd = D * g.utab;
            for (size_t r = 0; r < g.points.size(); ++r) {
                P.row(g.points[r]).segment(plan.offset_n, nb) += Sn.row(r);
                P.row(g.points[r]).segment(plan.offset_d, nb) += Dd.row(r);
            }
        }
    if (!P.allFinite()) throw NumericalError("non-finite potential matrix");
    return P;
}

Eigen::MatrixXd field_time_domain(const MtfDiscretization& disc, const PotentialOperator& pot,
                                  const TdRun& run, const CqOptions& opt) {
    const int i = pot.subdomain();
    const double c = disc.scene().wavespeed(i);
    const Eigen::MatrixXcd g =
        run.stages.middleRows(disc.map().subdomain_offset(i), disc.map().subdomain_size(i));
    TransferEvaluator ev;
    ev.apply = [&](cd s, const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd { return pot.matrix(s / c) * x; };
    const Eigen::MatrixXcd u = cq_forward(run.scheme, run.grid, ev, g, opt);
    return step_values(run.scheme, u).real();
}

OrderFit estimate_order(const std::vector<double>& dt, const std::vector<double>& err) {
    if (dt.size() != err.size() || dt.size() < 3)
        throw DomainError("estimate_order needs at least three (dt, error) pairs");
    const size_t n = dt.size();
    double mx = 0, my = 0;
    for (size_t k = 0; k < n; ++k) {
        if (!(dt[k] > 0) || !(err[k] > 0)) throw DomainError("estimate_order needs positive data");
        mx += std::log(dt[k]) / n;
        my += std::log(err[k]) / n;
    }
    double sxy = 0, sxx = 0;
    for (size_t k = 0; k < n; ++k) {
        sxy += (std::log(dt[k]) - mx) * (std::log(err[k]) - my);
        sxx += (std::log(dt[k]) - mx) * (std::log(dt[k]) - mx);
    }
    OrderFit fit;
    fit.slope = sxy / sxx;
    // order the pairs by decreasing dt and check that errors decrease
    std::vector<size_t> idx(n);
    for (size_t k = 0; k < n; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return dt[a] > dt[b]; });
    bool monotone = true;
    for (size_t k = 1; k < n; ++k) monotone = monotone && err[idx[k]] < err[idx[k - 1]];
    fit.ok = monotone && fit.slope > 0.5;
    return fit;
}

void write_error_table(const std::string& path, const std::string& header, const ErrorTable& t) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << header;
    for (size_t k = 0; k < t.columns.size(); ++k) f << (k ? "," : "") << t.columns[k];
    f << "\n";
    char buf[64];
    for (const auto& row : t.rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.9e", row[k]);
            f << (k ? "," : "") << buf;
        }
        f << "\n";
    }
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

void write_snapshot(const std::string& path, const Snapshot& s) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g", s.bbox[0], s.bbox[1], s.bbox[2], s.bbox[3]);
    f << "nx=" << s.nx << " ny=" << s.ny << " bbox=" << buf;
    std::snprintf(buf, sizeof buf, "%.6g", s.time);
    f << " t=" << buf << "\n";
    for (int r = 0; r < s.ny; ++r) {
        for (int c = 0; c < s.nx; ++c) {
            const double v = s.values(r, c);
            if (std::isnan(v)) std::snprintf(buf, sizeof buf, "nan");
            else std::snprintf(buf, sizeof buf, "%.6e", v);
            f << (c ? " " : "") << buf;
        }
        f << "\n";
    }
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<Snapshot> field_snapshots(const TdProblem& problem, const MtfDiscretization& disc,
                                      const TdRun& run, const std::vector<double>& times, int nx,
                                      int ny, double guard, const CqOptions& opt) {
    const Scene& sc = disc.scene();
    auto bb = sc.bbox();
    const double diam = std::max(bb[1] - bb[0], bb[3] - bb[2]);
    const std::array<double, 4> box{bb[0] - 0.5 * diam, bb[1] + 0.5 * diam, bb[2] - 0.5 * diam,
                                    bb[3] + 0.5 * diam};
    const int M = sc.num_subdomains();
    std::vector<std::vector<Vec2>> pts(M);
    std::vector<std::vector<std::pair<int, int>>> where(M);
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c) {
            const Vec2 p(box[0] + (box[1] - box[0]) * c / (nx - 1),
                         box[2] + (box[3] - box[2]) * r / (ny - 1));
            if (sc.boundary_distance(p) < guard * diam) continue;
            const int i = sc.locate(p);
            pts[i].push_back(p);
            where[i].emplace_back(r, c);
        }
    std::vector<Snapshot> out(times.size());
    std::vector<int> steps(times.size());
    const double dt = run.grid.dt();
    for (size_t k = 0; k < times.size(); ++k) {
        steps[k] = std::clamp(static_cast<int>(std::lround(times[k] / dt)), 0, run.grid.N);
        out[k].nx = nx;
        out[k].ny = ny;
        out[k].bbox = box;
        out[k].time = steps[k] * dt;
        out[k].values = Eigen::MatrixXd::Constant(ny, nx, std::numeric_limits<double>::quiet_NaN());
    }
    for (int i = 0; i < M; ++i) {
        if (pts[i].empty()) continue;
        const PotentialOperator pot(disc, i, pts[i]);
        const Eigen::MatrixXd u = field_time_domain(disc, pot, run, opt);
        for (size_t k = 0; k < times.size(); ++k)
            for (size_t p = 0; p < pts[i].size(); ++p) {
                double v = u(p, steps[k]);
                if (i == 0) v += problem.incident(pts[i][p], out[k].time);
                out[k].values(where[i][p].first, where[i][p].second) = v;
            }
    }
    return out;
}

}  // namespace cqmtf
