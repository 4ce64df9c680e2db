#pragma once

#include "cqmtf/cq_engine.hpp"
#include "cqmtf/mtf_system.hpp"
#include "cqmtf/td_driver.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace cqmtf {

// Equivalent H^{+-1/2} norms on the boundary of one subdomain, from the
// single layer Galerkin matrix at s = 10.  Vectors hold the Dirichlet (or
// Neumann) coefficients of all sides of the subdomain, in interface order.
class NormOperator {
public:
    NormOperator(const MtfDiscretization& disc, int subdomain, double s = 10.0);

    int size() const { return static_cast<int>(Hplus_.rows()); }
    double plus_half(const Eigen::VectorXcd& u) const;   // <V^{-1} u, u>^{1/2}
    double minus_half(const Eigen::VectorXcd& phi) const;  // <V phi, phi>^{1/2}
    // comp 0: Dirichlet (+1/2), comp 1: Neumann (-1/2)
    double norm(const Eigen::VectorXcd& v, int comp) const {
        return comp == 0 ? plus_half(v) : minus_half(v);
    }
    const Eigen::MatrixXcd& V() const { return V_; }
    const Eigen::MatrixXcd& minus_form() const { return Hminus_; }

private:
    double form(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v) const;
    Eigen::MatrixXcd V_, Hplus_, Hminus_;
};

// Dirichlet (comp 0) or Neumann (comp 1) coefficients of subdomain i,
// all sides concatenated, from a full unknown vector.
Eigen::VectorXcd boundary_component(const MtfDiscretization& disc, int subdomain, int comp,
                                    const Eigen::VectorXcd& full);

// Coefficient vector of degree L_from zero-padded (or truncated) to L_to.
Eigen::VectorXcd change_degree(const Eigen::VectorXcd& v, int L_from, int L_to);

// Relative error  (sum_n |ref_n - x_n|^2)^{1/2} / (sum_n |ref_n|^2)^{1/2}  in
// the norm of the component; NaN when the reference vanishes.  Columns are
// time steps of full unknown vectors.
double trace_error(const NormOperator& op, const MtfDiscretization& disc, int subdomain, int comp,
                   const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& ref);

// Relative ell^2 error over points and steps.  When the reference vanishes
// identically the error is absolute, weighted by dt so that it is an
// L^2-in-time norm independent of the number of steps (`absolute` is set).
double field_error(const Eigen::MatrixXd& u, const Eigen::MatrixXd& ref, double dt = 1.0,
                   bool* absolute = nullptr);

// Points inside subdomain i at least guard * diameter away from every interface.
std::vector<Vec2> sample_points(const Scene& scene, int subdomain, int count, double guard);

// Representation formula  u = S gamma_n - D gamma_d  for points of one subdomain,
// with panel rules graded by the distance of each point to each side.
class PotentialOperator {
public:
    PotentialOperator(const MtfDiscretization& disc, int subdomain, std::vector<Vec2> points,
                      double min_distance = 0.0);
    ~PotentialOperator();
    PotentialOperator(PotentialOperator&&) noexcept;

    int subdomain() const { return sub_; }
    const std::vector<Vec2>& points() const { return pts_; }
    // rows: points, columns: the subdomain's unknowns; s_i is the local frequency.
    Eigen::MatrixXcd matrix(cd s_i) const;

private:
    struct SidePlan;
    int sub_;
    int nloc_;
    std::vector<Vec2> pts_;
    std::vector<SidePlan> plans_;
};

// Field of subdomain i at the step times: CQ forward of the potentials.
Eigen::MatrixXd field_time_domain(const MtfDiscretization& disc, const PotentialOperator& pot,
                                  const TdRun& run, const CqOptions& opt = {});

struct OrderFit {
    double slope = 0.0;
    bool ok = false;  // monotone decrease and a meaningful slope
};

// Least-squares slope of log(err) against log(dt).
OrderFit estimate_order(const std::vector<double>& dt, const std::vector<double>& err);

struct ErrorTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_error_table(const std::string& path, const std::string& header, const ErrorTable& t);

struct Snapshot {
    int nx = 0, ny = 0;
    std::array<double, 4> bbox{};  // xmin xmax ymin ymax
    double time = 0.0;
    Eigen::MatrixXd values;        // ny x nx, NaN inside the guard band
};

void write_snapshot(const std::string& path, const Snapshot& s);

// Total field (scattered + incident outside) on a grid at the given times.
std::vector<Snapshot> field_snapshots(const TdProblem& problem, const MtfDiscretization& disc,
                                      const TdRun& run, const std::vector<double>& times, int nx,
                                      int ny, double guard, const CqOptions& opt = {});

}  // namespace cqmtf
