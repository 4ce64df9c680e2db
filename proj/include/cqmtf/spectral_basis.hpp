#pragma once

#include "cqmtf/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace cqmtf {

using cd = std::complex<double>;

// Unknown layout: subdomain-major, then the sides of that subdomain in
// interface order, Dirichlet before Neumann, then polynomial degree 0..L.
class BlockIndexMap {
public:
    BlockIndexMap(const Scene& scene, int L);

    int degree() const { return L_; }
    int block_size() const { return L_ + 1; }
    int size() const { return total_; }
    int offset(int subdomain, int interface, int comp) const;
    int subdomain_offset(int i) const { return sub_off_.at(i); }
    int subdomain_size(int i) const { return sub_size_.at(i); }

private:
    const Scene* scene_;
    int L_;
    int total_ = 0;
    std::vector<int> sub_off_, sub_size_;
};

// Trial functions xi_l = U_l(t)/J(t); test functions chi_l = U_l(t) sqrt(1-t^2)/J(t).
double trial_value(const SideView& s, int l, double t);
double test_value(const SideView& s, int l, double t);

// sum_m c_m xi_m(t)
cd eval_trace(const SideView& s, const Eigen::Ref<const Eigen::VectorXcd>& c, double t);

// Coefficients of the trial expansion interpolating f on the side (f is a
// function of the side-local parameter).
Eigen::VectorXcd project_trace(const SideView& s, const std::function<cd(double)>& f, int L,
                               int nsamples = 0);

// b_l = int f chi_l ds = int f(t) U_l(t) sqrt(1-t^2) dt, Q-point midpoint rule.
Eigen::VectorXcd test_moments(const std::function<cd(double)>& f, int L, int Q);

// X[l,m] = int xi_m(sigma(t)) chi_l(t) ds on one interface; sigma(t) = -t when
// the two views are opposite sides, the identity for the same side.
Eigen::MatrixXd duality_block(const SideView& trial, const SideView& test, int L, int Q = 0);

// G[l,m] = int xi_m xi_l ds = int U_m U_l / J dt
Eigen::MatrixXd trial_gram(const SideView& s, int L);

}  // namespace cqmtf
