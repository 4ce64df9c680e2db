#pragma once

#include "cqmtf/bio_assembly.hpp"
#include "cqmtf/geometry.hpp"
#include "cqmtf/spectral_basis.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace cqmtf {

// Transmission data on interface k at point x, with n the normal of the
// lower-indexed side:  a = u_lower - u_upper,  b = dn u_lower + dn u_upper.
using JumpFn = std::function<std::pair<cd, cd>(int interface, const Vec2& x, const Vec2& n)>;

class MtfDiscretization {
public:
    MtfDiscretization(const Scene& scene, int L, const QuadratureSettings& q = {});

    const Scene& scene() const { return scene_; }
    const BlockIndexMap& map() const { return map_; }
    int degree() const { return L_; }
    int size() const { return map_.size(); }
    const SubdomainOperator& local(int i) const { return *local_.at(i); }

    // F(s) with s_i = s / c_i, or with explicit per-subdomain frequencies.
    Eigen::MatrixXcd assemble(cd s) const;
    Eigen::MatrixXcd assemble(const std::vector<cd>& s_sub) const;
    // Coupling (identity) part only.
    Eigen::MatrixXcd coupling() const;

    Eigen::VectorXcd rhs(const JumpFn& jumps) const;
    // Same, for several data sets sampled at once (one column each).
    Eigen::MatrixXcd rhs(const std::function<Eigen::VectorXcd(int, const Vec2&, const Vec2&)>& a,
                         const std::function<Eigen::VectorXcd(int, const Vec2&, const Vec2&)>& b,
                         int ncols) const;

    // Same-side mass matrix <xi_m, chi_l> for side (i, interface).
    const Eigen::MatrixXd& mass(int i, int interface) const;

private:
    Scene scene_;
    int L_;
    int Qrhs_;
    BlockIndexMap map_;
    std::vector<std::unique_ptr<SubdomainOperator>> local_;
    Eigen::MatrixXcd coupling_;
    std::vector<std::vector<Eigen::MatrixXd>> mass_;
};

// Factorized F(s).
class MtfSystem {
public:
    MtfSystem(const MtfDiscretization& d, cd s);
    MtfSystem(const MtfDiscretization& d, const std::vector<cd>& s_sub);

    const Eigen::MatrixXcd& matrix() const { return F_; }
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const { return F_ * x; }
    double rcond() const { return rcond_; }

private:
    void factor();
    Eigen::MatrixXcd F_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 0.0;
};

// Plane wave exp(-s0 x.d) coming from the exterior: jump data.
JumpFn plane_wave_jumps(const Scene& scene, cd s0, const Vec2& d);

}  // namespace cqmtf
