#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace cqmtf {

using Vec2 = Eigen::Vector2d;

// One parametrized curve h : [-1,1] -> R^2 separating two subdomains.
class Interface {
public:
    using Map = std::function<Vec2(double)>;

    // `left` is the subdomain lying to the left of increasing t.  Without a
    // second derivative, J' falls back to central differences of h'.
    Interface(int a, int b, int left, Map h, Map dh, Map ddh = {});

    int lower() const { return lower_; }
    int upper() const { return upper_; }
    int left() const { return left_; }
    int other(int i) const { return i == lower_ ? upper_ : lower_; }
    std::string label() const;

    Vec2 point(double t) const { return h_(t); }
    Vec2 tangent(double t) const { return dh_(t); }
    double jacobian(double t) const { return dh_(t).norm(); }
    double jacobian_deriv(double t) const;
    double length() const;

private:
    int lower_, upper_, left_;
    Map h_, dh_, ddh_;
};

// Interface seen from one of its subdomains.  The local parameter runs so
// that the subdomain is on the left; the normal points out of it.
struct SideView {
    const Interface* curve = nullptr;
    int subdomain = 0;
    int interface = 0;
    bool reversed = false;

    double global_t(double t) const { return reversed ? -t : t; }
    Vec2 point(double t) const { return curve->point(global_t(t)); }
    Vec2 tangent(double t) const {
        return reversed ? Vec2(-curve->tangent(-t)) : curve->tangent(t);
    }
    double jacobian(double t) const { return curve->jacobian(global_t(t)); }
    double jacobian_deriv(double t) const {
        return reversed ? -curve->jacobian_deriv(-t) : curve->jacobian_deriv(t);
    }
    Vec2 normal(double t) const {
        const Vec2 tau = tangent(t);
        return Vec2(tau.y(), -tau.x()) / tau.norm();
    }
};

struct Frame {
    Vec2 point;
    Vec2 normal;
    double jacobian;
};

class Scene {
public:
    Scene(std::string name, std::vector<double> wavespeeds, std::vector<Interface> interfaces);
    Scene(const Scene& o) : Scene(o.name_, o.c_, o.ifaces_) {}
    Scene(Scene&&) = default;
    Scene& operator=(const Scene& o) {
        if (this != &o) *this = Scene(o);
        return *this;
    }
    Scene& operator=(Scene&&) = default;

    const std::string& name() const { return name_; }
    int num_subdomains() const { return static_cast<int>(c_.size()); }
    int num_interfaces() const { return static_cast<int>(ifaces_.size()); }
    double wavespeed(int i) const { return c_.at(i); }
    const std::vector<double>& wavespeeds() const { return c_; }
    const Interface& interface(int k) const { return ifaces_.at(k); }

    // Sides bounding subdomain i, in interface order.
    const std::vector<SideView>& sides(int i) const { return sides_.at(i); }
    SideView side(int i, int interface) const;
    std::vector<int> neighbors(int i) const;

    // t is the side-local parameter; the normal is outward for `subdomain`.
    Frame eval_frame(int interface, int subdomain, double t) const;

    // Point location (winding number of the sampled boundary) and the
    // distance to the nearest interface sample.
    bool inside(int i, const Vec2& p) const;
    int locate(const Vec2& p) const;
    double boundary_distance(const Vec2& p) const;

    // Bounding box of all interfaces: xmin, xmax, ymin, ymax.
    std::array<double, 4> bbox() const;

private:
    std::string name_;
    std::vector<double> c_;
    std::vector<Interface> ifaces_;
    std::vector<std::vector<SideView>> sides_;
    std::vector<std::vector<Vec2>> polyline_;  // sampled boundary per subdomain
};

Scene build_circle_one(double r, std::vector<double> c);
Scene build_circle_two(double r, std::vector<double> c);
Scene build_square_four(double a, std::vector<double> c);
Scene build_kite_two(std::vector<double> c);

// By name: "circle1", "circle2", "square4", "kite2".
Scene build_scene(const std::string& name, double size, std::vector<double> c);

}  // namespace cqmtf
