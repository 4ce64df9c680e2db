#include "cqmtf/geometry.hpp"

#include "cqmtf/errors.hpp"
#include "cqmtf/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cqmtf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPolySamples = 256;

}  // namespace

Interface::Interface(int a, int b, int left, Map h, Map dh, Map ddh)
    : lower_(std::min(a, b)), upper_(std::max(a, b)), left_(left), h_(std::move(h)),
      dh_(std::move(dh)), ddh_(std::move(ddh)) {
    if (a == b) throw TopologyError("interface between a subdomain and itself");
    if (left != a && left != b) throw TopologyError("left side is not one of the two subdomains");
    for (int q = 0; q <= 64; ++q)
        if (!(jacobian(-1.0 + q / 32.0) > 0.0))
            throw TopologyError("degenerate parametrization (zero speed)");
}

std::string Interface::label() const {
    return "G" + std::to_string(lower_) + std::to_string(upper_);
}

double Interface::jacobian_deriv(double t) const {
    const Vec2 d1 = dh_(t);
    Vec2 d2;
    if (ddh_) {
        d2 = ddh_(t);
    } else {
        const double e = 1e-5;
        const double lo = std::max(-1.0, t - e), hi = std::min(1.0, t + e);
        d2 = (dh_(hi) - dh_(lo)) / (hi - lo);
    }
    return d1.dot(d2) / d1.norm();
}

double Interface::length() const {
    const auto g = specfun::gauss_legendre(64);
    double s = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * jacobian(g.nodes[i]);
    return s;
}

Scene::Scene(std::string name, std::vector<double> wavespeeds, std::vector<Interface> interfaces)
    : name_(std::move(name)), c_(std::move(wavespeeds)), ifaces_(std::move(interfaces)) {
    const int m = num_subdomains();
    if (m < 2) throw TopologyError("need at least the exterior and one subdomain");
    for (double c : c_)
        if (!(c > 0.0)) throw TopologyError("wavespeeds must be positive");
    sides_.assign(m, {});
    for (int k = 0; k < num_interfaces(); ++k) {
        const Interface& g = ifaces_[k];
        if (g.upper() >= m) throw TopologyError("interface refers to unknown subdomain");
        for (int i : {g.lower(), g.upper()}) {
            SideView v;
            v.curve = &ifaces_[k];
            v.subdomain = i;
            v.interface = k;
            v.reversed = (g.left() != i);
            sides_[i].push_back(v);
        }
    }
    // Every boundary must close up: local end points match local start points.
    const double tol = 1e-10;
    for (int i = 0; i < m; ++i) {
        if (sides_[i].empty()) throw TopologyError("subdomain without boundary");
        std::vector<Vec2> starts, ends;
        for (const auto& v : sides_[i]) {
            starts.push_back(v.point(-1.0));
            ends.push_back(v.point(1.0));
        }
        std::vector<bool> used(starts.size(), false);
        for (const Vec2& e : ends) {
            bool found = false;
            for (size_t j = 0; j < starts.size(); ++j)
                if (!used[j] && (starts[j] - e).norm() < tol) {
                    used[j] = true;
                    found = true;
                    break;
                }
            if (!found)
                throw TopologyError("boundary of subdomain " + std::to_string(i) + " is not closed");
        }
        std::vector<Vec2> poly;
        for (const auto& v : sides_[i])
            for (int j = 0; j < kPolySamples; ++j) poly.push_back(v.point(-1.0 + 2.0 * j / kPolySamples));
        polyline_.push_back(std::move(poly));
    }
    // orientation: bounded subdomains must come out counterclockwise
    for (int i = 1; i < m; ++i) {
        double area = 0.0;
        for (const auto& v : sides_[i]) {
            const auto g = specfun::gauss_legendre(32);
            for (size_t q = 0; q < g.nodes.size(); ++q) {
                const Vec2 x = v.point(g.nodes[q]);
                const Vec2 t = v.tangent(g.nodes[q]);
                area += 0.5 * g.weights[q] * (x.x() * t.y() - x.y() * t.x());
            }
        }
        if (!(area > 0.0))
            throw TopologyError("subdomain " + std::to_string(i) + " is not on the left of its boundary");
    }
}

SideView Scene::side(int i, int interface) const {
    for (const auto& v : sides_.at(i))
        if (v.interface == interface) return v;
    throw TopologyError("interface " + std::to_string(interface) + " does not bound subdomain " +
                        std::to_string(i));
}

std::vector<int> Scene::neighbors(int i) const {
    std::vector<int> n;
    for (const auto& v : sides_.at(i)) {
        const int j = v.curve->other(i);
        if (std::find(n.begin(), n.end(), j) == n.end()) n.push_back(j);
    }
    std::sort(n.begin(), n.end());
    return n;
}

Frame Scene::eval_frame(int interface, int subdomain, double t) const {
    if (std::abs(t) > 1.0) throw DomainError("eval_frame: parameter outside [-1,1]");
    const SideView v = side(subdomain, interface);
    return {v.point(t), v.normal(t), v.jacobian(t)};
}

bool Scene::inside(int i, const Vec2& p) const {
    const auto& poly = polyline_.at(i);
    double wind = 0.0;
    // boundary samples are grouped per side but the loop closes overall;
    // summing turning angles over each side's samples plus its end point
    // gives the winding number of the full closed boundary.
    size_t idx = 0;
    for (const auto& v : sides_.at(i)) {
        for (int j = 0; j < kPolySamples; ++j, ++idx) {
            const Vec2 a = poly[idx] - p;
            const Vec2 b = (j + 1 < kPolySamples ? poly[idx + 1] : v.point(1.0)) - p;
            wind += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
        }
    }
    const int w = static_cast<int>(std::lround(wind / (2.0 * kPi)));
    return i == 0 ? w == 0 : w == 1;
}

int Scene::locate(const Vec2& p) const {
    for (int i = 1; i < num_subdomains(); ++i)
        if (inside(i, p)) return i;
    return 0;
}

double Scene::boundary_distance(const Vec2& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& g : ifaces_)
        for (int j = 0; j <= 4 * kPolySamples; ++j)
            d = std::min(d, (g.point(-1.0 + 2.0 * j / (4 * kPolySamples)) - p).norm());
    return d;
}

std::array<double, 4> Scene::bbox() const {
    std::array<double, 4> b{1e300, -1e300, 1e300, -1e300};
    for (const auto& g : ifaces_)
        for (int j = 0; j <= kPolySamples; ++j) {
            const Vec2 x = g.point(-1.0 + 2.0 * j / kPolySamples);
            b[0] = std::min(b[0], x.x());
            b[1] = std::max(b[1], x.x());
            b[2] = std::min(b[2], x.y());
            b[3] = std::max(b[3], x.y());
        }
    return b;
}

namespace {

Interface arc(int a, int b, int left, double r, double th0, double th1) {
    const double m = 0.5 * (th0 + th1), h = 0.5 * (th1 - th0);
    return Interface(
        a, b, left, [=](double t) { return Vec2(r * std::cos(m + h * t), r * std::sin(m + h * t)); },
        [=](double t) { return Vec2(-r * h * std::sin(m + h * t), r * h * std::cos(m + h * t)); },
        [=](double t) {
            return Vec2(-r * h * h * std::cos(m + h * t), -r * h * h * std::sin(m + h * t));
        });
}

Interface segment(int a, int b, int left, Vec2 p, Vec2 q) {
    const Vec2 mid = 0.5 * (p + q), half = 0.5 * (q - p);
    return Interface(a, b, left, [=](double t) { return Vec2(mid + t * half); },
                     [=](double) { return half; }, [](double) { return Vec2(0.0, 0.0); });
}

void check_speeds(const std::vector<double>& c, size_t n, const char* what) {
    if (c.size() != n)
        throw TopologyError(std::string(what) + ": expected " + std::to_string(n) + " wavespeeds");
}

}  // namespace

Scene build_circle_one(double r, std::vector<double> c) {
    check_speeds(c, 2, "circle1");
    std::vector<Interface> g;
    g.push_back(arc(0, 1, 1, r, 0.0, kPi));
    g.push_back(arc(0, 1, 1, r, kPi, 2.0 * kPi));
    return Scene("circle1", std::move(c), std::move(g));
}

Scene build_circle_two(double r, std::vector<double> c) {
    check_speeds(c, 3, "circle2");
    std::vector<Interface> g;
    g.push_back(arc(0, 1, 1, r, 0.5 * kPi, 1.5 * kPi));             // left arc
    g.push_back(arc(0, 2, 2, r, -0.5 * kPi, 0.5 * kPi));            // right arc
    g.push_back(segment(1, 2, 1, Vec2(0.0, -r), Vec2(0.0, r)));     // diameter
    return Scene("circle2", std::move(c), std::move(g));
}

Scene build_square_four(double a, std::vector<double> c) {
    check_speeds(c, 5, "square4");
    const double h = 0.5 * a;
    // quadrants: 1 top-left, 2 top-right, 3 bottom-right, 4 bottom-left
    std::vector<Interface> g;
    g.push_back(segment(0, 4, 4, Vec2(-h, -h), Vec2(0, -h)));
    g.push_back(segment(0, 3, 3, Vec2(0, -h), Vec2(h, -h)));
    g.push_back(segment(0, 3, 3, Vec2(h, -h), Vec2(h, 0)));
    g.push_back(segment(0, 2, 2, Vec2(h, 0), Vec2(h, h)));
    g.push_back(segment(0, 2, 2, Vec2(h, h), Vec2(0, h)));
    g.push_back(segment(0, 1, 1, Vec2(0, h), Vec2(-h, h)));
    g.push_back(segment(0, 1, 1, Vec2(-h, h), Vec2(-h, 0)));
    g.push_back(segment(0, 4, 4, Vec2(-h, 0), Vec2(-h, -h)));
    g.push_back(segment(1, 2, 1, Vec2(0, 0), Vec2(0, h)));
    g.push_back(segment(2, 3, 2, Vec2(0, 0), Vec2(h, 0)));
    g.push_back(segment(3, 4, 3, Vec2(0, 0), Vec2(0, -h)));
    g.push_back(segment(1, 4, 4, Vec2(0, 0), Vec2(-h, 0)));
    return Scene("square4", std::move(c), std::move(g));
}

Scene build_kite_two(std::vector<double> c) {
    check_speeds(c, 3, "kite2");
    auto kite = [](double T) { return Vec2(std::cos(T) + 0.65 * std::cos(2 * T), std::sin(T)); };
    auto dkite = [](double T) { return Vec2(-std::sin(T) - 1.3 * std::sin(2 * T), std::cos(T)); };
    auto ddkite = [](double T) { return Vec2(-std::cos(T) - 2.6 * std::cos(2 * T), -std::sin(T)); };
    const double s = 0.5 * kPi;
    std::vector<Interface> g;
    // upper arc T in [0, pi], lower arc T in [pi, 2 pi]
    for (int half = 0; half < 2; ++half) {
        const double T0 = half * kPi + s;
        g.emplace_back(0, 1 + half, 1 + half, [=](double t) { return kite(T0 + s * t); },
                       [=](double t) { return Vec2(s * dkite(T0 + s * t)); },
                       [=](double t) { return Vec2(s * s * ddkite(T0 + s * t)); });
    }
    g.push_back(segment(1, 2, 1, kite(kPi), kite(0.0)));
    return Scene("kite2", std::move(c), std::move(g));
}

Scene build_scene(const std::string& name, double size, std::vector<double> c) {
    if (name == "circle1") return build_circle_one(size, std::move(c));
    if (name == "circle2") return build_circle_two(size, std::move(c));
    if (name == "square4") return build_square_four(size, std::move(c));
    if (name == "kite2") return build_kite_two(std::move(c));
    throw ConfigError("unknown geometry '" + name + "'");
}

}  // namespace cqmtf
