#include "cqmtf/signals.hpp"

#include "cqmtf/errors.hpp"

#include <cmath>

namespace cqmtf {

double eta(double t, double t0, double t1) {
    if (!(t0 < t1)) throw DomainError("eta: need t0 < t1");
    if (t <= t0) return 0.0;
    if (t >= t1) return 1.0;
    const double tau = (t - t0) / (t1 - t0);
    return 1.0 - std::exp(2.0 * std::exp(-1.0 / tau) / (tau - 1.0));
}

double eta_deriv(double t, double t0, double t1) {
    if (!(t0 < t1)) throw DomainError("eta: need t0 < t1");
    if (t <= t0 || t >= t1) return 0.0;
    const double tau = (t - t0) / (t1 - t0);
    const double e = std::exp(-1.0 / tau);
    const double g = 2.0 * e / (tau - 1.0);
    // g' = 2 e (1/tau^2 (tau-1) - 1) / (tau-1)^2
    const double dg = 2.0 * e * ((tau - 1.0) / (tau * tau) - 1.0) / ((tau - 1.0) * (tau - 1.0));
    return -std::exp(g) * dg / (t1 - t0);
}

double WindowedSine::value(double t) const {
    if (t <= t0) return 0.0;
    return std::sin(omega * t) * eta(t, t0, t1);
}

double WindowedSine::deriv(double t) const {
    if (t <= t0) return 0.0;
    return omega * std::cos(omega * t) * eta(t, t0, t1) + std::sin(omega * t) * eta_deriv(t, t0, t1);
}

TravellingWave TravellingWave::plane_wave(double c0, double omega, double lag, const Vec2& d) {
    TravellingWave w;
    w.f.omega = omega;
    w.c = c0;
    w.shift = c0 * lag;
    w.d = d.normalized();
    return w;
}

TravellingWave TravellingWave::manufactured(double c1, double omega, double lag, const Vec2& d) {
    TravellingWave w;
    w.f.omega = omega;
    w.c = c1;
    w.shift = lag;
    w.d = d.normalized();
    return w;
}

double TravellingWave::value(const Vec2& x, double t) const {
    return f.value(c * t - shift - x.dot(d));
}

double TravellingWave::dn(const Vec2& x, const Vec2& n, double t) const {
    return -d.dot(n) * f.deriv(c * t - shift - x.dot(d));
}

}  // namespace cqmtf
