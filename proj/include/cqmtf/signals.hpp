#pragma once

#include "cqmtf/geometry.hpp"

namespace cqmtf {

// Smooth step: 0 for t <= t0, 1 for t >= t1.
double eta(double t, double t0, double t1);
double eta_deriv(double t, double t0, double t1);

// f(t) = sin(omega t) eta(t, t0, t1) and its derivative.
struct WindowedSine {
    double omega = 1.0;
    double t0 = 0.2, t1 = 2.0;
    double value(double t) const;
    double deriv(double t) const;
};

// u(x, t) = f(c (t - lag) - x.d)                       (plane wave)
// u(x, t) = f(c t - lag - x.d)                         (manufactured field)
// Both are f(c t - shift - x.d); `shift` is c*lag or lag respectively.
struct TravellingWave {
    WindowedSine f;
    double c = 1.0;
    double shift = 0.0;
    Vec2 d{1.0, 0.0};

    static TravellingWave plane_wave(double c0, double omega, double lag, const Vec2& d);
    static TravellingWave manufactured(double c1, double omega, double lag, const Vec2& d);

    double value(const Vec2& x, double t) const;
    // normal derivative dn u = -(d.n) f'
    double dn(const Vec2& x, const Vec2& n, double t) const;
};

}  // namespace cqmtf
