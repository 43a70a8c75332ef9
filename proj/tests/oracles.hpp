// Independent reference computations used by the unit and acceptance tests.
//
// Nothing here calls the library's derivative or integration code paths that
// it is meant to check: derivatives come from finite differences of
// level_error, trajectories from closed forms or a separate Euler loop.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "gvf/curve.hpp"
#include "gvf/formation.hpp"
#include "gvf/guidance.hpp"
#include "gvf/types.hpp"

namespace oracle {

using gvf::Mat2;
using gvf::Vec2;

inline Vec2 fd_gradient(const gvf::ImplicitCurve &c, const Vec2 &p, double h) {
    const Vec2 dx(h, 0.0);
    const Vec2 dy(0.0, h);
    return {(gvf::level_error(c, p + dx) - gvf::level_error(c, p - dx)) / (2.0 * h),
            (gvf::level_error(c, p + dy) - gvf::level_error(c, p - dy)) / (2.0 * h)};
}

// Second central differences of the level function itself.
inline Mat2 fd_hessian(const gvf::ImplicitCurve &c, const Vec2 &p, double h) {
    auto f = [&](double ox, double oy) { return gvf::level_error(c, p + Vec2(ox, oy)); };
    const double f0 = f(0, 0);
    Mat2 hs;
    hs(0, 0) = (f(h, 0) - 2.0 * f0 + f(-h, 0)) / (h * h);
    hs(1, 1) = (f(0, h) - 2.0 * f0 + f(0, -h)) / (h * h);
    hs(0, 1) = hs(1, 0) = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    return hs;
}

inline double relative_error(double got, double want, double floor = 0.0) {
    return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline double relative_error(const Vec2 &got, const Vec2 &want, double floor = 0.0) {
    return (got - want).norm() / std::max(want.norm(), floor);
}

inline double relative_error(const Mat2 &got, const Mat2 &want, double floor = 0.0) {
    return (got - want).norm() / std::max(want.norm(), floor);
}

/// Position after time t under a constant yaw rate w (w != 0).
inline Vec2 constant_turn(const Vec2 &p0, double yaw0, double speed, double w, double t) {
    return p0 + (speed / w) * Vec2(std::sin(yaw0 + w * t) - std::sin(yaw0),
                                   -std::cos(yaw0 + w * t) + std::cos(yaw0));
}

/**
 * Turn rate of the unit field direction seen by a point moving with velocity
 * v: cross(d, dd/dt) where dd/dt is a Richardson-extrapolated central
 * difference of the direction along v.
 */
inline double field_turn_rate(const gvf::ImplicitCurve &c, const gvf::GvfParams &params,
                              const Vec2 &p, const Vec2 &v, double h) {
    auto dir = [&](double t) { return gvf::build_field(c, params, p + t * v).desired_direction; };
    const Vec2 d1 = (dir(h) - dir(-h)) / (2.0 * h);
    const Vec2 d2 = (dir(h / 2) - dir(-h / 2)) / h;
    const Vec2 rate = (4.0 * d2 - d1) / 3.0;
    return gvf::cross2(dir(0.0), rate);
}

struct EulerVehicle {
    Vec2 p;
    double yaw;
    double speed;
};

/**
 * Two vehicles on one edge, forward Euler with a small step, instantaneous
 * messages and a lockstep 2 Hz control loop. Returns the wrapped phase
 * difference sampled every `sample_every` seconds.
 */
inline std::vector<double> euler_two_vehicle_z(EulerVehicle a, EulerVehicle b, double r,
                                               const gvf::GvfParams &gvf, double k_r,
                                               double duration, double dt, double max_bank,
                                               double sample_every) {
    const gvf::ImplicitCurve base = gvf::ImplicitCurve::circle(Vec2::Zero(), r);
    gvf::ImplicitCurve ca = base;
    gvf::ImplicitCurve cb = base;
    const double sign = gvf.rotation_sense == gvf::RotationSense::counterclockwise ? 1.0 : -1.0;
    const long steps = std::lround(duration / dt);
    const long control_every = std::lround(0.5 / dt);
    const long sample_steps = std::lround(sample_every / dt);
    std::vector<double> z;
    auto theta = [](const Vec2 &p) { return std::atan2(p.y(), p.x()); };
    auto limit = [&](double u, double s) {
        const double m = 9.81 * std::tan(max_bank) / s;
        return std::clamp(u, -m, m);
    };
    for (long k = 0; k < steps; ++k) {
        if (k % sample_steps == 0) {
            z.push_back(gvf::wrap_angle(theta(a.p) - theta(b.p)));
        }
        if (k % control_every == 0) {
            const double diff = gvf::wrap_angle(theta(a.p) - theta(b.p));
            ca = gvf::ImplicitCurve::circle(Vec2::Zero(), std::clamp(r + sign * k_r * diff, 0.2 * r, 5 * r));
            cb = gvf::ImplicitCurve::circle(Vec2::Zero(), std::clamp(r - sign * k_r * diff, 0.2 * r, 5 * r));
        }
        for (auto [v, c] : {std::pair{&a, &ca}, std::pair{&b, &cb}}) {
            const gvf::VehicleState st{v->p, v->yaw, v->speed};
            const double u = limit(gvf::yaw_rate_command(*c, gvf, st), v->speed);
            v->p += dt * v->speed * Vec2(std::cos(v->yaw), std::sin(v->yaw));
            v->yaw += dt * u;
        }
    }
    return z;
}

/// Random labelled tree on n vertices (IDs 1..n), random edge orientation.
inline gvf::FormationGraph random_tree(std::mt19937_64 &rng, int n) {
    std::vector<gvf::AircraftId> ids;
    for (int i = 1; i <= n; ++i) {
        ids.push_back(static_cast<gvf::AircraftId>(i));
    }
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<gvf::Edge> edges;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        gvf::AircraftId a = ids[static_cast<std::size_t>(i)];
        gvf::AircraftId b = ids[static_cast<std::size_t>(pick(rng))];
        if (std::bernoulli_distribution(0.5)(rng)) {
            std::swap(a, b);
        }
        edges.push_back({a, b});
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return gvf::FormationGraph(ids, edges);
}

/// Least-squares fit of log|e| against t; returns the coefficient of determination.
inline double log_linear_r2(const std::vector<double> &t, const std::vector<double> &e,
                            double *slope = nullptr) {
    const std::size_t n = t.size();
    double st = 0, sy = 0;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::log(std::abs(e[i]));
        st += t[i];
        sy += y[i];
    }
    const double mt = st / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double stt = 0, sty = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (slope) {
        *slope = sty / stt;
    }
    return syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
}

} // namespace oracle
