#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cellinj/errors.hpp"
#include "cellinj/frames.hpp"
#include "cellinj/linalg2.hpp"

namespace cellinj {

/// Masses below this are rejected so that exp(-t/M) stays evaluable.
inline constexpr double kMinMass = 1e-12;
/// Integration aborts once any state component exceeds this magnitude.
inline constexpr double kOverflowBound = 1e100;
/// Largest number of steps simulate() accepts.
inline constexpr double kMaxSteps = 1e8;
inline constexpr double kDefaultStep = 1e-3;

/// Masses (kg) of the x table, the y table and the working plate.
class MassParams {
public:
    MassParams(double mx, double my, double mp) : mx_(mx), my_(my), mp_(mp) {
        check(mx, "mx");
        check(my, "my");
        check(mp, "mp");
    }

    double mx() const { return mx_; }
    double my() const { return my_; }
    double mp() const { return mp_; }

    /// Mass carried along x: every body moves with the x table.
    double x_axis() const { return mx_ + my_ + mp_; }
    /// Mass carried along y: the y table and the plate.
    double y_axis() const { return my_ + mp_; }

    friend bool operator==(const MassParams&, const MassParams&) = default;

private:
    static void check(double m, const char* name) {
        if (!std::isfinite(m)) throw DomainError(std::string(name) + " must be finite");
        if (!(m > 0.0)) throw DomainError(std::string(name) + " must be positive");
        if (m < kMinMass) throw DomainError(std::string(name) + " is below the minimum mass 1e-12");
    }

    double mx_;
    double my_;
    double mp_;
};

/// Motor torque (taux, tauy) and desired actuator force (fexd, feyd); constant over a run.
struct Wrench {
    double taux = 0.0;
    double tauy = 0.0;
    double fexd = 0.0;
    double feyd = 0.0;

    constexpr Vec2 torque() const { return {taux, tauy}; }
    constexpr Vec2 desired_force() const { return {fexd, feyd}; }
    /// Right-hand side of the equation of motion, torque minus desired force.
    constexpr Vec2 net() const { return torque() - desired_force(); }

    friend constexpr bool operator==(const Wrench&, const Wrench&) = default;
};

inline double norm_inf(const Wrench& w) {
    return std::max({std::abs(w.taux), std::abs(w.tauy), std::abs(w.fexd), std::abs(w.feyd)});
}

struct StageState {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double xdot = 0.0;
    double ydot = 0.0;

    constexpr Vec2 position() const { return {x, y}; }
    constexpr Vec2 velocity() const { return {xdot, ydot}; }

    friend constexpr bool operator==(const StageState&, const StageState&) = default;
};

inline bool is_finite(const StageState& s) {
    return std::isfinite(s.t) && std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.xdot) &&
           std::isfinite(s.ydot);
}

/// Uniformly stepped samples, first sample at the initial state.
class Trajectory {
public:
    using const_iterator = std::vector<StageState>::const_iterator;

    Trajectory(double dt, std::vector<StageState> samples) : dt_(dt), samples_(std::move(samples)) {}

    double dt() const { return dt_; }
    std::size_t size() const { return samples_.size(); }
    const StageState& operator[](std::size_t i) const { return samples_[i]; }
    const StageState& front() const { return samples_.front(); }
    const StageState& back() const { return samples_.back(); }
    const_iterator begin() const { return samples_.begin(); }
    const_iterator end() const { return samples_.end(); }

private:
    double dt_;
    std::vector<StageState> samples_;
};

inline Mat2 mass_matrix(const MassParams& m) { return Mat2::diagonal(m.x_axis(), m.y_axis()); }

/// Damping of the positioning tables; the identity.
inline constexpr Mat2 posit_table_matrix() { return Mat2::identity(); }

/// M * accel + C * vel - (tau - fe). Zero exactly when the state satisfies the dynamics.
inline Vec2 dynamics_residual(const MassParams& m, Vec2 accel, Vec2 vel, const Wrench& w) {
    return mass_matrix(m) * accel + posit_table_matrix() * vel - w.net();
}

namespace detail {

inline void check_analytic_args(const StageState& init, double t) {
    if (init.t != 0.0) throw DomainError("analytic solution requires the initial state at t = 0");
    if (!(t >= 0.0)) throw DomainError("analytic solution requires t >= 0");
}

// Per-axis closed form of M q'' + q' = c with q(0) = q0, q'(0) = v0, written
// around expm1 so that t = 0 reproduces q0 exactly.
struct AxisSolution {
    double position;
    double velocity;
    double acceleration;
};

inline AxisSolution solve_axis(double mass, double q0, double v0, double c, double t) {
    const double decay = std::exp(-t / mass);
    const double decay_m1 = std::expm1(-t / mass);
    const double gap = c - v0;
    return {(q0 + c * t) + mass * gap * decay_m1, c - gap * decay, gap / mass * decay};
}

// Zero-input form q0 + v0 M (1 - e^(-t/M)); bitwise equal to solve_axis with c = 0.
inline AxisSolution solve_axis_homogeneous(double mass, double q0, double v0, double t) {
    const double decay = std::exp(-t / mass);
    return {q0 + v0 * mass * -std::expm1(-t / mass), v0 * decay, -v0 / mass * decay};
}

}  // namespace detail

/// Closed-form zero-wrench motion from init (at t = 0) evaluated at time t.
/// Velocities are the exact derivatives of the positions.
inline StageState analytic_homogeneous_solution(const MassParams& m, const StageState& init, double t) {
    detail::check_analytic_args(init, t);
    const auto ax = detail::solve_axis_homogeneous(m.x_axis(), init.x, init.xdot, t);
    const auto ay = detail::solve_axis_homogeneous(m.y_axis(), init.y, init.ydot, t);
    return {t, ax.position, ay.position, ax.velocity, ay.velocity};
}

/// Exact second derivative of analytic_homogeneous_solution.
inline Vec2 analytic_homogeneous_acceleration(const MassParams& m, const StageState& init, double t) {
    detail::check_analytic_args(init, t);
    return {detail::solve_axis_homogeneous(m.x_axis(), init.x, init.xdot, t).acceleration,
            detail::solve_axis_homogeneous(m.y_axis(), init.y, init.ydot, t).acceleration};
}

/// Closed-form motion under a constant wrench. Per axis with mass M and input c:
/// q(t) = q0 - M(c - v0) + c t + M(c - v0) e^(-t/M), evaluated as
/// q0 + c t + M(c - v0)(e^(-t/M) - 1). Bitwise equal to the homogeneous solution
/// when the wrench is zero.
inline StageState analytic_constant_input_solution(const MassParams& m, const StageState& init, const Wrench& w,
                                                   double t) {
    detail::check_analytic_args(init, t);
    const Vec2 c = w.net();
    const auto ax = detail::solve_axis(m.x_axis(), init.x, init.xdot, c.e1, t);
    const auto ay = detail::solve_axis(m.y_axis(), init.y, init.ydot, c.e2, t);
    return {t, ax.position, ay.position, ax.velocity, ay.velocity};
}

inline Vec2 analytic_constant_input_acceleration(const MassParams& m, const StageState& init, const Wrench& w,
                                                 double t) {
    detail::check_analytic_args(init, t);
    const Vec2 c = w.net();
    return {detail::solve_axis(m.x_axis(), init.x, init.xdot, c.e1, t).acceleration,
            detail::solve_axis(m.y_axis(), init.y, init.ydot, c.e2, t).acceleration};
}

/// Number of steps of size dt covering span, i.e. floor(span/dt). Quotients within
/// a relative 1e-12 below an integer are snapped up so 0.3/0.1 yields 3 steps.
inline std::size_t step_count(double span, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
    if (!(span >= 0.0) || !std::isfinite(span)) throw DomainError("t_end must not precede the initial time");
    const double ratio = span / dt;
    if (ratio > kMaxSteps) throw DomainError("horizon requires more than 1e8 steps");
    return static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
}

/// Classical fixed-step RK4 integration of the equation of motion under a
/// constant wrench, from init.t to within dt of t_end. Sample i sits at
/// init.t + i*dt.
inline Trajectory simulate(const MassParams& m, const StageState& init, const Wrench& w, double dt, double t_end) {
    if (!is_finite(init)) throw DomainError("initial state must be finite");
    const std::size_t steps = step_count(t_end - init.t, dt);

    // M is diagonal and positive; invert entrywise rather than through the
    // determinant guard, which would reject valid masses near kMinMass.
    const Mat2 inv_mass = Mat2::diagonal(1.0 / m.x_axis(), 1.0 / m.y_axis());
    const Mat2 damping = posit_table_matrix();
    const Vec2 net = w.net();

    struct Deriv {
        Vec2 dq;
        Vec2 dv;
    };
    auto rhs = [&](Vec2 vel) { return Deriv{vel, inv_mass * (net - damping * vel)}; };

    std::vector<StageState> out;
    out.reserve(steps + 1);
    out.push_back(init);

    Vec2 q = init.position();
    Vec2 v = init.velocity();
    const double h = dt;
    for (std::size_t i = 1; i <= steps; ++i) {
        // The right-hand side does not depend on position, so stage positions feed
        // only the q update.
        const Deriv k1 = rhs(v);
        const Deriv k2 = rhs(v + (0.5 * h) * k1.dv);
        const Deriv k3 = rhs(v + (0.5 * h) * k2.dv);
        const Deriv k4 = rhs(v + h * k3.dv);
        q = q + (h / 6.0) * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
        v = v + (h / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);

        const StageState s{init.t + static_cast<double>(i) * h, q.e1, q.e2, v.e1, v.e2};
        if (!is_finite(s) || std::abs(s.x) > kOverflowBound || std::abs(s.y) > kOverflowBound ||
            std::abs(s.xdot) > kOverflowBound || std::abs(s.ydot) > kOverflowBound) {
            throw OverflowError("state diverged at step " + std::to_string(i));
        }
        out.push_back(s);
    }
    return Trajectory(dt, std::move(out));
}

/// Mass matrix seen against image-frame accelerations, M * T^-1.
inline Mat2 inertia_matrix(const MassParams& m, const Calibration& c, double eps = kDefaultSingularEps) {
    return mass_matrix(m) * inverse2(transformation_matrix(c), eps);
}

/// Damping seen against image-frame velocities, C * T^-1.
inline Mat2 posit_table_matrix_fin(const Calibration& c, double eps = kDefaultSingularEps) {
    return posit_table_matrix() * inverse2(transformation_matrix(c), eps);
}

/// Equation of motion rewritten on image-frame derivatives:
/// (M T^-1) u'' + (C T^-1) u' - (tau - fe).
inline Vec2 image_dynamics_residual(const MassParams& m, const Calibration& c, Vec2 img_accel, Vec2 img_vel,
                                    const Wrench& w, double eps = kDefaultSingularEps) {
    return inertia_matrix(m, c, eps) * img_accel + posit_table_matrix_fin(c, eps) * img_vel - w.net();
}

}  // namespace cellinj
