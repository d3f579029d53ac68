#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cellinj/dynamics.hpp"
#include "cellinj/errors.hpp"
#include "cellinj/format.hpp"
#include "cellinj/frames.hpp"
#include "cellinj/linalg2.hpp"
#include "cellinj/rng.hpp"

namespace cellinj::propcheck {

/// Ranges random inputs are drawn from. Angles are drawn uniformly; resolutions
/// and masses log-uniformly.
struct SampleDomain {
    double alpha_min = -std::numbers::pi;
    double alpha_max = std::numbers::pi;
    /// Displacements are drawn from (displacement_min, displacement_max].
    double displacement_min = 0.0;
    double displacement_max = 10.0;
    double resolution_min = 0.1;
    double resolution_max = 100.0;
    double mass_min = 1e-3;
    double mass_max = 10.0;
    /// Positions and velocities.
    double state_min = -100.0;
    double state_max = 100.0;
    double wrench_min = -10.0;
    double wrench_max = 10.0;
    /// Analytic solutions are probed on [0, time_max].
    double time_max = 10.0;
    /// Lower mass bound and velocity magnitude bound used by the properties whose
    /// tolerance assumes the motion time scale is resolved (finite differences at
    /// h = 1e-4 and RK4 at dt = 1e-3). Both are clamped to the ranges above.
    double resolved_mass_min = 0.1;
    double resolved_velocity_max = 10.0;

    /// Throws DomainError if a range is empty or admits inputs violating the
    /// positivity constraints of the sampled types.
    void validate() const {
        auto ordered = [](double lo, double hi, const char* what) {
            if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi))
                throw DomainError(std::string("sample domain: bad range for ") + what);
        };
        ordered(alpha_min, alpha_max, "alpha");
        ordered(displacement_min, displacement_max, "displacement");
        ordered(resolution_min, resolution_max, "resolution");
        ordered(mass_min, mass_max, "mass");
        ordered(state_min, state_max, "state");
        ordered(wrench_min, wrench_max, "wrench");
        if (displacement_min < 0.0 || !(displacement_max > 0.0))
            throw DomainError("sample domain: displacements must be positive");
        if (!(resolution_min > 0.0)) throw DomainError("sample domain: resolutions must be positive");
        if (mass_min < kMinMass) throw DomainError("sample domain: masses must be at least 1e-12");
        if (!(time_max > 0.0) || !std::isfinite(time_max)) throw DomainError("sample domain: time_max must be positive");
        if (!(resolved_velocity_max >= 0.0)) throw DomainError("sample domain: resolved_velocity_max must be >= 0");
    }
};

/// Implementations under test. Defaults are the library functions; tests swap in
/// corrupted versions to confirm the harness notices.
struct Subjects {
    std::function<CameraPoint(StagePoint, const Calibration&)> stage_to_camera =
        [](StagePoint p, const Calibration& c) { return cellinj::stage_to_camera(p, c); };
    std::function<ImagePoint(CameraPoint, const Calibration&)> camera_to_image =
        [](CameraPoint p, const Calibration& c) { return cellinj::camera_to_image(p, c); };
    std::function<ImagePoint(StagePoint, const Calibration&)> stage_to_image =
        [](StagePoint p, const Calibration& c) { return cellinj::stage_to_image(p, c); };
    std::function<StagePoint(ImagePoint, const Calibration&)> image_to_stage =
        [](ImagePoint p, const Calibration& c) { return cellinj::image_to_stage(p, c); };
    std::function<Mat2(double)> rotation_matrix = [](double a) { return cellinj::rotation_matrix(a); };
    std::function<Mat2(const Calibration&)> transformation_matrix =
        [](const Calibration& c) { return cellinj::transformation_matrix(c); };
    std::function<Mat2(const Mat2&)> inverse = [](const Mat2& m) { return cellinj::inverse2(m); };
    std::function<StageState(const MassParams&, const StageState&, double)> homogeneous_solution =
        [](const MassParams& m, const StageState& s, double t) {
            return cellinj::analytic_homogeneous_solution(m, s, t);
        };
    std::function<Vec2(const MassParams&, const StageState&, double)> homogeneous_acceleration =
        [](const MassParams& m, const StageState& s, double t) {
            return cellinj::analytic_homogeneous_acceleration(m, s, t);
        };
    std::function<StageState(const MassParams&, const StageState&, const Wrench&, double)> constant_input_solution =
        [](const MassParams& m, const StageState& s, const Wrench& w, double t) {
            return cellinj::analytic_constant_input_solution(m, s, w, t);
        };
    std::function<Trajectory(const MassParams&, const StageState&, const Wrench&, double, double)> simulate =
        [](const MassParams& m, const StageState& s, const Wrench& w, double dt, double t_end) {
            return cellinj::simulate(m, s, w, dt, t_end);
        };
    std::function<Vec2(const MassParams&, Vec2, Vec2, const Wrench&)> dynamics_residual =
        [](const MassParams& m, Vec2 a, Vec2 v, const Wrench& w) { return cellinj::dynamics_residual(m, a, v, w); };
    std::function<Vec2(const MassParams&, const Calibration&, Vec2, Vec2, const Wrench&)> image_dynamics_residual =
        [](const MassParams& m, const Calibration& c, Vec2 a, Vec2 v, const Wrench& w) {
            return cellinj::image_dynamics_residual(m, c, a, v, w);
        };
};

struct CheckOptions {
    Subjects subjects;
    /// UNSTABLE: replaces the per-property tolerance. Reports produced with it set
    /// are not comparable with default reports.
    std::optional<double> unstable_tolerance_override;
};

/// The failing draw with the largest violation, enough to replay it.
struct Counterexample {
    std::size_t sample_index = 0;
    std::uint64_t stream_seed = 0;
    std::vector<std::pair<std::string, double>> inputs;
};

struct PropertyReport {
    std::string property_id;
    std::size_t samples = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::optional<Counterexample> counterexample;
    std::uint64_t seed = 0;
};

/// Central difference (f(at+h) - f(at-h)) / 2h minus the expected derivative, in
/// absolute value.
inline double finite_difference_check(const std::function<double(double)>& fn, double at, double h,
                                      double expected_derivative) {
    if (!(h > 0.0)) throw DomainError("finite_difference_check: h must be positive");
    const double central = (fn(at + h) - fn(at - h)) / (2.0 * h);
    return std::abs(central - expected_derivative);
}

/// One random draw. Every value taken from the stream is recorded under a name so
/// a failing draw can be printed as a counterexample.
class Draw {
public:
    Draw(SplitMix64& rng, std::vector<std::pair<std::string, double>>& record) : rng_(rng), record_(record) {}

    double uniform(const char* name, double lo, double hi) { return keep(name, rng_.uniform(lo, hi)); }
    double uniform_upper(const char* name, double lo, double hi) { return keep(name, rng_.uniform_upper(lo, hi)); }
    double log_uniform(const char* name, double lo, double hi) { return keep(name, rng_.log_uniform(lo, hi)); }

    Calibration calibration(const SampleDomain& d) {
        const double alpha = uniform("alpha", d.alpha_min, d.alpha_max);
        const double dx = uniform_upper("dx", d.displacement_min, d.displacement_max);
        const double dy = uniform_upper("dy", d.displacement_min, d.displacement_max);
        const double fx = log_uniform("fx", d.resolution_min, d.resolution_max);
        const double fy = log_uniform("fy", d.resolution_min, d.resolution_max);
        return Calibration(alpha, dx, dy, fx, fy);
    }

    MassParams masses(double lo, double hi) {
        const double mx = log_uniform("mx", lo, hi);
        const double my = log_uniform("my", lo, hi);
        const double mp = log_uniform("mp", lo, hi);
        return MassParams(mx, my, mp);
    }

    StagePoint stage_point(const SampleDomain& d) {
        const double x = uniform("x", d.state_min, d.state_max);
        const double y = uniform("y", d.state_min, d.state_max);
        return StagePoint(x, y);
    }

    Vec2 vec(const char* n1, const char* n2, double lo, double hi) {
        const double a = uniform(n1, lo, hi);
        const double b = uniform(n2, lo, hi);
        return {a, b};
    }

    StageState initial(const SampleDomain& d, double velocity_bound) {
        StageState s;
        s.x = uniform("x0", d.state_min, d.state_max);
        s.y = uniform("y0", d.state_min, d.state_max);
        const double vlo = std::max(d.state_min, -velocity_bound);
        const double vhi = std::min(d.state_max, velocity_bound);
        s.xdot = uniform("xd0", vlo, vhi);
        s.ydot = uniform("yd0", vlo, vhi);
        return s;
    }

    Wrench wrench(const SampleDomain& d) {
        Wrench w;
        w.taux = uniform("taux", d.wrench_min, d.wrench_max);
        w.tauy = uniform("tauy", d.wrench_min, d.wrench_max);
        w.fexd = uniform("fexd", d.wrench_min, d.wrench_max);
        w.feyd = uniform("feyd", d.wrench_min, d.wrench_max);
        return w;
    }

private:
    double keep(const char* name, double v) {
        record_.emplace_back(name, v);
        return v;
    }

    SplitMix64& rng_;
    std::vector<std::pair<std::string, double>>& record_;
};

/// Returns the violation of one draw; the report compares the worst one to the tolerance.
using PropertyFn = std::function<double(Draw&, const SampleDomain&, const Subjects&)>;

struct PropertySpec {
    std::string_view id;
    double tolerance;
    PropertyFn fn;
};

namespace detail {

inline double scaled(double diff, double scale) { return diff / std::max(1.0, scale); }

inline Mat2 random_matrix(Draw& d) {
    return {d.uniform("a11", -10, 10), d.uniform("a12", -10, 10), d.uniform("a21", -10, 10),
            d.uniform("a22", -10, 10)};
}

inline double fd_step() { return 1e-4; }
inline double integrator_step() { return 1e-3; }

inline std::vector<PropertySpec> build_registry() {
    std::vector<PropertySpec> r;

    r.push_back({"LINALG_INVERSE", 1e-12, [](Draw& d, const SampleDomain&, const Subjects& s) {
                     Mat2 m = random_matrix(d);
                     while (std::abs(determinant(m)) < kDefaultSingularEps) m = random_matrix(d);
                     const Mat2 err = m * s.inverse(m) - Mat2::identity();
                     const double bound = std::max(1.0, norm_inf(m) * norm_inf(m) / std::abs(determinant(m)));
                     return norm_inf(err) / bound;
                 }});

    r.push_back({"LINALG_DET_PRODUCT", 1e-12, [](Draw& d, const SampleDomain&, const Subjects&) {
                     const Mat2 a = random_matrix(d);
                     const Mat2 b = random_matrix(d);
                     const double diff = std::abs(determinant(a * b) - determinant(a) * determinant(b));
                     const double scale = norm_inf(a) * norm_inf(a) * norm_inf(b) * norm_inf(b);
                     return scaled(diff, scale);
                 }});

    r.push_back({"LINALG_MATVEC_LINEAR", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects&) {
                     const Mat2 m = random_matrix(d);
                     const Vec2 u = d.vec("u1", "u2", dom.state_min, dom.state_max);
                     const Vec2 v = d.vec("v1", "v2", dom.state_min, dom.state_max);
                     const double a = d.uniform("a", -10, 10);
                     const double b = d.uniform("b", -10, 10);
                     const Vec2 lhs = m * (a * u + b * v);
                     const Vec2 rhs = a * (m * u) + b * (m * v);
                     const double scale = norm_inf(m) * (std::abs(a) * norm_inf(u) + std::abs(b) * norm_inf(v));
                     return scaled(norm_inf(lhs - rhs), scale);
                 }});

    r.push_back({"FRAMES_ROTATION_INVERSE", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const double alpha = d.uniform("alpha", dom.alpha_min, dom.alpha_max);
                     return max_abs(s.rotation_matrix(alpha) * s.rotation_matrix(-alpha) - Mat2::identity());
                 }});

    r.push_back({"FRAMES_FACTORIZATION", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const Mat2 product = display_resolution_matrix(c.fx(), c.fy()) * s.rotation_matrix(c.alpha());
                     return scaled(max_abs(s.transformation_matrix(c) - product), std::max(c.fx(), c.fy()));
                 }});

    r.push_back({"FRAMES_DET_T", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const double expected = c.fx() * c.fy();
                     return std::abs(determinant(s.transformation_matrix(c)) - expected) / expected;
                 }});

    r.push_back({"FRAMES_INVERSE_T", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const Mat2 t = s.transformation_matrix(c);
                     return max_abs(t * s.inverse(t) - Mat2::identity());
                 }});

    r.push_back({"FRAMES_ROUND_TRIP", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const StagePoint p = d.stage_point(dom);
                     const StagePoint back = s.image_to_stage(s.stage_to_image(p, c), c);
                     const double scale = norm_inf(p.coords) + std::max(c.dx(), c.dy());
                     return scaled(norm_inf(back.coords - p.coords), scale);
                 }});

    r.push_back({"THM1_CAMERA_STAGE", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const StagePoint p = d.stage_point(dom);
                     const double x = p.first();
                     const double y = p.second();
                     const double ca = std::cos(c.alpha());
                     const double sa = std::sin(c.alpha());
                     const Vec2 expected{x * ca + y * sa + c.dx(), -x * sa + y * ca + c.dy()};
                     const Vec2 got = s.stage_to_camera(p, c).coords;
                     const double scale = std::abs(x) + std::abs(y) + std::max(c.dx(), c.dy());
                     return scaled(norm_inf(got - expected), scale);
                 }});

    r.push_back({"THM2_IMAGE_CAMERA", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const Vec2 cam = d.vec("xc", "yc", dom.state_min, dom.state_max);
                     const Vec2 expected{c.fx() * cam.e1, c.fy() * cam.e2};
                     const Vec2 got = s.camera_to_image(CameraPoint(cam), c).coords;
                     return scaled(norm_inf(got - expected), norm_inf(expected));
                 }});

    r.push_back({"THM3_IMAGE_STAGE", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const StagePoint p = d.stage_point(dom);
                     const Vec2 direct = s.stage_to_image(p, c).coords;
                     const Vec2 two_step = s.camera_to_image(s.stage_to_camera(p, c), c).coords;
                     const double scale = std::max(c.fx(), c.fy()) *
                                          (std::abs(p.first()) + std::abs(p.second()) + std::max(c.dx(), c.dy()));
                     return scaled(norm_inf(direct - two_step), scale);
                 }});

    r.push_back({"THM3_AFFINE_FORM", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const Calibration c = d.calibration(dom);
                     const StagePoint p = d.stage_point(dom);
                     const double ca = std::cos(c.alpha());
                     const double sa = std::sin(c.alpha());
                     const Mat2 t{c.fx() * ca, c.fx() * sa, -c.fy() * sa, c.fy() * ca};
                     const Vec2 expected = t * p.coords + Vec2{c.fx() * c.dx(), c.fy() * c.dy()};
                     const Vec2 got = s.stage_to_image(p, c).coords;
                     const double scale = std::max(c.fx(), c.fy()) *
                                          (std::abs(p.first()) + std::abs(p.second()) + std::max(c.dx(), c.dy()));
                     return scaled(norm_inf(got - expected), scale);
                 }});

    r.push_back({"THM4_HOMOG_SOLUTION", 1e-9, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const MassParams m = d.masses(dom.mass_min, dom.mass_max);
                     const StageState init = d.initial(dom, std::max(std::abs(dom.state_min), std::abs(dom.state_max)));
                     const double t = d.uniform("t", 0.0, dom.time_max);

                     // Initial conditions.
                     const StageState at0 = s.homogeneous_solution(m, init, 0.0);
                     const double init_err = norm_inf(at0.position() - init.position()) +
                                             norm_inf(at0.velocity() - init.velocity());
                     // Closed form, evaluated in its canonical grouping.
                     const double mx = m.mx() + m.my() + m.mp();
                     const double my = m.my() + m.mp();
                     const Vec2 expected{(init.x + init.xdot * mx) - init.xdot * mx * std::exp(-t / mx),
                                         (init.y + init.ydot * my) - init.ydot * my * std::exp(-t / my)};
                     const StageState st = s.homogeneous_solution(m, init, t);
                     const double scale = std::max(std::abs(init.x) + std::abs(init.xdot) * mx,
                                                   std::abs(init.y) + std::abs(init.ydot) * my);
                     const double form_err = scaled(norm_inf(st.position() - expected), scale);
                     // The motion satisfies the zero-wrench equation of motion.
                     const Vec2 accel = s.homogeneous_acceleration(m, init, t);
                     const double ode_err = norm_inf(s.dynamics_residual(m, accel, st.velocity(), Wrench{}));
                     return std::max({init_err, form_err, ode_err});
                 }});

    r.push_back({"THM5_IMAGE_DYNAMICS", 1e-9, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const MassParams m = d.masses(dom.mass_min, dom.mass_max);
                     const Calibration c = d.calibration(dom);
                     const Wrench w = d.wrench(dom);
                     const Vec2 vel = d.vec("xdot", "ydot", dom.state_min, dom.state_max);
                     // Acceleration that zeroes the stage residual.
                     const Vec2 rhs = w.net() - vel;
                     const Vec2 accel{rhs.e1 / m.x_axis(), rhs.e2 / m.y_axis()};
                     // u = T p + b, so u' = T p' and u'' = T p''.
                     const Mat2 t = s.transformation_matrix(c);
                     const Vec2 res = s.image_dynamics_residual(m, c, t * accel, t * vel, w);
                     return norm_inf(res) / (1.0 + norm_inf(w));
                 }});

    r.push_back({"THM5_IDENTITY_REDUCTION", 1e-15, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const MassParams m = d.masses(dom.mass_min, dom.mass_max);
                     const double dx = d.uniform_upper("dx", dom.displacement_min, dom.displacement_max);
                     const double dy = d.uniform_upper("dy", dom.displacement_min, dom.displacement_max);
                     const Calibration c(0.0, dx, dy, 1.0, 1.0);
                     const Wrench w = d.wrench(dom);
                     const Vec2 accel = d.vec("xddot", "yddot", dom.state_min, dom.state_max);
                     const Vec2 vel = d.vec("xdot", "ydot", dom.state_min, dom.state_max);
                     const Vec2 stage = s.dynamics_residual(m, accel, vel, w);
                     const Vec2 image = s.image_dynamics_residual(m, c, accel, vel, w);
                     return norm_inf(stage - image);
                 }});

    r.push_back({"DYN_RESIDUAL_LINEARITY", 1e-12, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const MassParams m = d.masses(dom.mass_min, dom.mass_max);
                     const Vec2 a1 = d.vec("a1x", "a1y", dom.state_min, dom.state_max);
                     const Vec2 v1 = d.vec("v1x", "v1y", dom.state_min, dom.state_max);
                     const Vec2 a2 = d.vec("a2x", "a2y", dom.state_min, dom.state_max);
                     const Vec2 v2 = d.vec("v2x", "v2y", dom.state_min, dom.state_max);
                     const double ka = d.uniform("ka", -10, 10);
                     const double kb = d.uniform("kb", -10, 10);
                     const Wrench w = d.wrench(dom);
                     const Wrench zero{};
                     const Vec2 lhs = s.dynamics_residual(m, ka * a1 + kb * a2, ka * v1 + kb * v2, zero);
                     const Vec2 rhs = ka * s.dynamics_residual(m, a1, v1, zero) + kb * s.dynamics_residual(m, a2, v2, zero);
                     const double scale = (std::abs(ka) + std::abs(kb)) * m.x_axis() * 2.0 * dom.state_max;
                     const double linear_err = scaled(norm_inf(lhs - rhs), scale);
                     const Vec2 affine = s.dynamics_residual(m, a1, v1, w) - (s.dynamics_residual(m, a1, v1, zero) - w.net());
                     const double affine_err = scaled(norm_inf(affine), m.x_axis() * 2.0 * dom.state_max);
                     return std::max(linear_err, affine_err);
                 }});

    r.push_back({"DYN_CONST_INPUT_REDUCTION", 1e-15, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const MassParams m = d.masses(dom.mass_min, dom.mass_max);
                     const StageState init = d.initial(dom, std::max(std::abs(dom.state_min), std::abs(dom.state_max)));
                     const double t = d.uniform("t", 0.0, dom.time_max);
                     const StageState a = s.constant_input_solution(m, init, Wrench{}, t);
                     const StageState b = s.homogeneous_solution(m, init, t);
                     const double pos_scale = std::max(std::abs(init.x) + std::abs(init.xdot) * m.x_axis(),
                                                       std::abs(init.y) + std::abs(init.ydot) * m.y_axis());
                     const double vel_scale = norm_inf(init.velocity());
                     return std::max(scaled(norm_inf(a.position() - b.position()), pos_scale),
                                     scaled(norm_inf(a.velocity() - b.velocity()), vel_scale));
                 }});

    r.push_back({"DYN_FD_VELOCITY", 5e-7, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const double lo = std::clamp(dom.resolved_mass_min, dom.mass_min, dom.mass_max);
                     const MassParams m = d.masses(lo, dom.mass_max);
                     const StageState init = d.initial(dom, dom.resolved_velocity_max);
                     const double h = fd_step();
                     const double t = d.uniform("t", h, std::max(h, dom.time_max));
                     const StageState st = s.homogeneous_solution(m, init, t);
                     const double ex = finite_difference_check(
                         [&](double tt) { return s.homogeneous_solution(m, init, tt).x; }, t, h, st.xdot);
                     const double ey = finite_difference_check(
                         [&](double tt) { return s.homogeneous_solution(m, init, tt).y; }, t, h, st.ydot);
                     return std::max(ex, ey);
                 }});

    r.push_back({"DYN_INTEGRATOR", 1e-6, [](Draw& d, const SampleDomain& dom, const Subjects& s) {
                     const double lo = std::clamp(dom.resolved_mass_min, dom.mass_min, dom.mass_max);
                     const MassParams m = d.masses(lo, dom.mass_max);
                     const StageState init = d.initial(dom, dom.resolved_velocity_max);
                     const Wrench w = d.wrench(dom);
                     const Trajectory traj = s.simulate(m, init, w, integrator_step(), dom.time_max);
                     double worst = 0.0;
                     for (const StageState& st : traj) {
                         const StageState exact = s.constant_input_solution(m, init, w, st.t);
                         const double err = std::max(norm_inf(st.position() - exact.position()),
                                                     norm_inf(st.velocity() - exact.velocity()));
                         const double scale = std::max(norm_inf(exact.position()), norm_inf(exact.velocity()));
                         worst = std::max(worst, scaled(err, scale));
                     }
                     return worst;
                 }});

    return r;
}

}  // namespace detail

/// Every registered property in report order.
inline const std::vector<PropertySpec>& registry() {
    static const std::vector<PropertySpec> specs = detail::build_registry();
    return specs;
}

inline std::vector<std::string> property_ids() {
    std::vector<std::string> ids;
    for (const auto& p : registry()) ids.emplace_back(p.id);
    return ids;
}

/// Evaluates property `id` on `samples` draws from `domain`. The result depends
/// only on (id, domain, samples, seed, subjects); each property draws from its own
/// stream so checks may run in any order or concurrently.
inline PropertyReport check_theorem(std::string_view id, const SampleDomain& domain, std::size_t samples,
                                    std::uint64_t seed, const CheckOptions& options = {}) {
    const auto& specs = registry();
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const PropertySpec& p) { return p.id == id; });
    if (it == specs.end()) throw UnknownProperty(std::string(id));
    if (samples < 1) throw DomainError("check_theorem: samples must be at least 1");
    domain.validate();

    PropertyReport report;
    report.property_id = std::string(id);
    report.samples = samples;
    report.seed = seed;
    report.tolerance = options.unstable_tolerance_override.value_or(it->tolerance);

    const std::uint64_t stream = stream_seed(seed, id);
    SplitMix64 rng(stream);
    std::vector<std::pair<std::string, double>> record;
    std::optional<Counterexample> worst;
    double max_violation = 0.0;

    for (std::size_t i = 0; i < samples; ++i) {
        record.clear();
        Draw draw(rng, record);
        double v;
        try {
            v = it->fn(draw, domain, options.subjects);
        } catch (const Error&) {
            v = std::numeric_limits<double>::infinity();
        }
        const bool worse = std::isnan(v) ? !std::isnan(max_violation) : (!std::isnan(max_violation) && v > max_violation);
        if (worse || i == 0) {
            max_violation = v;
            worst = Counterexample{i, stream, record};
        }
    }

    report.max_violation = max_violation;
    report.pass = max_violation <= report.tolerance;
    if (!report.pass) report.counterexample = std::move(worst);
    return report;
}

/// Runs every registered property. Reports come back in registry order whether
/// or not the checks run concurrently.
inline std::vector<PropertyReport> run_all(const SampleDomain& domain, std::size_t samples, std::uint64_t seed,
                                           const CheckOptions& options = {}, bool concurrent = true) {
    std::vector<PropertyReport> out;
    const auto& specs = registry();
    out.reserve(specs.size());
    if (!concurrent) {
        for (const auto& p : specs) out.push_back(check_theorem(p.id, domain, samples, seed, options));
        return out;
    }
    std::vector<std::future<PropertyReport>> pending;
    pending.reserve(specs.size());
    for (const auto& p : specs) {
        pending.push_back(std::async(std::launch::async, [&, id = p.id] {
            return check_theorem(id, domain, samples, seed, options);
        }));
    }
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

inline bool all_pass(const std::vector<PropertyReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const PropertyReport& r) { return r.pass; });
}

/// Writes `id status samples max_violation tolerance seed`, followed on failure by
/// one indented line:
/// `  counterexample sample=<i> stream=<seed> name=value ...`.
/// Reals use the shortest round-trip form.
inline void write_report(std::ostream& os, const PropertyReport& r) {
    os << r.property_id << ' ' << (r.pass ? "pass" : "fail") << ' ' << r.samples << ' '
       << format_shortest(r.max_violation) << ' ' << format_shortest(r.tolerance) << ' ' << r.seed << '\n';
    if (r.counterexample) {
        os << "  counterexample sample=" << r.counterexample->sample_index
           << " stream=" << r.counterexample->stream_seed;
        for (const auto& [name, value] : r.counterexample->inputs) os << ' ' << name << '=' << format_shortest(value);
        os << '\n';
    }
}

}  // namespace cellinj::propcheck
