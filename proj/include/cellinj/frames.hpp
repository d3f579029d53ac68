#pragma once

#include <cmath>
#include <string>

#include "cellinj/errors.hpp"
#include "cellinj/linalg2.hpp"

namespace cellinj {

struct StageFrame {};
struct CameraFrame {};
struct ImageFrame {};

/// A 2D point tagged with the frame it is expressed in. Points from different
/// frames do not convert into each other implicitly.
template <typename Frame>
struct FramePoint {
    Vec2 coords;

    constexpr FramePoint() = default;
    constexpr explicit FramePoint(Vec2 v) : coords(v) {}
    constexpr FramePoint(double a, double b) : coords{a, b} {}

    constexpr double first() const { return coords.e1; }
    constexpr double second() const { return coords.e2; }

    friend constexpr bool operator==(const FramePoint&, const FramePoint&) = default;
};

/// Stage frame o-xyz: (x, y) in stage-length units.
using StagePoint = FramePoint<StageFrame>;
/// Camera frame o_c: (xc, yc) in stage-length units.
using CameraPoint = FramePoint<CameraFrame>;
/// Image frame o_i-uv: (u, v) in pixels.
using ImagePoint = FramePoint<ImageFrame>;

namespace detail {
inline void require_positive(double value, const char* name) {
    if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
    if (!(value > 0.0)) throw DomainError(std::string(name) + " must be positive");
}
}  // namespace detail

/// Stage/camera/image calibration.
///
/// alpha is the stage-to-camera rotation in radians, (dx, dy) the displacement of
/// the camera origin in stage units, (fx, fy) the display resolution in pixels per
/// stage unit. The constructor enforces dx, dy, fx, fy > 0 and finiteness; no
/// operation taking a Calibration re-validates.
class Calibration {
public:
    Calibration(double alpha, double dx, double dy, double fx, double fy)
        : alpha_(alpha), dx_(dx), dy_(dy), fx_(fx), fy_(fy) {
        if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
        detail::require_positive(dx, "dx");
        detail::require_positive(dy, "dy");
        detail::require_positive(fx, "fx");
        detail::require_positive(fy, "fy");
    }

    /// Builds a calibration without validation. Only meant for exercising guards
    /// downstream of the constructor (e.g. the singular-matrix path).
    static Calibration unchecked(double alpha, double dx, double dy, double fx, double fy) {
        return Calibration(alpha, dx, dy, fx, fy, Unchecked{});
    }

    double alpha() const { return alpha_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double fx() const { return fx_; }
    double fy() const { return fy_; }

    friend bool operator==(const Calibration&, const Calibration&) = default;

private:
    struct Unchecked {};
    Calibration(double alpha, double dx, double dy, double fx, double fy, Unchecked)
        : alpha_(alpha), dx_(dx), dy_(dy), fx_(fx), fy_(fy) {}

    double alpha_;
    double dx_;
    double dy_;
    double fx_;
    double fy_;
};

/// [[cos a, sin a], [-sin a, cos a]]
inline Mat2 rotation_matrix(double alpha) {
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return {c, s, -s, c};
}

inline Vec2 displacement_vector(double dx, double dy) {
    detail::require_positive(dx, "dx");
    detail::require_positive(dy, "dy");
    return {dx, dy};
}

inline Mat2 display_resolution_matrix(double fx, double fy) {
    detail::require_positive(fx, "fx");
    detail::require_positive(fy, "fy");
    return Mat2::diagonal(fx, fy);
}

/// Linear part of the stage-to-image map, diag(fx, fy) * R(alpha).
inline Mat2 transformation_matrix(const Calibration& c) {
    const double cs = std::cos(c.alpha());
    const double sn = std::sin(c.alpha());
    return {c.fx() * cs, c.fx() * sn, -c.fy() * sn, c.fy() * cs};
}

/// Image-frame offset of the stage origin, (fx*dx, fy*dy).
inline Vec2 image_offset(const Calibration& c) { return {c.fx() * c.dx(), c.fy() * c.dy()}; }

inline CameraPoint stage_to_camera(StagePoint p, const Calibration& c) {
    return CameraPoint(rotation_matrix(c.alpha()) * p.coords + Vec2{c.dx(), c.dy()});
}

inline ImagePoint camera_to_image(CameraPoint p, const Calibration& c) {
    return ImagePoint(c.fx() * p.first(), c.fy() * p.second());
}

/// One-step stage-to-image map T(c) * p + (fx*dx, fy*dy).
inline ImagePoint stage_to_image(StagePoint p, const Calibration& c) {
    return ImagePoint(transformation_matrix(c) * p.coords + image_offset(c));
}

/// Inverse of stage_to_image. Throws SingularError if |det T(c)| < eps, which a
/// validated Calibration cannot produce (det T = fx*fy > 0).
inline StagePoint image_to_stage(ImagePoint p, const Calibration& c, double eps = kDefaultSingularEps) {
    return StagePoint(inverse2(transformation_matrix(c), eps) * (p.coords - image_offset(c)));
}

}  // namespace cellinj
