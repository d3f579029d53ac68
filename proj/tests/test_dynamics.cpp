#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cellinj/dynamics.hpp"
#include "cellinj/rng.hpp"

using namespace cellinj;

namespace {

// Scalar RK4 for M q'' + q' = c, kept separate from simulate().
struct AxisState {
    double q;
    double v;
};

AxisState reference_rk4(double mass, double q0, double v0, double c, double t_end, double h) {
    AxisState s{q0, v0};
    const auto steps = static_cast<long>(std::llround(t_end / h));
    auto acc = [&](double v) { return (c - v) / mass; };
    for (long i = 0; i < steps; ++i) {
        const double k1q = s.v, k1v = acc(s.v);
        const double k2q = s.v + 0.5 * h * k1v, k2v = acc(k2q);
        const double k3q = s.v + 0.5 * h * k2v, k3v = acc(k3q);
        const double k4q = s.v + h * k3v, k4v = acc(k4q);
        s.q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
        s.v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return s;
}

double max_error_vs_analytic(const MassParams& m, const StageState& init, const Wrench& w, double dt, double t_end) {
    double worst = 0.0;
    for (const StageState& s : simulate(m, init, w, dt, t_end)) {
        const StageState e = analytic_constant_input_solution(m, init, w, s.t);
        worst = std::max({worst, std::abs(s.x - e.x), std::abs(s.y - e.y), std::abs(s.xdot - e.xdot),
                          std::abs(s.ydot - e.ydot)});
    }
    return worst;
}

const MassParams kUnitSum(0.5, 0.3, 0.2);

}  // namespace

TEST(MassParams, RejectsNonPositiveAndTinyMasses) {
    EXPECT_THROW(MassParams(0, 1, 1), DomainError);
    EXPECT_THROW(MassParams(1, -1, 1), DomainError);
    EXPECT_THROW(MassParams(1, 1, 1e-13), DomainError);
    EXPECT_THROW(MassParams(1, NAN, 1), DomainError);
    EXPECT_NO_THROW(MassParams(1e-12, 1e-12, 1e-12));
}

TEST(MassMatrix, Examples) {
    EXPECT_EQ(mass_matrix(MassParams(1, 1, 1)), (Mat2{3, 0, 0, 2}));
    EXPECT_EQ(mass_matrix(kUnitSum), (Mat2{1.0, 0.0, 0.0, 0.5}));
    const Mat2 m = mass_matrix(MassParams(0.01, 2, 7));
    EXPECT_GT(m.a11, 0);
    EXPECT_GT(m.a22, 0);
    EXPECT_EQ(m.a12, 0);
    EXPECT_EQ(m.a21, 0);
}

TEST(PositTableMatrix, IsIdentity) {
    EXPECT_EQ(posit_table_matrix(), Mat2::identity());
    EXPECT_EQ((posit_table_matrix() * Vec2{-2.5, 7}), (Vec2{-2.5, 7}));
    EXPECT_EQ(determinant(posit_table_matrix()), 1.0);
}

TEST(DynamicsResidual, Examples) {
    EXPECT_EQ(dynamics_residual(kUnitSum, {0, 0}, {0, 0}, Wrench{}), (Vec2{0, 0}));
    EXPECT_EQ(dynamics_residual(kUnitSum, {-1, 0}, {1, 0}, Wrench{}), (Vec2{0, 0}));
    EXPECT_EQ(dynamics_residual(MassParams(1, 1, 1), {0, 0}, {2, 0}, Wrench{2, 0, 0, 0}), (Vec2{0, 0}));
    // desired force enters with opposite sign to torque
    EXPECT_EQ(dynamics_residual(MassParams(1, 1, 1), {0, 0}, {0, 0}, Wrench{0, 0, 1.5, -2}), (Vec2{1.5, -2}));
}

TEST(HomogeneousSolution, InitialConditions) {
    const StageState init{0, 1.5, -2, 3, -4};
    const StageState s = analytic_homogeneous_solution(MassParams(0.2, 0.7, 1.1), init, 0.0);
    EXPECT_EQ(s, init);
}

TEST(HomogeneousSolution, UnitMassExample) {
    // 1 - e^-1 = 0.63212055882855767840... (mpmath)
    const StageState s = analytic_homogeneous_solution(kUnitSum, StageState{0, 0, 0, 1, 0}, 1.0);
    EXPECT_NEAR(s.x, 0.6321205588285577, 1e-7);
    EXPECT_NEAR(s.xdot, 0.36787944117144233, 1e-7);
}

TEST(HomogeneousSolution, ApproachesAsymptote) {
    const MassParams m(0.4, 1.2, 0.9);
    const StageState init{0, 2, -1, 0.75, -3};
    const StageState s = analytic_homogeneous_solution(m, init, 50 * m.x_axis());
    EXPECT_NEAR(s.x, init.x + init.xdot * m.x_axis(), 1e-12);
    EXPECT_NEAR(s.y, init.y + init.ydot * m.y_axis(), 1e-12);
}

TEST(HomogeneousSolution, DomainErrors) {
    EXPECT_THROW(analytic_homogeneous_solution(kUnitSum, StageState{}, -1e-9), DomainError);
    EXPECT_THROW(analytic_homogeneous_solution(kUnitSum, StageState{0.5, 0, 0, 0, 0}, 1.0), DomainError);
    EXPECT_THROW(analytic_constant_input_solution(kUnitSum, StageState{}, Wrench{}, -1), DomainError);
}

TEST(HomogeneousSolution, ResidualVanishesOnGrid) {
    SplitMix64 rng(21);
    for (int k = 0; k < 50; ++k) {
        const MassParams m(rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10));
        const StageState init{0, rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100),
                              rng.uniform(-100, 100)};
        for (int i = 0; i <= 1000; ++i) {
            const double t = 0.01 * i;
            const StageState s = analytic_homogeneous_solution(m, init, t);
            const Vec2 a = analytic_homogeneous_acceleration(m, init, t);
            ASSERT_LE(norm_inf(dynamics_residual(m, a, s.velocity(), Wrench{})), 1e-9);
        }
    }
}

TEST(HomogeneousSolution, VelocityMatchesCentralDifference) {
    const StageState init{0, 0, 0, 1, 0};
    auto x = [&](double t) { return analytic_homogeneous_solution(kUnitSum, init, t).x; };
    const double h = 1e-4;
    const double fd = (x(1 + h) - x(1 - h)) / (2 * h);
    // Truncation error at this point is 6.1e-10 (mpmath).
    EXPECT_LE(std::abs(fd - analytic_homogeneous_solution(kUnitSum, init, 1).xdot), 5e-7);
}

TEST(ConstantInputSolution, ZeroWrenchIsBitwiseHomogeneous) {
    SplitMix64 rng(22);
    for (int i = 0; i < 2000; ++i) {
        const MassParams m(rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10));
        const StageState init{0, rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100),
                              rng.uniform(-100, 100)};
        const double t = rng.uniform(0, 10);
        const StageState a = analytic_constant_input_solution(m, init, Wrench{}, t);
        const StageState b = analytic_homogeneous_solution(m, init, t);
        ASSERT_EQ(a.x, b.x);
        ASSERT_EQ(a.y, b.y);
        ASSERT_EQ(a.xdot, b.xdot);
        ASSERT_EQ(a.ydot, b.ydot);
    }
}

TEST(ConstantInputSolution, UnitInputFromRest) {
    // x(t) = t - 1 + e^-t, x(1) = e^-1 = 0.36787944117144232159... (mpmath)
    const StageState s = analytic_constant_input_solution(kUnitSum, StageState{}, Wrench{1, 0, 0, 0}, 1.0);
    EXPECT_NEAR(s.x, 0.36787944117144233, 1e-7);
    const AxisState ref = reference_rk4(1.0, 0, 0, 1, 1.0, 1e-5);
    EXPECT_NEAR(s.x, ref.q, 1e-12);
    EXPECT_NEAR(s.xdot, ref.v, 1e-12);
}

TEST(ConstantInputSolution, MatchesReferenceIntegrator) {
    const MassParams m(0.3, 0.9, 0.4);
    const StageState init{0, 1, -2, 0.5, 3};
    const Wrench w{2, -1, 0.5, 0.25};
    const StageState s = analytic_constant_input_solution(m, init, w, 2.0);
    const AxisState rx = reference_rk4(m.x_axis(), init.x, init.xdot, w.taux - w.fexd, 2.0, 1e-5);
    const AxisState ry = reference_rk4(m.y_axis(), init.y, init.ydot, w.tauy - w.feyd, 2.0, 1e-5);
    EXPECT_NEAR(s.x, rx.q, 1e-11);
    EXPECT_NEAR(s.xdot, rx.v, 1e-11);
    EXPECT_NEAR(s.y, ry.q, 1e-11);
    EXPECT_NEAR(s.ydot, ry.v, 1e-11);
}

TEST(ConstantInputSolution, VelocityApproachesInput) {
    const Wrench w{2, -1, 0.5, 0.25};
    const StageState s = analytic_constant_input_solution(kUnitSum, StageState{0, 0, 0, 5, -5}, w, 60);
    EXPECT_NEAR(s.xdot, 1.5, 1e-12);
    EXPECT_NEAR(s.ydot, -1.25, 1e-12);
}

TEST(Simulate, RestStaysAtRest) {
    const StageState init{0, 1.25, -3, 0, 0};
    const Trajectory traj = simulate(kUnitSum, init, Wrench{}, 1e-2, 1.0);
    ASSERT_EQ(traj.size(), 101u);
    for (const StageState& s : traj) {
        EXPECT_EQ(s.x, init.x);
        EXPECT_EQ(s.y, init.y);
        EXPECT_EQ(s.xdot, 0.0);
        EXPECT_EQ(s.ydot, 0.0);
    }
}

TEST(Simulate, UniformSteps) {
    const Trajectory traj = simulate(kUnitSum, StageState{}, Wrench{}, 0.1, 0.3);
    ASSERT_EQ(traj.size(), 4u);
    const Trajectory longer = simulate(kUnitSum, StageState{}, Wrench{}, 1e-3, 10.0);
    ASSERT_EQ(longer.size(), 10001u);
    for (std::size_t i = 1; i < longer.size(); ++i) {
        ASSERT_GT(longer[i].t, longer[i - 1].t);
        ASSERT_NEAR(longer[i].t - longer[i - 1].t, 1e-3, 1e-12);
    }
    EXPECT_LE(std::abs(longer.back().t - 10.0), 1e-3);
}

TEST(Simulate, MatchesHomogeneousSolution) {
    const StageState init{0, 0, 0, 1, 0};
    EXPECT_LE(max_error_vs_analytic(kUnitSum, init, Wrench{}, 1e-3, 10), 1e-6);
}

TEST(Simulate, MatchesConstantInputSolution) {
    const StageState init{0, 1, -1, -2, 0.5};
    EXPECT_LE(max_error_vs_analytic(MassParams(0.2, 0.5, 0.3), init, Wrench{3, -2, 0.5, 1}, 1e-3, 10), 1e-6);
}

TEST(Simulate, FourthOrderConvergence) {
    const StageState init{0, 0, 0, 1, -0.5};
    const double e4 = max_error_vs_analytic(kUnitSum, init, Wrench{}, 4e-3, 10);
    const double e2 = max_error_vs_analytic(kUnitSum, init, Wrench{}, 2e-3, 10);
    const double e1 = max_error_vs_analytic(kUnitSum, init, Wrench{}, 1e-3, 10);
    EXPECT_GE(e4 / e2, 8.0) << e4 << ' ' << e2;
    EXPECT_GE(e2 / e1, 8.0) << e2 << ' ' << e1;
}

TEST(Simulate, DomainErrors) {
    EXPECT_THROW(simulate(kUnitSum, StageState{}, Wrench{}, 0.0, 1.0), DomainError);
    EXPECT_THROW(simulate(kUnitSum, StageState{}, Wrench{}, -1e-3, 1.0), DomainError);
    EXPECT_THROW(simulate(kUnitSum, StageState{2, 0, 0, 0, 0}, Wrench{}, 1e-3, 1.0), DomainError);
    EXPECT_THROW(simulate(kUnitSum, StageState{}, Wrench{}, 1e-9, 1.0), DomainError);
}

TEST(Simulate, OverflowIsReported) {
    const Wrench huge{1e300, 0, -1e300, 0};
    EXPECT_THROW(simulate(MassParams(1e-12, 1e-12, 1e-12), StageState{}, huge, 1e-3, 0.01), OverflowError);
}

TEST(ImageSpace, InertiaMatrixExamples) {
    const MassParams m(1, 1, 1);
    EXPECT_EQ(inertia_matrix(m, Calibration(0, 1, 1, 1, 1)), mass_matrix(m));
    EXPECT_EQ(inertia_matrix(m, Calibration(0, 1, 1, 2, 1)), (Mat2{1.5, 0, 0, 2}));
    const Calibration c(0.4, 1, 1, 3, 0.7);
    EXPECT_NEAR(determinant(inertia_matrix(m, c)), determinant(mass_matrix(m)) / (3 * 0.7), 1e-12 * 6 / 2.1);
}

TEST(ImageSpace, PositTableMatrixFinExamples) {
    EXPECT_EQ(posit_table_matrix_fin(Calibration(0, 1, 1, 1, 1)), Mat2::identity());
    EXPECT_EQ(posit_table_matrix_fin(Calibration(0, 1, 1, 2, 4)), (Mat2{0.5, 0, 0, 0.25}));
    const Calibration c(-1.1, 1, 1, 5, 0.3);
    EXPECT_EQ(posit_table_matrix_fin(c), inverse2(transformation_matrix(c)));
}

TEST(ImageSpace, SingularCalibrationPropagates) {
    const Calibration broken = Calibration::unchecked(0, 1, 1, 1, 0);
    EXPECT_THROW(inertia_matrix(kUnitSum, broken), SingularError);
    EXPECT_THROW(posit_table_matrix_fin(broken), SingularError);
    EXPECT_THROW(image_dynamics_residual(kUnitSum, broken, {}, {}, Wrench{}), SingularError);
}

TEST(ImageSpace, ResidualExamples) {
    const Calibration c(0.3, 1, 2, 4, 0.5);
    EXPECT_EQ(image_dynamics_residual(kUnitSum, c, {0, 0}, {0, 0}, Wrench{}), (Vec2{0, 0}));
    const Calibration unit(0, 1, 1, 1, 1);
    const Vec2 a{1.5, -2}, v{0.25, 7};
    const Wrench w{1, 2, 3, 4};
    EXPECT_EQ(image_dynamics_residual(kUnitSum, unit, a, v, w), dynamics_residual(kUnitSum, a, v, w));
}

TEST(ImageSpace, TransformedStageSolutionHasZeroResidual) {
    SplitMix64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        const MassParams m(rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10));
        const Calibration c(rng.uniform(-3.14, 3.14), rng.uniform_upper(0, 10), rng.uniform_upper(0, 10),
                            rng.log_uniform(0.1, 100), rng.log_uniform(0.1, 100));
        const Wrench w{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const Vec2 vel{rng.uniform(-100, 100), rng.uniform(-100, 100)};
        const Vec2 accel{(w.net().e1 - vel.e1) / m.x_axis(), (w.net().e2 - vel.e2) / m.y_axis()};
        const Mat2 t = transformation_matrix(c);
        const Vec2 r = image_dynamics_residual(m, c, t * accel, t * vel, w);
        ASSERT_LE(norm_inf(r), 1e-9 * (1 + norm_inf(w)));
    }
}

TEST(DynamicsResidual, LinearAndAffine) {
    SplitMix64 rng(24);
    for (int i = 0; i < 1000; ++i) {
        const MassParams m(rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10), rng.log_uniform(1e-3, 10));
        const Vec2 a1{rng.uniform(-100, 100), rng.uniform(-100, 100)}, v1{rng.uniform(-100, 100), rng.uniform(-100, 100)};
        const Vec2 a2{rng.uniform(-100, 100), rng.uniform(-100, 100)}, v2{rng.uniform(-100, 100), rng.uniform(-100, 100)};
        const double p = rng.uniform(-10, 10), q = rng.uniform(-10, 10);
        const Wrench w{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const Vec2 lhs = dynamics_residual(m, p * a1 + q * a2, p * v1 + q * v2, Wrench{});
        const Vec2 rhs = p * dynamics_residual(m, a1, v1, Wrench{}) + q * dynamics_residual(m, a2, v2, Wrench{});
        const double scale = (std::abs(p) + std::abs(q)) * m.x_axis() * 200;
        ASSERT_LE(norm_inf(lhs - rhs), 1e-12 * std::max(1.0, scale));
        const Vec2 shift = dynamics_residual(m, a1, v1, w) - dynamics_residual(m, a1, v1, Wrench{});
        ASSERT_LE(norm_inf(shift + w.net()), 1e-12 * std::max(1.0, m.x_axis() * 200));
    }
}
