#include <cmath>

#include <gtest/gtest.h>

#include "halfline/errors.hpp"
#include "halfline/limit_dynamics.hpp"
#include "halfline/presets.hpp"
#include "support/oracle.hpp"

using namespace halfline;

namespace {

const Grid& grid() {
    static const Grid g = Grid::make(40.0, 1 << 16);
    return g;
}

const WaveFunction& preset(const char* name) {
    static const WaveFunction xexp = make_preset("xexp", grid());
    static const WaveFunction bump12 = make_preset("bump12", grid());
    return std::string_view(name) == "xexp" ? xexp : bump12;
}

}  // namespace

TEST(ShiftV, IdentityAtZeroAndAlphaOracle) {
    const WaveFunction& phi = preset("xexp");
    EXPECT_EQ(distance(shift_V(phi, 1.0, 0.0), phi), 0.0);
    for (double t : {0.5, 1.0, 1.5}) {
        EXPECT_NEAR(norm_squared(shift_V(phi, 1.0, t)), oracle::alpha("xexp", 1.0, t), 1e-6);
    }
    EXPECT_THROW(shift_V(phi, -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(shift_V(phi, 1.0, -1.0), InvalidArgument);
}

TEST(ShiftV, Semigroup) {
    for (const char* name : {"xexp", "bump12"}) {
        for (auto [t, tau] : {std::pair{0.5, 0.7}, {1.0, 1.0}, {0.31, 0.123}}) {
            EXPECT_LE(shift_semigroup_defect(preset(name), 1.0, t, tau), 1e-5) << name;
        }
    }
}

TEST(ReflectW, ZeroAtTimeZeroAndMassOnBand) {
    const WaveFunction& phi = preset("xexp");
    EXPECT_EQ(reflect_W(phi, 1.0, 0.0).max_abs(), 0.0);
    for (double t : {0.4, 1.0, 2.0}) {
        EXPECT_NEAR(norm_squared(reflect_W(phi, 1.0, t)), oracle::mass("xexp", 0.0, t), 1e-6);
    }
}

TEST(ReflectW, SquaresToBandProjectorNotToDoubleTime) {
    const WaveFunction& phi = preset("bump12");
    const double t = 1.5;
    const WaveFunction ww = reflect_W(reflect_W(phi, 1.0, t), 1.0, t);
    EXPECT_LE(distance(ww, indicator_project(phi, 0.0, t)), 1e-3);
    EXPECT_GT(distance(ww, reflect_W(phi, 1.0, 2.0 * t)), 0.1);
    EXPECT_GT(reflect_semigroup_defect(phi, 1.0, 1.5, 1.5), 0.1);
}

TEST(Kraus, ZeroTimeKeepsThePureState) {
    const KrausBranchState s = kraus_apply(preset("xexp"), 1.0, 0.0);
    ASSERT_EQ(s.branches.size(), 2u);
    EXPECT_EQ(distance(s.branches[0], preset("xexp")), 0.0);
    EXPECT_EQ(s.branches[1].max_abs(), 0.0);
}

TEST(Kraus, FullyReflectedPastTheSupport) {
    const auto p = kraus_apply(preset("bump12"), 1.0, 3.0).probabilities();
    EXPECT_EQ(p[0], 0.0);
    EXPECT_NEAR(p[1], 1.0, 1e-6);
}

TEST(Kraus, BranchProbabilitiesMatchQuadrature) {
    const auto p = kraus_apply(preset("xexp"), 1.0, 1.0).probabilities();
    EXPECT_NEAR(p[0], oracle::mass("xexp", 1.0, 12.0), 1e-6);
    EXPECT_NEAR(p[1], oracle::mass("xexp", 0.0, 1.0), 1e-6);
}

TEST(Kraus, Completeness) {
    for (const char* name : {"xexp", "bump12"}) {
        for (double b : {0.5, 1.0, 2.0}) {
            for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) {
                EXPECT_NEAR(kraus_apply(preset(name), b, t).total_probability(), 1.0, 1e-6)
                    << name << " b=" << b << " t=" << t;
            }
        }
    }
}

TEST(Kraus, RejectsUnnormalizedInput) {
    WaveFunction twice = preset("xexp");
    twice *= 2.0;
    EXPECT_THROW(kraus_apply(twice, 1.0, 1.0), InvalidArgument);
}

TEST(MultLimit, ConstantIsConserved) {
    const auto one = BoundedFunction::constant(grid(), 1.0);
    for (double t : {0.0, 0.7, 2.0}) {
        EXPECT_NEAR(mult_expectation_limit(preset("xexp"), one, 1.0, t).real(), 1.0, 1e-6);
    }
}

TEST(MultLimit, ZeroTimeIsThePlainExpectation) {
    const auto f = BoundedFunction::sample(grid(), [](double x) { return cplx{std::cos(x), 0.5}; });
    const WaveFunction& phi = preset("xexp");
    const cplx direct = inner(phi, multiply(f, phi));
    const cplx limit = mult_expectation_limit(phi, f, 1.0, 0.0);
    EXPECT_NEAR(std::abs(limit - direct), 0.0, 1e-15);
}

TEST(MultLimit, IndicatorMatchesQuadrature) {
    const auto chi = BoundedFunction::sample(grid(), [](double x) { return cplx{x <= 1.0 ? 1.0 : 0.0, 0.0}; });
    const double expected = oracle::mass("xexp", 1.0, 2.0) + oracle::mass("xexp", 0.0, 1.0);
    // The jump at x = 1 costs O(h |phi|^2) in the midpoint sum.
    EXPECT_NEAR(mult_expectation_limit(preset("xexp"), chi, 1.0, 1.0).real(), expected, 1e-5);
}

TEST(MultLimit, CoherentWithBandProjectors) {
    const WaveFunction& phi = preset("xexp");
    for (double a : {0.3, 1.234, 2.0}) {
        const auto chi = BoundedFunction::sample(grid(), [a](double x) { return cplx{x >= a ? 1.0 : 0.0, 0.0}; });
        const double b = 1.0;
        const double t = 0.8;
        const double viaProjectors = norm_squared(indicator_project(shift_V(phi, b, t), a, 40.0)) +
                                     norm_squared(indicator_project(reflect_W(phi, b, t), a, 40.0));
        EXPECT_NEAR(mult_expectation_limit(phi, chi, b, t).real(), viaProjectors, 1e-14);
    }
}

TEST(CompState, PureAtZero) {
    const CompAlgebraState s = comp_state_evolve(preset("xexp"), 1.0, 0.0);
    EXPECT_NEAR(s.alpha, 1.0, 1e-15);
    ASSERT_TRUE(s.normal_part);
    EXPECT_LE(distance(*s.normal_part, preset("xexp")), 1e-12);
    EXPECT_NEAR(s.singular_weight, 0.0, 1e-15);
}

TEST(CompState, DestroyedPastTheSupport) {
    const CompAlgebraState s = comp_state_evolve(preset("bump12"), 1.0, 3.0);
    EXPECT_EQ(s.alpha, 0.0);
    EXPECT_FALSE(s.normal_part);
    EXPECT_EQ(s.singular_weight, 1.0);
}

TEST(CompState, AlphaOracleAndInvariants) {
    for (double t : {0.3, 1.0, 1.7}) {
        const CompAlgebraState s = comp_state_evolve(preset("xexp"), 1.0, t);
        EXPECT_NEAR(s.alpha, oracle::alpha("xexp", 1.0, t), 1e-6);
        ASSERT_TRUE(s.normal_part);
        EXPECT_NEAR(norm(*s.normal_part), 1.0, 1e-8);
        EXPECT_EQ(s.alpha + s.singular_weight, 1.0);
    }
}

TEST(CompState, AlphaShapeForBump) {
    const double h = grid().spacing();
    const double jitter = 1e-12;
    double previous = 1.0;
    for (double t = 0.0; t <= 3.0; t += 0.05) {
        const double a = comp_state_evolve(preset("bump12"), 1.0, t).alpha;
        EXPECT_LE(a, previous + jitter) << t;
        if (t < 1.0 - h) {
            EXPECT_NEAR(a, 1.0, jitter) << t;
        }
        previous = a;
    }
}

TEST(DestructionTime, SupportArithmetic) {
    const double h = grid().spacing();
    EXPECT_NEAR(destruction_time(preset("bump12"), 1.0), 1.0, h);
    EXPECT_NEAR(destruction_time(preset("xexp"), 1.0), 0.0, h);
    EXPECT_DOUBLE_EQ(destruction_time(preset("bump12"), 2.0), 0.5 * destruction_time(preset("bump12"), 1.0));
    EXPECT_THROW(destruction_time(WaveFunction(grid()), 1.0), InvalidArgument);
}

TEST(Wold, PartitionAndShiftCorrespondence) {
    const WaveFunction& phi = preset("xexp");
    const WoldProjectors zero = wold_projectors(1.0, 0.0, grid());
    EXPECT_EQ(distance(zero.unitary(phi), phi), 0.0);
    EXPECT_EQ(zero.shift(phi).max_abs(), 0.0);

    for (double t : {0.37, 1.0, 2.5}) {
        const WoldProjectors w = wold_projectors(1.0, t, grid());
        const WaveFunction sum = w.unitary(phi) + w.shift(phi);
        EXPECT_EQ(distance(sum, phi), 0.0);
        EXPECT_EQ(distance(w.unitary(w.unitary(phi)), w.unitary(phi)), 0.0);
        // The node cut at bt and the interpolated shift differ by at most one cell of mass.
        EXPECT_NEAR(norm_squared(w.unitary(phi)), norm_squared(shift_V(phi, 1.0, t)), grid().spacing());
        EXPECT_DOUBLE_EQ(w.edge(), t);
    }
}

TEST(CompSemigroup, Defects) {
    EXPECT_EQ(comp_semigroup_check(preset("xexp"), 1.0, 0.5, 0.0), 0.0);
    EXPECT_LE(comp_semigroup_check(preset("xexp"), 1.0, 0.5, 0.7), 1e-4);
    EXPECT_LE(comp_semigroup_check(preset("xexp"), 1.0, 1.0, 1.0), 1e-4);
    // Both sides destroyed: alphas agree at zero and neither has a vector.
    EXPECT_EQ(comp_semigroup_check(preset("bump12"), 1.0, 2.0, 1.5), 0.0);
}
