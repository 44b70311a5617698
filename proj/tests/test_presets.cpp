#include <cmath>

#include <gtest/gtest.h>

#include "halfline/errors.hpp"
#include "halfline/presets.hpp"
#include "support/oracle.hpp"

using namespace halfline;

TEST(Presets, UnitNormOnReferenceGrid) {
    const Grid g = Grid::make(40.0, 1 << 16);
    for (const char* name : {"xexp", "bump12", "bump23"}) {
        EXPECT_NEAR(norm(make_preset(name, g)), 1.0, 1e-8) << name;
    }
    EXPECT_NEAR(norm(make_preset("sine-mode-3", g)), 1.0, 1e-12);
}

TEST(Presets, ConstantsMatchQuadrature) {
    for (const char* name : {"xexp", "bump12", "bump23"}) {
        const Preset p = find_preset(name, 40.0);
        const double c = oracle::normalization(name);
        for (double x : {0.3, 1.2, 1.7, 2.4, 2.9}) {
            EXPECT_NEAR(p.profile(x), c * oracle::shape(name, x), 1e-12) << name << " x=" << x;
        }
    }
}

TEST(Presets, VanishAtOrigin) {
    for (const char* name : {"xexp", "bump12", "bump23", "sine-mode-5"}) {
        EXPECT_EQ(find_preset(name, 40.0).profile(0.0), 0.0) << name;
    }
}

TEST(Presets, SupportStart) {
    EXPECT_EQ(find_preset("bump12", 40.0).support_start, 1.0);
    EXPECT_EQ(find_preset("bump23", 40.0).support_start, 2.0);
    EXPECT_EQ(find_preset("xexp", 40.0).support_start, 0.0);
}

TEST(Presets, UnknownNamesThrow) {
    EXPECT_THROW(find_preset("gauss", 40.0), InvalidArgument);
    EXPECT_THROW(find_preset("sine-mode-", 40.0), InvalidArgument);
    EXPECT_THROW(find_preset("sine-mode-0", 40.0), InvalidArgument);
    EXPECT_THROW(find_preset("sine-mode-2x", 40.0), InvalidArgument);
}
