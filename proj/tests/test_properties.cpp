#include <gtest/gtest.h>

#include "properties.hpp"

using namespace pinv::testing;

TEST(Properties, SubstitutionRoundTrip)
{
    const auto r = substitutionRoundTrip(99, 500);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.cases, 500u);
}

TEST(Properties, PresGolden)
{
    const auto r = presGolden();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, ConcretizationBaseCase)
{
    const auto r = concretizationBaseCase();
    EXPECT_TRUE(r.ok) << r.detail;
}
