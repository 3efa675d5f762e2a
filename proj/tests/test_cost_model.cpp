#include <gtest/gtest.h>

#include <sstream>

#include "mpsimd/cost_model.hpp"
#include "mpsimd/errors.hpp"

using namespace mpsimd;

TEST(CostModel, BuiltinProfilesExist) {
    const auto& models = CostModel::builtins();
    ASSERT_EQ(models.size(), 4u);
    for (const char* name : {"tigerlake-x64", "tigerlake-avx512", "a64fx-a64", "a64fx-sve"}) {
        EXPECT_NO_THROW(CostModel::builtin(name)) << name;
    }
    EXPECT_THROW(CostModel::builtin("pentium"), std::invalid_argument);
    for (const auto& m : models) {
        for (const auto& [cls, latency] : m.latency) EXPECT_GT(latency, 0u);
    }
}

TEST(CostModel, A64fxHasNoCpi) {
    EXPECT_TRUE(CostModel::builtin("a64fx-sve").cpi.empty());
    EXPECT_TRUE(CostModel::builtin("a64fx-a64").cpi.empty());
    EXPECT_FALSE(CostModel::builtin("tigerlake-x64").cpi.empty());
}

TEST(CostReport, ZeroCountsCostNothing) {
    const CostReport r = cost_report(OpCounts{}, CostModel::builtins());
    for (const auto& [name, cost] : r.per_profile) {
        EXPECT_EQ(cost.weighted_cycles, 0u) << name;
        EXPECT_TRUE(cost.unpriced.empty());
    }
}

TEST(CostReport, OneSveMultiplyIsNineCycles) {
    OpCounts c;
    c.lane_mul_product = 1;
    EXPECT_EQ(weigh(c, CostModel::builtin("a64fx-sve")).weighted_cycles, 9u);
}

TEST(CostReport, AddAndPopcountOnAvx512) {
    OpCounts c;
    c.lane_add = 2;
    c.lane_popcount = 1;
    EXPECT_EQ(weigh(c, CostModel::builtin("tigerlake-avx512")).weighted_cycles, 5u);
}

TEST(CostReport, MissingClassesAreReportedNotGuessed) {
    OpCounts c;
    c.lane_popcount = 2;
    c.cross_lane = 1;
    c.lane_add = 1;
    const ProfileCost cost = weigh(c, CostModel::builtin("a64fx-a64"));
    EXPECT_EQ(cost.weighted_cycles, 1u);
    EXPECT_EQ(cost.unpriced, (std::vector<std::string>{"lane_popcount", "cross_lane"}));
}

TEST(CostReport, IsLinearInCounts) {
    OpCounts x, y;
    x.lane_add = 3;
    x.lane_mul_product = 7;
    x.loads = 2;
    y.lane_compare = 5;
    y.lane_mul_product = 1;
    y.cross_lane = 4;
    OpCounts sum = x;
    sum += y;
    for (const auto& m : CostModel::builtins()) {
        EXPECT_EQ(weigh(sum, m).weighted_cycles, weigh(x, m).weighted_cycles + weigh(y, m).weighted_cycles)
            << m.profile;
    }
}

TEST(CostModelFile, ParsesProfilesAndReportsLineNumbers) {
    std::istringstream good("# comment\nmine addition=2 mul64=7/0.5\n\nother popcount=1\n");
    const auto models = parse_cost_models(good);
    ASSERT_EQ(models.size(), 2u);
    EXPECT_EQ(models[0].profile, "mine");
    EXPECT_EQ(models[0].latency_of(InstrClass::Mul64), 7u);
    EXPECT_DOUBLE_EQ(models[0].cpi.at(InstrClass::Mul64), 0.5);

    std::istringstream bad("ok addition=1\nbroken addition=0\n");
    try {
        parse_cost_models(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 2u);
    }
    std::istringstream unknown("p warp=3\n");
    EXPECT_THROW(parse_cost_models(unknown), ParseError);
}
