#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "mpsimd/lanes.hpp"
#include "oracle.hpp"

using namespace mpsimd;

namespace {

using V = std::vector<std::uint64_t>;

LaneVector lanes16(V v) { return LaneVector(std::move(v), 16); }

std::uint64_t mask_of(unsigned bits) { return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

LaneVector random_lanes(std::mt19937_64& rng, std::size_t count, unsigned bits) {
    V v(count);
    for (auto& x : v) x = rng() & mask_of(bits);
    return LaneVector(std::move(v), bits);
}

}  // namespace

TEST(LaneVector, EnforcesLaneWidth) {
    EXPECT_THROW(LaneVector({256}, 8), std::invalid_argument);
    EXPECT_NO_THROW(LaneVector({255}, 8));
    EXPECT_EQ(LaneVector::filled(3, 8, 7).lanes(), (V{7, 7, 7}));
}

TEST(LaneMachine, ShapeMismatchThrows) {
    LaneMachine m;
    EXPECT_THROW(m.add(LaneVector({1, 2}, 8), LaneVector({1}, 8)), std::invalid_argument);
    EXPECT_THROW(m.add(LaneVector({1}, 8), LaneVector({1}, 64)), std::invalid_argument);
}

TEST(LaneMachine, AddWorkedExample) {
    LaneMachine m;
    const auto d = m.add(lanes16({60000, 50000, 10000, 20000}), lanes16({5536, 15535, 10000, 20000}));
    EXPECT_EQ(d.lanes(), (V{0, 65535, 20000, 40000}));
    EXPECT_EQ(m.counts().lane_add, 1u);
    EXPECT_EQ(m.add(LaneVector::zeros(4, 64), LaneVector::zeros(4, 64)), LaneVector::zeros(4, 64));
}

TEST(LaneMachine, SubWrapsPerLane) {
    LaneMachine m;
    const auto d = m.sub(LaneVector({0, 0, 245, 244}, 8), LaneVector({17, 16, 5, 5}, 8));
    EXPECT_EQ(d.lanes(), (V{239, 240, 240, 239}));
    const auto x = LaneVector({3, 9}, 64);
    EXPECT_EQ(m.sub(x, LaneVector::zeros(2, 64)), x);
    EXPECT_EQ(m.counts().lane_sub, 2u);
}

TEST(LaneMachine, WideMultiplyHalves) {
    LaneMachine m;
    const auto p = m.mul_wide(LaneVector({14, 7}, 4), LaneVector({15, 1}, 4));
    EXPECT_EQ(p.lo.lanes(), (V{2, 7}));
    EXPECT_EQ(p.hi.lanes(), (V{13, 0}));
    EXPECT_EQ(m.counts().lane_mul_product, 2u);
    EXPECT_EQ(m.mul_lo(LaneVector({9}, 4), LaneVector({0}, 4)).lanes(), V{0});
    EXPECT_EQ(m.mul_hi(LaneVector({9}, 4), LaneVector({0}, 4)).lanes(), V{0});
    EXPECT_EQ(m.counts().lane_mul_product, 4u);
}

TEST(LaneMachine, SaturatingOps) {
    LaneMachine m;
    const std::uint64_t max = ~std::uint64_t{0};
    EXPECT_EQ(m.saturating_add(LaneVector({max}, 64), LaneVector({1}, 64)).lanes(), V{max});
    const unsigned k = 43;
    const std::uint64_t d = (std::uint64_t{1} << k) - 1;
    const std::uint64_t addend = max - (std::uint64_t{1} << k);
    EXPECT_EQ(m.saturating_add(LaneVector({d}, 64), LaneVector({addend}, 64)).lanes(), V{max - 1});
    EXPECT_EQ(m.saturating_sub(LaneVector({max - 1}, 64), LaneVector({max - 2}, 64)).lanes(), V{1});
    EXPECT_EQ(m.saturating_sub(LaneVector({5}, 64), LaneVector({9}, 64)).lanes(), V{0});
    EXPECT_EQ(m.counts().lane_saturating, 4u);
}

TEST(LaneMachine, PopcountCompareMaskedAdd) {
    LaneMachine m;
    const auto D = lanes16({0, 65535, 20000, 40000});
    EXPECT_EQ(m.popcount(D).lanes(), (V{0, 16, 5, 5}));
    const auto mask = m.less_than(D, lanes16({60000, 50000, 10000, 20000}));
    EXPECT_EQ(mask.lanes(), (V{1, 0, 0, 0}));
    EXPECT_EQ(m.masked_add(lanes16({0, 16, 5, 5}), 17, mask).lanes(), (V{17, 16, 5, 5}));
    EXPECT_EQ(m.masked_add(lanes16({3, 4, 5, 6}), 17, LaneVector::zeros(4, 16)).lanes(), (V{3, 4, 5, 6}));
    EXPECT_EQ(m.less_than(D, D), LaneVector::zeros(4, 16));
    const OpCounts& c = m.counts();
    EXPECT_EQ(c.lane_popcount, 1u);
    EXPECT_EQ(c.lane_compare, 2u);
    EXPECT_EQ(c.lane_masked_add, 2u);
}

TEST(LaneMachine, CrossLaneOps) {
    LaneMachine m;
    const auto g = m.byte_gather(LaneVector({17, 16, 5, 5}, 64));
    EXPECT_EQ(g.lane_bits(), 8u);
    EXPECT_EQ(g.lanes(), (V{17, 16, 5, 5}));
    EXPECT_EQ(m.byte_gather(LaneVector::zeros(3, 64)), LaneVector::zeros(3, 8));
    EXPECT_THROW(m.byte_gather(LaneVector({256}, 64)), std::invalid_argument);
    EXPECT_EQ(m.byte_scatter(g, 64).lanes(), (V{17, 16, 5, 5}));
    EXPECT_EQ(m.slide_up(LaneVector({1, 2, 3}, 8), 1, 9).lanes(), (V{9, 1, 2}));
    EXPECT_EQ(m.broadcast(5, 3, 64).lanes(), (V{5, 5, 5}));
    EXPECT_EQ(m.counts().cross_lane, 5u);
}

TEST(LaneMachine, RandomOpsMatchScalarLoops) {
    std::mt19937_64 rng(21);
    LaneMachine m;
    for (unsigned bits : {4u, 8u, 16u, 43u, 52u, 64u}) {
        const std::uint64_t mask = mask_of(bits);
        for (int trial = 0; trial < 500; ++trial) {
            const auto a = random_lanes(rng, 8, bits);
            const auto b = random_lanes(rng, 8, bits);
            const auto sum = m.add(a, b), diff = m.sub(a, b);
            const auto sadd = m.saturating_add(a, b), ssub = m.saturating_sub(a, b);
            const auto pc = m.popcount(a), lt = m.less_than(a, b), ge = m.greater_equal(a, b);
            const auto wide = m.mul_wide(a, b);
            const auto band = m.bit_and(a, b), bor = m.bit_or(a, b), bxor = m.bit_xor(a, b);
            for (std::size_t i = 0; i < 8; ++i) {
                const std::uint64_t x = a[i], y = b[i];
                ASSERT_EQ(sum[i], (x + y) & mask);
                ASSERT_EQ(diff[i], (x - y) & mask);
                const oracle::cpp_int s = oracle::cpp_int(x) + y;
                ASSERT_EQ(sadd[i], s > mask ? mask : static_cast<std::uint64_t>(s));
                ASSERT_EQ(ssub[i], x > y ? x - y : 0);
                ASSERT_EQ(pc[i], static_cast<std::uint64_t>(std::popcount(x)));
                ASSERT_EQ(lt[i], x < y ? 1u : 0u);
                ASSERT_EQ(ge[i], x >= y ? 1u : 0u);
                const oracle::cpp_int prod = oracle::cpp_int(x) * y;
                ASSERT_EQ(wide.lo[i], static_cast<std::uint64_t>(prod & mask));
                ASSERT_EQ(wide.hi[i], static_cast<std::uint64_t>(prod >> bits));
                ASSERT_EQ(band[i], x & y);
                ASSERT_EQ(bor[i], x | y);
                ASSERT_EQ(bxor[i], x ^ y);
                for (const LaneVector* v : {&sum, &diff, &sadd, &ssub, &wide.hi, &wide.lo}) {
                    ASSERT_LE((*v)[i], mask);
                }
            }
        }
    }
}

TEST(LaneMachine, ExhaustiveBytesOnThreeLanes) {
    LaneMachine m;
    // Every (a, b) pair appears in some lane; three lanes cover 3 pairs at once.
    for (std::uint64_t x = 0; x < 256; ++x) {
        for (std::uint64_t y = 0; y < 256; y += 3) {
            const LaneVector a({x, x, x}, 8);
            const LaneVector b({y, std::min<std::uint64_t>(y + 1, 255), std::min<std::uint64_t>(y + 2, 255)}, 8);
            const auto sum = m.add(a, b), diff = m.sub(a, b);
            const auto sadd = m.saturating_add(a, b), ssub = m.saturating_sub(a, b);
            for (std::size_t i = 0; i < 3; ++i) {
                ASSERT_EQ(sum[i], (x + b[i]) & 0xff);
                ASSERT_EQ(diff[i], (x - b[i]) & 0xff);
                ASSERT_EQ(sadd[i], std::min<std::uint64_t>(x + b[i], 255));
                ASSERT_EQ(ssub[i], x > b[i] ? x - b[i] : 0);
            }
        }
    }
}

TEST(LaneMachine, CountsAreScopedPerMachine) {
    LaneMachine a, b;
    a.add(LaneVector({1}, 8), LaneVector({1}, 8));
    EXPECT_EQ(a.counts().lane_add, 1u);
    EXPECT_EQ(b.counts().lane_add, 0u);
    const OpCounts taken = a.take_counts();
    EXPECT_EQ(taken.lane_add, 1u);
    EXPECT_EQ(a.counts(), OpCounts{});
}

TEST(KoggeStone, WorkedExample) {
    const RadixConfig cfg = RadixConfig::make(16, 4);
    const BigInt a(cfg, {60000, 50000, 10000, 20000});
    const BigInt b(cfg, {5536, 15535, 10000, 20000});
    EXPECT_EQ(kogge_stone_carries(a, b), (std::vector<std::uint8_t>{0, 1, 1, 0, 0}));
    const auto zero = kogge_stone_carries(BigInt(cfg), BigInt(cfg));
    for (auto c : zero) EXPECT_EQ(c, 0);
}

TEST(KoggeStone, ExhaustiveSmallAndRandomWide) {
    for (std::size_t n = 1; n <= 3; ++n) {
        const RadixConfig cfg = RadixConfig::make(4, n);
        const std::uint64_t count = std::uint64_t{1} << (4 * n);
        for (std::uint64_t x = 0; x < count; ++x) {
            for (std::uint64_t y = 0; y < count; ++y) {
                const BigInt a = BigInt::from_u64(x, cfg), b = BigInt::from_u64(y, cfg);
                ASSERT_EQ(kogge_stone_carries(a, b), add_carry_propagate(a, b).carries);
            }
        }
    }
    std::mt19937_64 rng(22);
    for (unsigned omega : {43u, 52u, 64u}) {
        const RadixConfig cfg = RadixConfig::make(omega, 8);
        for (int i = 0; i < 10000; ++i) {
            const BigInt a = random_bigint(cfg, 8, rng), b = random_bigint(cfg, 8, rng);
            ASSERT_EQ(kogge_stone_carries(a, b), add_carry_propagate(a, b).carries);
        }
    }
}

TEST(KoggeStone, CountsDependOnlyOnShape) {
    std::mt19937_64 rng(23);
    const RadixConfig cfg = RadixConfig::make(64, 8);
    std::optional<OpCounts> first;
    for (int i = 0; i < 20; ++i) {
        LaneMachine m;
        kogge_stone_carries(random_bigint(cfg, 8, rng), random_bigint(cfg, 8, rng), m);
        if (!first) first = m.counts();
        EXPECT_EQ(m.counts(), *first);
    }
}
