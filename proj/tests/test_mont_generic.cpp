#include <gtest/gtest.h>

#include <random>

#include "mpsimd/errors.hpp"
#include "mpsimd/mont_generic.hpp"
#include "mpsimd/presets.hpp"
#include "oracle.hpp"

using namespace mpsimd;
using oracle::cpp_int;

namespace {

const RadixConfig k4x4 = RadixConfig::make(4, 4);

BigInt u(std::uint64_t v, RadixConfig cfg) { return BigInt::from_u64(v, cfg); }

PrimeContext example_context() { return PrimeContext::create(u(62207, k4x4), k4x4); }

BigInt random_odd_modulus(const RadixConfig& cfg, std::mt19937_64& rng) {
    BigInt p = random_bigint(cfg, cfg.n, rng);
    if (!p.bit(0)) p = add(p, u(1, cfg)).resized(cfg.n);
    if (p.is_zero() || p.bit_length() > cfg.omega * cfg.n) p = u(1, cfg);
    return p;
}

}  // namespace

TEST(PrimeContext, ExampleConstants) {
    const PrimeContext ctx = example_context();
    EXPECT_EQ(ctx.p_prime(), 1u);
    EXPECT_EQ((62207u * ctx.p_prime()) % 16u, 15u);
    ASSERT_EQ(ctx.m_table().size(), 2u);
    EXPECT_EQ(ctx.m_table()[0].low_u64(), 243u);
    EXPECT_EQ(ctx.m_table()[1].low_u64(), 3888u);
    EXPECT_FALSE(ctx.lazy_ok());
    ASSERT_TRUE(ctx.skip_threshold().has_value());
    EXPECT_EQ(ctx.skip_threshold()->low_u64(), 3567198208u);
}

TEST(PrimeContext, RejectsBadModuli) {
    EXPECT_THROW(PrimeContext::create(u(62206, k4x4), k4x4), PreconditionError);
    EXPECT_THROW(PrimeContext::create(u(0, k4x4), k4x4), PreconditionError);
    EXPECT_THROW(PrimeContext::create(from_hex("0x1ffff", k4x4), k4x4), PreconditionError);
}

TEST(PrimeContext, PrimeInverseProperty) {
    std::mt19937_64 rng(41);
    for (unsigned omega : {2u, 4u, 43u, 64u}) {
        const RadixConfig cfg = RadixConfig::make(omega, 5);
        for (int i = 0; i < 50; ++i) {
            const PrimeContext ctx = PrimeContext::create(random_odd_modulus(cfg, rng), cfg);
            const cpp_int r = oracle::pow2(omega);
            EXPECT_EQ((oracle::to_int(ctx.p()) * ctx.p_prime()) % r, r - 1);
        }
    }
}

TEST(PrimeContext, MTableSatisfiesInverseRelation) {
    std::mt19937_64 rng(42);
    for (unsigned omega : {4u, 16u, 64u}) {
        const RadixConfig cfg = RadixConfig::make(omega, 6);
        const PrimeContext ctx = PrimeContext::create(random_odd_modulus(cfg, rng), cfg);
        const cpp_int p = oracle::to_int(ctx.p());
        for (std::size_t i = 1; i <= cfg.n - 2; ++i) {
            const cpp_int Mi = oracle::to_int(ctx.m_table()[i - 1]);
            EXPECT_EQ(Mi * oracle::pow2(omega * (cfg.n - i - 1)) % p, 1 % p);
        }
    }
}

TEST(PrimeContext, CorruptedTableIsRejected) {
    const PrimeContext ctx = example_context();
    std::vector<BigInt> table = ctx.m_table();
    EXPECT_NO_THROW(PrimeContext::with_m_table(ctx.p(), k4x4, table));
    table[0] = u(244, k4x4);
    EXPECT_THROW(PrimeContext::with_m_table(ctx.p(), k4x4, table), PreconditionError);
    table = ctx.m_table();
    table.pop_back();
    EXPECT_THROW(PrimeContext::with_m_table(ctx.p(), k4x4, table), PreconditionError);
}

TEST(RedcReference, ExampleAndZero) {
    const PrimeContext ctx = example_context();
    const RedcResult r = redc_reference(u(100000000, RadixConfig::make(4, 8)), ctx);
    EXPECT_EQ(r.value.low_u64(), 56200u);
    EXPECT_EQ(r.trace.t_steps.size(), 5u);
    EXPECT_TRUE(redc_reference(u(0, k4x4), ctx).value.is_zero());
    for (Limb rem : r.trace.remainders) EXPECT_EQ(rem, 0u);
}

TEST(RedcReference, RejectsInputAtOrAbovePR) {
    const PrimeContext ctx = example_context();
    EXPECT_THROW(redc_reference(ctx.pR(), ctx), PreconditionError);
    EXPECT_NO_THROW(redc_reference(sub(ctx.pR(), u(1, k4x4)), ctx));
}

TEST(RedcProposed, ExampleTrace) {
    const PrimeContext ctx = example_context();
    const RedcResult r = redc_proposed(u(100000000, RadixConfig::make(4, 8)), ctx);
    EXPECT_EQ(r.value.low_u64(), 56200u);
    ASSERT_EQ(r.trace.t_steps.size(), 3u);
    EXPECT_EQ(r.trace.t_steps[0].low_u64(), 390625u);
    EXPECT_EQ(r.trace.t_steps[1].low_u64(), 28302u);
    EXPECT_EQ(r.trace.t_steps[2].low_u64(), 56200u);
    EXPECT_EQ(r.trace.q_steps, (std::vector<Limb>{1, 14}));
    EXPECT_EQ(r.trace.corrections, 0u);
    EXPECT_EQ(r.trace.counts.lane_mul_product, 18u);
    EXPECT_TRUE(redc_proposed(u(0, k4x4), ctx).value.is_zero());
}

TEST(SimdMulNx1, IdentitiesAndOracle) {
    const RadixConfig cfg = RadixConfig::make(64, 6);
    std::mt19937_64 rng(43);
    const BigInt M = random_bigint(cfg, 6, rng);
    LaneMachine m;
    MulNx1 zero = simd_mul_nx1(m, M, 0);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(zero.U[i] | zero.Y[i], 0u);
    MulNx1 one = simd_mul_nx1(m, M, 1);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(one.U[i], 0u);
        EXPECT_EQ(one.Y[i], M.limb(i));
    }
    m.reset();
    for (int i = 0; i < 200; ++i) {
        const Limb s = rng();
        const BigInt H = recompose(simd_mul_nx1(m, M, s), cfg);
        ASSERT_EQ(oracle::to_int(H), oracle::to_int(M) * s);
    }
    EXPECT_EQ(m.counts().lane_mul_product, 200u * 6u);
}

TEST(NeedsSecondCorrection, Boundaries) {
    const PrimeContext ctx = example_context();
    EXPECT_FALSE(needs_second_correction(u(0, k4x4), ctx));
    EXPECT_TRUE(needs_second_correction(sub(ctx.pR(), u(1, k4x4)), ctx));
    EXPECT_FALSE(needs_second_correction(sub(*ctx.skip_threshold(), u(1, k4x4)), ctx));
    // At the threshold the strict inequality T < threshold fails.
    EXPECT_TRUE(needs_second_correction(*ctx.skip_threshold(), ctx));
}

// omega = 2, n = 3: every odd p < 64 and every T < pR.
TEST(Redc, ExhaustiveTinyRadix) {
    const RadixConfig cfg = RadixConfig::make(2, 3);
    const RadixConfig wide = RadixConfig::make(2, 6);
    for (std::uint64_t pv = 1; pv < 64; pv += 2) {
        const PrimeContext ctx = PrimeContext::create(u(pv, cfg), cfg);
        const std::uint64_t rinv = static_cast<std::uint64_t>(oracle::inverse(64 % pv, pv));
        for (std::uint64_t T = 0; T < pv * 64; ++T) {
            const std::uint64_t expected = (T % pv) * rinv % pv;
            const BigInt t = u(T, wide);
            ASSERT_EQ(redc_reference(t, ctx).value.low_u64(), expected) << "p=" << pv << " T=" << T;
            ASSERT_EQ(redc_proposed(t, ctx).value.low_u64(), expected) << "p=" << pv << " T=" << T;
        }
    }
}

class RedcRandom : public ::testing::TestWithParam<std::tuple<unsigned, std::size_t>> {};

TEST_P(RedcRandom, ProposedMatchesReferenceAndOracle) {
    const auto [omega, n] = GetParam();
    const RadixConfig cfg = RadixConfig::make(omega, n);
    std::mt19937_64 rng(omega * 31 + n);
    for (int k = 0; k < 4; ++k) {
        const PrimeContext ctx = PrimeContext::create(random_odd_modulus(cfg, rng), cfg);
        const cpp_int p = oracle::to_int(ctx.p());
        const cpp_int three_p = 3 * p, two_p = 2 * p;
        for (int i = 0; i < 2500; ++i) {
            // Bias towards the top of the range, where the corrections live.
            const BigInt T = (i % 4 == 0) ? sub(sub(ctx.pR(), u(1, cfg)), random_bigint(cfg, 1, rng))
                                          : random_below(ctx.pR(), rng);
            const cpp_int expected = oracle::redc(oracle::to_int(T), p, cfg);
            const RedcResult ref = redc_reference(T, ctx);
            const RedcResult pro = redc_proposed(T, ctx);
            ASSERT_EQ(oracle::to_int(ref.value), expected);
            ASSERT_EQ(oracle::to_int(pro.value), expected);
            ASSERT_LT(oracle::to_int(pro.trace.pre_correction), three_p);
            if (!needs_second_correction(T, ctx)) {
                ASSERT_LT(oracle::to_int(pro.trace.pre_correction), two_p);
                ASSERT_FALSE(pro.trace.second_check_performed);
            }
            for (Limb rem : pro.trace.remainders) ASSERT_EQ(rem, 0u);
            for (Limb rem : ref.trace.remainders) ASSERT_EQ(rem, 0u);
            // Growth bound of the reference loop: T^(i) < p r^(n-i) + p.
            for (std::size_t step = 0; step < ref.trace.t_steps.size(); ++step) {
                ASSERT_LT(oracle::to_int(ref.trace.t_steps[step]), p * oracle::pow2(omega * (n - step)) + p);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, RedcRandom,
                         ::testing::Values(std::tuple{4u, std::size_t{4}}, std::tuple{16u, std::size_t{4}},
                                           std::tuple{64u, std::size_t{8}}, std::tuple{52u, std::size_t{5}},
                                           std::tuple{3u, std::size_t{7}}));

TEST(Redc, SecondCorrectionIsExercised) {
    // A modulus far below R leaves the truncated quotient room to overshoot,
    // so inputs just below pR land at or above 2p before correction.
    const PrimeContext ctx = PrimeContext::create(u(13, k4x4), k4x4);
    bool second = false;
    for (std::uint64_t d = 1; d < 5000; ++d) {
        const BigInt T = sub(ctx.pR(), u(d, RadixConfig::make(4, 8)));
        const RedcResult r = redc_proposed(T, ctx);
        ASSERT_EQ(r.value, redc_oracle(T, ctx.p(), k4x4));
        second = second || r.trace.corrections == 2;
    }
    EXPECT_TRUE(second);
}

TEST(Redc, LazyModeStaysBelowTwoP) {
    std::mt19937_64 rng(44);
    const RadixConfig cfg = RadixConfig::make(64, 4);
    BigInt p = random_bigint(cfg, 4, rng);
    p = shift_right_bits(p, 3);
    if (!p.bit(0)) p = add(p, u(1, cfg));
    const PrimeContext ctx = PrimeContext::create(p.resized(4), cfg);
    ASSERT_TRUE(ctx.lazy_ok());
    const BigInt two_p = add(ctx.p(), ctx.p());
    for (int i = 0; i < 2000; ++i) {
        const BigInt T = random_below(ctx.pR(), rng);
        const BigInt expected = redc_oracle(T, ctx.p(), cfg);
        for (const BigInt& v : {redc_reference(T, ctx, Correction::Lazy).value,
                                redc_proposed(T, ctx, Correction::Lazy).value}) {
            ASSERT_LT(v, two_p);
            ASSERT_EQ(mod(v, ctx.p()), expected);
        }
    }
}

TEST(Redc, CountsDependOnlyOnShape) {
    const PrimePreset p503 = *find_preset("p503");
    const PrimeContext ctx = PrimeContext::create(p503.p, p503.cfg);
    std::mt19937_64 rng(45);
    std::optional<OpCounts> ref, pro;
    for (int i = 0; i < 50; ++i) {
        const BigInt T = random_below(ctx.pR(), rng);
        const auto a = redc_reference(T, ctx).trace.counts;
        const auto b = redc_proposed(T, ctx).trace.counts;
        if (!ref) ref = a, pro = b;
        ASSERT_EQ(a, *ref);
        ASSERT_EQ(b, *pro);
    }
    EXPECT_EQ(ref->lane_mul_product, 72u);
}

TEST(Redc, ProposedAcceptsEveryStrategyForItsRadix) {
    const RadixConfig cfg = RadixConfig::make(43, 6);
    std::mt19937_64 rng(46);
    const PrimeContext ctx = PrimeContext::create(random_odd_modulus(cfg, rng), cfg);
    for (const auto& s : {AddStrategy::native_popcount(), AddStrategy::reduced_popcount(43),
                          AddStrategy::reduced_saturate(43)}) {
        for (int i = 0; i < 300; ++i) {
            const BigInt T = random_below(ctx.pR(), rng);
            ASSERT_EQ(redc_proposed(T, ctx, Correction::Full, s).value, redc_oracle(T, ctx.p(), cfg)) << s.name();
        }
    }
    EXPECT_THROW(redc_proposed(BigInt(cfg), ctx, Correction::Full, AddStrategy::reduced_popcount(52)),
                 PreconditionError);
}
