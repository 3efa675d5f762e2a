#include <gtest/gtest.h>

#include <random>

#include "mpsimd/errors.hpp"
#include "mpsimd/field.hpp"
#include "mpsimd/presets.hpp"
#include "oracle.hpp"

using namespace mpsimd;
using oracle::cpp_int;

namespace {

constexpr Backend kBackends[] = {Backend::GenericReference, Backend::GenericProposed, Backend::FriendlyReference,
                                 Backend::FriendlyProposed};

FieldPtr make_field(const char* preset, Backend backend, bool lazy = false,
                    std::optional<AddStrategy> strategy = std::nullopt, bool karatsuba = false) {
    const PrimePreset p = *find_preset(preset);
    FieldOptions o;
    o.backend = backend;
    o.lazy = lazy;
    o.add_strategy = strategy;
    o.karatsuba = karatsuba;
    return FieldContext::create(p.p, p.cfg, o);
}

}  // namespace

TEST(Backend, NamesRoundTrip) {
    for (Backend b : kBackends) EXPECT_EQ(parse_backend(backend_name(b)), b);
    EXPECT_FALSE(parse_backend("fast").has_value());
}

TEST(FieldContext, LazyNeedsHeadroom) {
    EXPECT_THROW(make_field("p62207", Backend::GenericProposed, true), PreconditionError);
    EXPECT_NO_THROW(make_field("p503", Backend::GenericProposed, true));
}

TEST(FieldContext, FriendlyBackendNeedsFriendlyModulus) {
    const RadixConfig cfg = RadixConfig::make(64, 2);
    FieldOptions o;
    o.backend = Backend::FriendlyReference;
    EXPECT_THROW(FieldContext::create(from_hex("0xffffffffffffffc5", cfg), cfg, o), PreconditionError);
    o.backend = Backend::GenericReference;
    EXPECT_NO_THROW(FieldContext::create(from_hex("0xffffffffffffffc5", cfg), cfg, o));
}

TEST(FieldContext, StrategyMustFitRadix) {
    EXPECT_THROW(make_field("p503", Backend::GenericProposed, false, AddStrategy::reduced_popcount(52)),
                 PreconditionError);
}

TEST(Field, MontgomeryFormBasics) {
    for (Backend b : kBackends) {
        const FieldPtr f = make_field("p62207", b);
        const RadixConfig cfg = f->cfg();
        const BigInt zero(cfg), one = BigInt::from_u64(1, cfg);
        EXPECT_TRUE(to_mont(zero, f).value().is_zero());
        EXPECT_EQ(to_mont(one, f).value(), mod(f->generic().R(), f->p()));
        EXPECT_EQ(from_mont(to_mont(one, f)), one);
        EXPECT_THROW(to_mont(f->p(), f), PreconditionError);
        const FieldElement x = to_mont(BigInt::from_u64(12345, cfg), f);
        EXPECT_EQ(fmul(x, to_mont(one, f)).value(), x.value());
        EXPECT_TRUE(fmul(x, to_mont(zero, f)).value().is_zero());
        EXPECT_EQ(fsqr(to_mont(one, f)).value(), to_mont(one, f).value());
        EXPECT_TRUE(fsqr(to_mont(zero, f)).value().is_zero());
        EXPECT_EQ(fadd(x, to_mont(zero, f)).value(), x.value());
        EXPECT_TRUE(normalize(fsub(x, x)).value().is_zero());
        EXPECT_TRUE(feq(x, x));
    }
}

TEST(Field, MixingContextsThrows) {
    const FieldPtr a = make_field("p62207", Backend::GenericReference);
    const FieldPtr b = make_field("p62207", Backend::GenericReference);
    const BigInt one = BigInt::from_u64(1, a->cfg());
    EXPECT_THROW(fmul(to_mont(one, a), to_mont(one, b)), std::invalid_argument);
    EXPECT_THROW(fadd(to_mont(one, a), to_mont(one, b)), std::invalid_argument);
    EXPECT_THROW((void)feq(to_mont(one, a), to_mont(one, b)), std::invalid_argument);
}

class FieldHomomorphism : public ::testing::TestWithParam<std::tuple<const char*, Backend>> {};

TEST_P(FieldHomomorphism, MatchesOracle) {
    const auto [preset, backend] = GetParam();
    const FieldPtr f = make_field(preset, backend);
    const FieldPtr karatsuba = make_field(preset, backend, false, AddStrategy::default_for(f->cfg()), true);
    const cpp_int p = oracle::to_int(f->p());
    std::mt19937_64 rng(61);
    for (int i = 0; i < 2500; ++i) {
        const BigInt a = random_below(f->p(), rng), b = random_below(f->p(), rng);
        const cpp_int A = oracle::to_int(a), B = oracle::to_int(b);
        const FieldElement x = to_mont(a, f), y = to_mont(b, f);
        ASSERT_EQ(from_mont(x), a);
        ASSERT_EQ(oracle::to_int(from_mont(fmul(x, y))), A * B % p);
        ASSERT_EQ(oracle::to_int(from_mont(fadd(x, y))), (A + B) % p);
        ASSERT_EQ(oracle::to_int(from_mont(fsub(x, y))), (A - B + p) % p);
        ASSERT_EQ(fsqr(x).value(), fmul(x, x).value());
        const FieldElement xk = to_mont(a, karatsuba), yk = to_mont(b, karatsuba);
        ASSERT_EQ(fmul(xk, yk).value(), fmul(x, y).value());
        ASSERT_EQ(fadd(xk, yk).value(), fadd(x, y).value());
        ASSERT_EQ(fsub(xk, yk).value(), fsub(x, y).value());
        if (a != b) {
            ASSERT_FALSE(feq(x, y));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(AllBackends, FieldHomomorphism,
                         ::testing::Combine(::testing::Values("p62207", "p503"), ::testing::ValuesIn(kBackends)));

TEST(Field, BackendsAgreeBitwise) {
    std::vector<FieldPtr> fields;
    for (Backend b : kBackends) fields.push_back(make_field("p503", b));
    std::mt19937_64 rng(62);
    for (int i = 0; i < 300; ++i) {
        const BigInt a = random_below(fields[0]->p(), rng), b = random_below(fields[0]->p(), rng);
        const BigInt expected = fmul(to_mont(a, fields[0]), to_mont(b, fields[0])).value();
        for (const auto& f : fields) ASSERT_EQ(fmul(to_mont(a, f), to_mont(b, f)).value(), expected);
    }
}

TEST(Field, RingAxioms) {
    const FieldPtr f = make_field("p503", Backend::FriendlyProposed);
    std::mt19937_64 rng(63);
    for (int i = 0; i < 300; ++i) {
        const FieldElement x = to_mont(random_below(f->p(), rng), f);
        const FieldElement y = to_mont(random_below(f->p(), rng), f);
        const FieldElement z = to_mont(random_below(f->p(), rng), f);
        ASSERT_TRUE(feq(fmul(x, y), fmul(y, x)));
        ASSERT_TRUE(feq(fadd(x, y), fadd(y, x)));
        ASSERT_TRUE(feq(fmul(fmul(x, y), z), fmul(x, fmul(y, z))));
        ASSERT_TRUE(feq(fadd(fadd(x, y), z), fadd(x, fadd(y, z))));
        ASSERT_TRUE(feq(fmul(x, fadd(y, z)), fadd(fmul(x, y), fmul(x, z))));
    }
}

TEST(Field, LazyEqualityAcrossRepresentatives) {
    const FieldPtr f = make_field("p503", Backend::GenericProposed, true);
    const FieldElement x = to_mont(BigInt::from_u64(5, f->cfg()), f);
    const FieldElement shifted(add(x.value(), f->p()), f);
    EXPECT_TRUE(feq(x, shifted));
    EXPECT_EQ(normalize(shifted).value(), x.value());
}

class LazySoundness : public ::testing::TestWithParam<Backend> {};

// 10^3 random mixed operations; every lazy intermediate stays below 2p and
// the normalized result tracks a strict-mode evaluation of the same program.
TEST_P(LazySoundness, RandomProgramsStayBounded) {
    const FieldPtr lazy = make_field("p503", GetParam(), true, AddStrategy::native_popcount());
    const FieldPtr strict = make_field("p503", GetParam(), false, AddStrategy::native_popcount());
    const BigInt two_p = add(lazy->p(), lazy->p());
    std::mt19937_64 rng(64);
    std::vector<FieldElement> lv, sv;
    for (int i = 0; i < 8; ++i) {
        const BigInt a = random_below(lazy->p(), rng);
        lv.push_back(to_mont(a, lazy));
        sv.push_back(to_mont(a, strict));
    }
    for (int step = 0; step < 1000; ++step) {
        const std::size_t i = rng() % lv.size(), j = rng() % lv.size(), k = rng() % lv.size();
        switch (rng() % 4) {
            case 0: lv[k] = fmul(lv[i], lv[j]); sv[k] = fmul(sv[i], sv[j]); break;
            case 1: lv[k] = fadd(lv[i], lv[j]); sv[k] = fadd(sv[i], sv[j]); break;
            case 2: lv[k] = fsub(lv[i], lv[j]); sv[k] = fsub(sv[i], sv[j]); break;
            default: lv[k] = fsqr(lv[i]); sv[k] = fsqr(sv[i]); break;
        }
        ASSERT_LT(lv[k].value(), two_p) << "step " << step;
        ASSERT_LT(sv[k].value(), strict->p());
        ASSERT_EQ(normalize(lv[k]).value(), sv[k].value()) << "step " << step;
    }
    for (std::size_t i = 0; i < lv.size(); ++i) ASSERT_EQ(from_mont(lv[i]), from_mont(sv[i]));
}

INSTANTIATE_TEST_SUITE_P(AllBackends, LazySoundness, ::testing::ValuesIn(kBackends));
