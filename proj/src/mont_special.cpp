#include "mpsimd/mont_special.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "mpsimd/errors.hpp"
#include "mpsimd/simd_add.hpp"

namespace mpsimd {

namespace {

OpCounts counts_since(const LaneMachine& machine, const OpCounts& before) {
    OpCounts diff = machine.counts();
    for (const auto& [name, field] : OpCounts::fields()) diff.*field -= before.*field;
    return diff;
}

void require_input(const BigInt& T, const FriendlyContext& ctx, const char* op) {
    if (T.omega() != ctx.cfg().omega) {
        throw RadixMismatch(std::string(op) + ": input radix 2^" + std::to_string(T.omega()) +
                            " does not match the context's 2^" + std::to_string(ctx.cfg().omega));
    }
    if (T >= ctx.pR()) {
        throw PreconditionError(std::string(op) + ": input " + to_hex(T) + " is not below pR = " + to_hex(ctx.pR()));
    }
}

// Multi-limb additions run through the carry-simulating adder at a width
// that holds every intermediate (T + (Q F << l) < 2pR).
class WideAdder {
public:
    WideAdder(LaneMachine& machine, const RadixConfig& cfg)
        : machine_(machine), strategy_(AddStrategy::default_for(cfg)), width_(2 * cfg.n + 2) {}

    BigInt operator()(const BigInt& a, const BigInt& b) const {
        if (a.significant_limbs() > width_ || b.significant_limbs() > width_) {
            throw ContractViolation("friendly reduction: intermediate exceeds the addition width");
        }
        SimdAddResult r = simd_add(machine_, a.resized(width_), b.resized(width_), strategy_);
        if (r.carry_out) throw ContractViolation("friendly reduction: intermediate sum overflowed");
        return r.sum.canonical();
    }

private:
    LaneMachine& machine_;
    AddStrategy strategy_;
    std::size_t width_;
};

BigInt natural_width(const BigInt& a) { return a.resized(a.significant_limbs()); }

std::size_t largest_divisor_at_most(std::size_t n, std::size_t cap) {
    for (std::size_t d = std::min(n, cap); d > 1; --d) {
        if (n % d == 0) return d;
    }
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// FriendlyContext

FriendlyContext FriendlyContext::create(const BigInt& p_in, RadixConfig cfg, std::optional<std::size_t> step) {
    cfg = RadixConfig::make(cfg.omega, cfg.n);
    if (p_in.omega() != cfg.omega) {
        throw RadixMismatch("friendly context: modulus radix does not match omega = " + std::to_string(cfg.omega));
    }
    const BigInt p = BigInt(cfg, std::vector<Limb>(p_in.limbs().begin(), p_in.limbs().end())).canonical();
    if ((p.limb(0) & 1) == 0) throw PreconditionError("friendly context: modulus " + to_hex(p) + " is even");
    if (p.bit_length() > cfg.omega * cfg.n) {
        throw PreconditionError("friendly context: modulus " + to_hex(p) + " does not fit in " +
                                std::to_string(cfg.n) + " limbs of " + std::to_string(cfg.omega) + " bits");
    }

    FriendlyContext ctx;
    ctx.cfg_ = cfg;
    ctx.p_ = p;
    const BigInt p_plus_1 = add(p, BigInt::from_u64(1, cfg));
    ctx.ell_ = trailing_zero_bits(p_plus_1);
    ctx.F_ = natural_width(shift_right_bits(p_plus_1, ctx.ell_));
    ctx.lambda_ = ctx.ell_ / cfg.omega;
    if (ctx.lambda_ < 2) {
        throw PreconditionError("friendly context: p + 1 has " + std::to_string(ctx.ell_) +
                                " trailing zero bits, fewer than the 2 limbs (" + std::to_string(2 * cfg.omega) +
                                " bits) the reference reduction needs");
    }
    ctx.M_ = shift_right_bits(p_plus_1, ctx.lambda_ * cfg.omega);
    ctx.R_ = BigInt::power_of_two(cfg.omega * cfg.n, cfg);
    ctx.pR_ = shift_limbs(p, -static_cast<long>(cfg.n));

    if (step) {
        if (*step < 2 || *step > ctx.lambda_) {
            throw PreconditionError("friendly context: step of " + std::to_string(*step) +
                                    " limbs is outside (1, lambda = " + std::to_string(ctx.lambda_) + "]");
        }
        ctx.m_ = *step;
    } else {
        const std::size_t d = largest_divisor_at_most(cfg.n, ctx.lambda_);
        ctx.m_ = d != 0 ? d : ctx.lambda_;
    }
    return ctx;
}

bool FriendlyContext::proposed_admissible() const noexcept {
    return hi_split() <= std::min(ell_ + cfg_.omega, 2 * ell_);
}

bool lazy_mode_allowed(const FriendlyContext& ctx) { return ctx.R() > shift_left_bits(ctx.p(), 2); }

// ---------------------------------------------------------------------------
// Reference: m limbs per step, quotient digit = low limbs of T.

FriendlyReferenceResult redc_friendly_reference(LaneMachine& machine, const BigInt& T, const FriendlyContext& ctx,
                                                Correction mode) {
    require_input(T, ctx, "redc_friendly_reference");
    const OpCounts before = machine.counts();
    const RadixConfig& cfg = ctx.cfg();
    const WideAdder wide_add(machine, cfg);
    FriendlyReferenceResult out;
    FriendlyReferenceTrace& tr = out.trace;

    auto step = [&](const BigInt& value, std::size_t limbs) {
        const std::size_t bits = limbs * cfg.omega;
        const BigInt q = low_bits(value, bits).resized(limbs);
        const ProductResult qf = mul_schoolbook(q, ctx.F());
        machine.count_products(qf.limb_products);
        const BigInt numerator = wide_add(value, shift_left_bits(qf.value, ctx.ell()));
        if (!(low_bits(numerator, bits) == q)) {
            throw ContractViolation("redc_friendly_reference: T + pQ not divisible by 2^" + std::to_string(bits));
        }
        tr.q_steps.push_back(q);
        return shift_right_bits(numerator, bits);
    };

    BigInt value = T.canonical();
    tr.t_steps.push_back(value);
    for (std::size_t i = 0; i < ctx.lambda0(); ++i) {
        value = step(value, ctx.m());
        tr.t_steps.push_back(value);
    }
    if (ctx.lambda0_prime() != 0) {
        value = step(value, ctx.lambda0_prime());
        tr.t_steps.push_back(value);
    }

    tr.pre_correction = value;
    if (mode == Correction::Full && value >= ctx.p()) {
        value = sub(value, ctx.p());
        ++tr.corrections;
    }
    const BigInt limit = mode == Correction::Full ? ctx.p() : add(ctx.p(), ctx.p());
    if (value >= limit) throw ContractViolation("redc_friendly_reference: result above its bound after correction");
    out.value = value.resized(cfg.n);
    tr.counts = counts_since(machine, before);
    return out;
}

FriendlyReferenceResult redc_friendly_reference(const BigInt& T, const FriendlyContext& ctx, Correction mode) {
    LaneMachine machine;
    return redc_friendly_reference(machine, T, ctx, mode);
}

// ---------------------------------------------------------------------------
// Proposed: two half-width steps.

FriendlyResult redc_friendly_proposed(LaneMachine& machine, const BigInt& T, const FriendlyContext& ctx,
                                      Correction mode) {
    if (!ctx.proposed_admissible()) {
        throw PreconditionError("redc_friendly_proposed: split of " + std::to_string(ctx.hi_split()) +
                                " bits exceeds min(l + w, 2l) for l = " + std::to_string(ctx.ell()));
    }
    require_input(T, ctx, "redc_friendly_proposed");
    const OpCounts before = machine.counts();
    const RadixConfig& cfg = ctx.cfg();
    const WideAdder wide_add(machine, cfg);
    FriendlyResult out;
    FriendlyTrace& tr = out.trace;

    // Returns (T^(i), t^(i), Q^(i)).
    auto step = [&](const BigInt& value, std::size_t split, bool with_t) {
        BigInt t(cfg);
        if (with_t) {
            machine.count_products(1);
            const Limb low = static_cast<Limb>(Wide{value.limb(0)} * ctx.F().limb(0)) & cfg.limb_mask();
            t = shift_left_bits(BigInt::from_u64(low, cfg), ctx.ell());
            const BigInt expected = shift_left_bits(mul(low_bits(value, split), ctx.F()), ctx.ell());
            if (!(low_bits(t, split) == low_bits(expected, split))) {
                throw ContractViolation("redc_friendly_proposed: correction term is not T F 2^l mod 2^" +
                                        std::to_string(split));
            }
        }
        const BigInt q = low_bits(with_t ? wide_add(value, t) : value, split);

        const std::size_t q_limbs = (split + cfg.omega - 1) / cfg.omega;
        const std::size_t len = std::max(q_limbs, ctx.F().size());
        const ProductResult qf = mul_karatsuba(q.resized(len), ctx.F().resized(len), 2);
        tr.karatsuba_products += qf.limb_products;
        // The low limb of Q equals T_0 when l >= w, so Q_0 F_0 is the product
        // already formed for t.
        const bool reused = with_t && ctx.ell() >= cfg.omega;
        machine.count_products(qf.limb_products - (reused ? 1 : 0));

        const BigInt numerator = wide_add(value, shift_left_bits(qf.value, ctx.ell()));
        // numerator = T + pQ + Q with Q < 2^split.
        tr.remainders.push_back(low_bits(sub(numerator, q), split));
        if (!tr.remainders.back().is_zero()) {
            throw ContractViolation("redc_friendly_proposed: T + pQ not divisible by 2^" + std::to_string(split));
        }
        return std::tuple{shift_right_bits(numerator, split), t, q};
    };

    BigInt value = T.canonical();
    tr.t_steps.push_back(value);
    auto [t1_value, t1, q1] = step(value, ctx.hi_split(), true);
    tr.t1 = t1;
    tr.q1 = q1;
    tr.t_steps.push_back(t1_value);

    const bool odd = cfg.n % 2 != 0;
    auto [t2_value, t2, q2] = step(t1_value, odd ? ctx.lo_split() : ctx.hi_split(), !odd);
    if (!odd) tr.t2 = t2;
    tr.q2 = q2;
    tr.t_steps.push_back(t2_value);

    value = t2_value;
    tr.pre_correction = value;
    if (value >= add(ctx.p(), ctx.p())) {
        throw ContractViolation("redc_friendly_proposed: pre-correction value " + to_hex(value) + " is not below 2p");
    }
    if (mode == Correction::Full && value >= ctx.p()) {
        value = sub(value, ctx.p());
        ++tr.corrections;
    }
    out.value = value.resized(cfg.n);
    tr.counts = counts_since(machine, before);
    return out;
}

FriendlyResult redc_friendly_proposed(const BigInt& T, const FriendlyContext& ctx, Correction mode) {
    LaneMachine machine;
    return redc_friendly_proposed(machine, T, ctx, mode);
}

}  // namespace mpsimd
