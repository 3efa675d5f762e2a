#include "mpsimd/mont_generic.hpp"

#include <string>

#include "mpsimd/errors.hpp"

namespace mpsimd {

namespace {

OpCounts counts_since(const LaneMachine& machine, const OpCounts& before) {
    OpCounts diff = machine.counts();
    for (const auto& [name, field] : OpCounts::fields()) diff.*field -= before.*field;
    return diff;
}

void require_input(const BigInt& T, const PrimeContext& ctx, const char* op) {
    if (T.omega() != ctx.cfg().omega) {
        throw RadixMismatch(std::string(op) + ": input radix 2^" + std::to_string(T.omega()) +
                            " does not match the context's 2^" + std::to_string(ctx.cfg().omega));
    }
    if (T >= ctx.pR()) {
        throw PreconditionError(std::string(op) + ": input " + to_hex(T) + " is not below pR = " + to_hex(ctx.pR()));
    }
}

Limb quotient_digit(LaneMachine& machine, Limb low, Limb p_prime, RadixConfig cfg) {
    machine.count_products(1);
    return static_cast<Limb>(Wide{low} * p_prime) & cfg.limb_mask();
}

// The n serial steps of word-by-word reduction, without the final correction.
BigInt reference_steps(LaneMachine& machine, BigInt T, const BigInt& p, Limb p_prime, RadixConfig cfg,
                       RedcTrace* trace) {
    const std::size_t n = cfg.n;
    if (trace) trace->t_steps.push_back(T.canonical());
    for (std::size_t i = 1; i <= n; ++i) {
        const Limb q = quotient_digit(machine, T.limb(0), p_prime, cfg);
        machine.count_products(n);
        machine.count_scalar_adds(n + 1);
        const BigInt numerator = add(T, mul_small(p, q));
        if (trace) trace->remainders.push_back(numerator.limb(0));
        if (numerator.limb(0) != 0) {
            throw ContractViolation("reference reduction: T + Qp not divisible by r at step " + std::to_string(i));
        }
        T = shift_limbs(numerator, 1);
        const BigInt bound = add(shift_limbs(p, -static_cast<long>(n - i)), p);
        if (T >= bound) {
            throw ContractViolation("reference reduction: T^(" + std::to_string(i) + ") exceeds p*r^(n-i) + p");
        }
        if (trace) {
            trace->q_steps.push_back(q);
            trace->t_steps.push_back(T);
        }
    }
    return T;
}

}  // namespace

// ---------------------------------------------------------------------------
// PrimeContext

PrimeContext PrimeContext::base(const BigInt& p_in, RadixConfig cfg) {
    cfg = RadixConfig::make(cfg.omega, cfg.n);
    if (p_in.omega() != cfg.omega) {
        throw RadixMismatch("prime context: modulus radix does not match omega = " + std::to_string(cfg.omega));
    }
    const BigInt p = BigInt(cfg, std::vector<Limb>(p_in.limbs().begin(), p_in.limbs().end())).canonical();
    if ((p.limb(0) & 1) == 0) throw PreconditionError("prime context: modulus " + to_hex(p) + " is even");
    if (p.bit_length() > cfg.omega * cfg.n) {
        throw PreconditionError("prime context: modulus " + to_hex(p) + " does not fit in " + std::to_string(cfg.n) +
                                " limbs of " + std::to_string(cfg.omega) + " bits");
    }

    PrimeContext ctx;
    ctx.cfg_ = cfg;
    ctx.p_ = p;
    ctx.r_ = BigInt::power_of_two(cfg.omega, cfg);
    ctx.R_ = BigInt::power_of_two(cfg.omega * cfg.n, cfg);
    ctx.pR_ = shift_limbs(p, -static_cast<long>(cfg.n));

    const BigInt inv = modinv_oracle(low_bits(p, cfg.omega), ctx.r_);
    ctx.p_prime_ = inv.is_zero() ? 0 : sub(ctx.r_, inv).limb(0);
    ctx.r2_ = mod(BigInt::power_of_two(2 * cfg.omega * cfg.n, cfg), p);
    ctx.lazy_ok_ = ctx.R_ > shift_left_bits(p, 2);

    const std::size_t n = cfg.n;
    if (n >= 2) {
        const BigInt excess = mul_small(shift_limbs(p, -static_cast<long>(n - 1)), n - 2);
        if (ctx.pR_ > excess) ctx.skip_threshold_ = sub(ctx.pR_, excess);
    } else {
        ctx.skip_threshold_ = add(ctx.pR_, p);
    }

    // T^(n-2) < p r^2 + (n-2) p r; a serial step adds at most p r more.
    const BigInt bound = add(shift_limbs(p, -2), mul_small(shift_limbs(p, -1), n > 2 ? n - 1 : 1));
    const std::size_t bound_limbs = (bound.bit_length() + cfg.omega - 1) / cfg.omega;
    ctx.sum_width_ = std::max(bound_limbs, n + 2);
    return ctx;
}

PrimeContext PrimeContext::create(const BigInt& p, RadixConfig cfg) {
    PrimeContext ctx = base(p, cfg);
    const std::size_t n = ctx.cfg_.n;
    if (n <= 2) return ctx;

    // M_i = REDC(r^(i+1) mod p) = r^(i+1-n) mod p: derived without any
    // knowledge of the structure of p.
    LaneMachine scratch;
    std::vector<BigInt> table;
    for (std::size_t i = 1; i + 2 <= n; ++i) {
        const BigInt x = mod(BigInt::power_of_two((i + 1) * ctx.cfg_.omega, ctx.cfg_), ctx.p_);
        BigInt m = reference_steps(scratch, x, ctx.p_, ctx.p_prime_, ctx.cfg_, nullptr);
        if (m >= ctx.p_) m = sub(m, ctx.p_);
        table.push_back(m.resized(n));
    }

    // Cross-check against the inverse computed by extended Euclid.
    const BigInt r_inv = modinv_oracle(mod(ctx.r_, ctx.p_), ctx.p_);
    BigInt expected = BigInt::from_u64(1, ctx.cfg_);
    for (std::size_t i = n - 2; i >= 1; --i) {
        expected = mulmod(expected, r_inv, ctx.p_);
        if (!(mod(table[i - 1], ctx.p_) == mod(expected, ctx.p_))) {
            throw ContractViolation("prime context: REDC-derived M_" + std::to_string(i) +
                                    " disagrees with the modular-inverse oracle");
        }
    }
    ctx.m_table_ = std::move(table);
    return ctx;
}

PrimeContext PrimeContext::with_m_table(const BigInt& p, RadixConfig cfg, std::vector<BigInt> m_table) {
    PrimeContext ctx = base(p, cfg);
    const std::size_t n = ctx.cfg_.n;
    const std::size_t expected_size = n > 2 ? n - 2 : 0;
    if (m_table.size() != expected_size) {
        throw PreconditionError("prime context: expected " + std::to_string(expected_size) + " precomputed constants, got " +
                                std::to_string(m_table.size()));
    }
    const BigInt one = mod(BigInt::from_u64(1, ctx.cfg_), ctx.p_);
    for (std::size_t i = 1; i <= m_table.size(); ++i) {
        const BigInt& m = m_table[i - 1];
        if (m.omega() != ctx.cfg_.omega || m >= ctx.p_ ||
            !(mulmod(m, mod(BigInt::power_of_two((n - i - 1) * ctx.cfg_.omega, ctx.cfg_), ctx.p_), ctx.p_) == one)) {
            throw PreconditionError("prime context: precomputed M_" + std::to_string(i) +
                                    " is inconsistent (M_i * r^(n-i-1) mod p != 1)");
        }
        m_table[i - 1] = m.resized(n);
    }
    ctx.m_table_ = std::move(m_table);
    return ctx;
}

// ---------------------------------------------------------------------------
// Reductions

RedcResult redc_reference(LaneMachine& machine, const BigInt& T, const PrimeContext& ctx, Correction mode) {
    require_input(T, ctx, "redc_reference");
    const OpCounts before = machine.counts();
    RedcResult out;
    BigInt value = reference_steps(machine, T, ctx.p(), ctx.p_prime(), ctx.cfg(), &out.trace);
    out.trace.pre_correction = value;
    if (mode == Correction::Full && value >= ctx.p()) {
        value = sub(value, ctx.p());
        ++out.trace.corrections;
    }
    if (value >= ctx.p() && mode == Correction::Full) {
        throw ContractViolation("redc_reference: result not below p after one subtraction");
    }
    out.value = value.resized(ctx.cfg().n);
    out.trace.counts = counts_since(machine, before);
    return out;
}

RedcResult redc_reference(const BigInt& T, const PrimeContext& ctx, Correction mode) {
    LaneMachine machine;
    return redc_reference(machine, T, ctx, mode);
}

MulNx1 simd_mul_nx1(LaneMachine& machine, const BigInt& M, Limb scalar) {
    const unsigned omega = M.omega();
    const LaneVector m = machine.load(std::vector<Limb>(M.limbs().begin(), M.limbs().end()), omega);
    const LaneVector s = machine.broadcast(scalar, M.size(), omega);
    WideProduct prod = machine.mul_wide(m, s);
    return {std::move(prod.hi), std::move(prod.lo)};
}

BigInt recompose(const MulNx1& parts, RadixConfig cfg) {
    return add(BigInt(cfg, parts.Y.lanes()), shift_limbs(BigInt(cfg, parts.U.lanes()), -1));
}

RedcResult redc_proposed(LaneMachine& machine, const BigInt& T, const PrimeContext& ctx, Correction mode,
                         std::optional<AddStrategy> strategy) {
    const RadixConfig& cfg = ctx.cfg();
    const std::size_t n = cfg.n;
    if (n <= 2) return redc_reference(machine, T, ctx, mode);
    require_input(T, ctx, "redc_proposed");
    const AddStrategy adder = strategy.value_or(AddStrategy::default_for(cfg));
    const std::size_t width = ctx.sum_width();
    const OpCounts before = machine.counts();
    RedcResult out;
    RedcTrace& tr = out.trace;

    auto accumulate = [&](const BigInt& acc, const BigInt& addend) {
        SimdAddResult r = simd_add(machine, acc, addend.resized(width), adder);
        if (r.carry_out) throw ContractViolation("redc_proposed: deferred sum overflowed its width");
        return std::move(r.sum);
    };
    auto add_columns = [&](BigInt acc, const MulNx1& parts) {
        acc = accumulate(acc, BigInt(cfg, parts.Y.lanes()));
        return accumulate(acc, shift_limbs(BigInt(cfg, parts.U.lanes()), -1));
    };

    // Independent products H_i = M_i * T_i, summed once at the end.
    std::vector<MulNx1> columns;
    for (std::size_t i = 1; i + 2 <= n; ++i) {
        const Limb digit = T.limb(i - 1);
        columns.push_back(simd_mul_nx1(machine, ctx.m_table()[i - 1], digit));
        tr.digits.push_back(digit);
        tr.h.push_back(recompose(columns.back(), cfg));
    }
    BigInt acc = shift_limbs(T, static_cast<long>(n - 2)).resized(width);
    for (const MulNx1& parts : columns) acc = add_columns(acc, parts);
    tr.t_steps.push_back(acc.canonical());

    // The two remaining serial steps.
    for (int step = 0; step < 2; ++step) {
        const Limb q = quotient_digit(machine, acc.limb(0), ctx.p_prime(), cfg);
        const BigInt numerator = add_columns(acc, simd_mul_nx1(machine, ctx.p(), q));
        tr.remainders.push_back(numerator.limb(0));
        if (numerator.limb(0) != 0) {
            throw ContractViolation("redc_proposed: T + Qp not divisible by r in serial step " + std::to_string(step + 1));
        }
        acc = shift_limbs(numerator, 1).resized(width);
        tr.q_steps.push_back(q);
        tr.t_steps.push_back(acc.canonical());
    }

    BigInt value = acc.canonical();
    tr.pre_correction = value;
    const BigInt two_p = add(ctx.p(), ctx.p());
    if (value >= add(two_p, ctx.p())) {
        throw ContractViolation("redc_proposed: pre-correction value " + to_hex(value) + " is not below 3p");
    }
    if (mode == Correction::Lazy) {
        if (value >= two_p) {
            value = sub(value, ctx.p());
            ++tr.corrections;
        }
    } else {
        if (value >= ctx.p()) {
            value = sub(value, ctx.p());
            ++tr.corrections;
        }
        tr.second_check_performed = needs_second_correction(T, ctx);
        if (value >= ctx.p()) {
            if (!tr.second_check_performed) {
                throw ContractViolation("redc_proposed: input below the skip threshold needed a second subtraction");
            }
            value = sub(value, ctx.p());
            ++tr.corrections;
        }
    }
    out.value = value.resized(n);
    tr.counts = counts_since(machine, before);
    return out;
}

RedcResult redc_proposed(const BigInt& T, const PrimeContext& ctx, Correction mode,
                         std::optional<AddStrategy> strategy) {
    LaneMachine machine;
    return redc_proposed(machine, T, ctx, mode, strategy);
}

bool needs_second_correction(const BigInt& T, const PrimeContext& ctx) {
    const auto& threshold = ctx.skip_threshold();
    return !threshold || T >= *threshold;
}

BigInt redc_oracle(const BigInt& T, const BigInt& p, RadixConfig cfg) {
    const BigInt R_mod = mod(BigInt::power_of_two(cfg.omega * cfg.n, cfg), p);
    return mulmod(T, modinv_oracle(R_mod, p), p).resized(cfg.n);
}

}  // namespace mpsimd
