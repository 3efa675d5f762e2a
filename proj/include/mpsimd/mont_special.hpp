#pragma once

// Montgomery reduction for moduli of the form p = 2^l * F - 1.
//
// Since p = -1 mod 2^l, the quotient digit of a reduction step over k <= l
// bits is just the low k bits of T, and p * Q = (Q * F) << l - Q. The
// reference algorithm reduces m limbs per step; the proposed algorithm
// reduces half the width per step, patching the quotient with a correction
// term t = (T_0 * F_0 mod 2^w) << l so that steps wider than l still work.

#include <optional>
#include <vector>

#include "mpsimd/lanes.hpp"
#include "mpsimd/limbs.hpp"
#include "mpsimd/mont_generic.hpp"

namespace mpsimd {

class FriendlyContext {
public:
    // step: limbs reduced per reference iteration. Defaults to the largest
    // divisor of n in (1, lambda], or lambda when n has no such divisor.
    // Throws PreconditionError for even p, p >= R, lambda < 2, or a step
    // outside (1, lambda].
    static FriendlyContext create(const BigInt& p, RadixConfig cfg, std::optional<std::size_t> step = std::nullopt);

    const BigInt& p() const noexcept { return p_; }
    const RadixConfig& cfg() const noexcept { return cfg_; }
    std::size_t ell() const noexcept { return ell_; }
    const BigInt& F() const noexcept { return F_; }
    std::size_t lambda() const noexcept { return lambda_; }
    std::size_t m() const noexcept { return m_; }
    // (p + 1) / 2^(lambda w).
    const BigInt& M() const noexcept { return M_; }
    std::size_t lambda0() const noexcept { return cfg_.n / m_; }
    std::size_t lambda0_prime() const noexcept { return cfg_.n % m_; }
    std::size_t hi_split() const noexcept { return (cfg_.n + 1) / 2 * cfg_.omega; }
    std::size_t lo_split() const noexcept { return cfg_.n / 2 * cfg_.omega; }
    // hi_split <= min(l + w, 2l): the proposed algorithm's requirement.
    bool proposed_admissible() const noexcept;
    const BigInt& R() const noexcept { return R_; }
    const BigInt& pR() const noexcept { return pR_; }

private:
    FriendlyContext() = default;

    BigInt p_, F_, M_, R_, pR_;
    RadixConfig cfg_{};
    std::size_t ell_ = 0, lambda_ = 0, m_ = 0;
};

struct FriendlyReferenceTrace {
    std::vector<BigInt> t_steps;
    std::vector<BigInt> q_steps;
    BigInt pre_correction;
    unsigned corrections = 0;
    OpCounts counts;
};

struct FriendlyReferenceResult {
    BigInt value;
    FriendlyReferenceTrace trace;
};

struct FriendlyTrace {
    BigInt t1;
    // Absent for odd n, whose second step needs no correction term.
    std::optional<BigInt> t2;
    BigInt q1, q2;
    // T^(0), T^(1), T^(2).
    std::vector<BigInt> t_steps;
    // (T^(i-1) + p Q^(i)) mod 2^split for each step; always zero.
    std::vector<BigInt> remainders;
    // Limb products charged to the two half-width multiplications.
    std::size_t karatsuba_products = 0;
    BigInt pre_correction;
    unsigned corrections = 0;
    OpCounts counts;
};

struct FriendlyResult {
    BigInt value;
    FriendlyTrace trace;
};

FriendlyReferenceResult redc_friendly_reference(const BigInt& T, const FriendlyContext& ctx,
                                                Correction mode = Correction::Full);
FriendlyReferenceResult redc_friendly_reference(LaneMachine& machine, const BigInt& T, const FriendlyContext& ctx,
                                                Correction mode = Correction::Full);

// Throws PreconditionError if the context is not admissible or T >= pR,
// ContractViolation if a step breaks its congruence, divisibility or bound.
FriendlyResult redc_friendly_proposed(const BigInt& T, const FriendlyContext& ctx,
                                      Correction mode = Correction::Full);
FriendlyResult redc_friendly_proposed(LaneMachine& machine, const BigInt& T, const FriendlyContext& ctx,
                                      Correction mode = Correction::Full);

// R > 4p.
bool lazy_mode_allowed(const FriendlyContext& ctx);

}  // namespace mpsimd
