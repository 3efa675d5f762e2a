#pragma once

// Montgomery reduction for an arbitrary odd modulus.
//
// redc_reference is the word-by-word algorithm: n serial steps, each needing
// the previous step's result. redc_proposed precomputes
// M_i = r^(-n+i+1) mod p so that the contributions of the low n-2 limbs of T
// become independent n x 1 products, leaving only two serial steps.

#include <optional>
#include <vector>

#include "mpsimd/lanes.hpp"
#include "mpsimd/limbs.hpp"
#include "mpsimd/simd_add.hpp"

namespace mpsimd {

// Full: result < p. Lazy: result < 2p (only meaningful when R > 4p).
enum class Correction { Full, Lazy };

class PrimeContext {
public:
    // Throws PreconditionError for even p or p >= 2^(omega*n).
    static PrimeContext create(const BigInt& p, RadixConfig cfg);
    // Uses the supplied M_1..M_{n-2} instead of deriving them. Every entry is
    // validated (M_i < p and M_i * r^(n-i-1) = 1 mod p); a bad table throws
    // PreconditionError naming the first inconsistent index.
    static PrimeContext with_m_table(const BigInt& p, RadixConfig cfg, std::vector<BigInt> m_table);

    const BigInt& p() const noexcept { return p_; }
    const RadixConfig& cfg() const noexcept { return cfg_; }
    const BigInt& r() const noexcept { return r_; }
    const BigInt& R() const noexcept { return R_; }
    const BigInt& pR() const noexcept { return pR_; }
    Limb p_prime() const noexcept { return p_prime_; }
    // M_1 .. M_{n-2} stored at indices 0 .. n-3.
    const std::vector<BigInt>& m_table() const noexcept { return m_table_; }
    const BigInt& r2() const noexcept { return r2_; }
    // R > 4p.
    bool lazy_ok() const noexcept { return lazy_ok_; }
    // pR - (n-2) r^(n-1) p when positive; inputs below it never need the
    // second conditional subtraction.
    const std::optional<BigInt>& skip_threshold() const noexcept { return skip_threshold_; }
    // Limb width of the deferred multi-operand sum in redc_proposed.
    std::size_t sum_width() const noexcept { return sum_width_; }

private:
    PrimeContext() = default;
    static PrimeContext base(const BigInt& p, RadixConfig cfg);

    BigInt p_, r_, R_, pR_, r2_;
    RadixConfig cfg_{};
    Limb p_prime_ = 0;
    std::vector<BigInt> m_table_;
    bool lazy_ok_ = false;
    std::optional<BigInt> skip_threshold_;
    std::size_t sum_width_ = 0;
};

struct RedcTrace {
    // Reference: T^(0) .. T^(n). Proposed: T^(n-2), T^(n-1), T^(n).
    std::vector<BigInt> t_steps;
    std::vector<Limb> q_steps;
    // Low limb of each T^(i-1) + Qp before the division by r; always zero.
    std::vector<Limb> remainders;
    // Proposed only. digits[k] is the 1-indexed limb T_{k+1}; h[k] is H_{k+1}.
    std::vector<Limb> digits;
    std::vector<BigInt> h;
    BigInt pre_correction;
    unsigned corrections = 0;
    // Proposed only: whether the second conditional subtraction was checked.
    bool second_check_performed = false;
    OpCounts counts;
};

struct RedcResult {
    BigInt value;
    RedcTrace trace;
};

// T * R^-1 mod p. Throws PreconditionError unless T < pR, ContractViolation
// if an intermediate breaks exact division or the per-step growth bound.
RedcResult redc_reference(const BigInt& T, const PrimeContext& ctx, Correction mode = Correction::Full);
RedcResult redc_reference(LaneMachine& machine, const BigInt& T, const PrimeContext& ctx,
                          Correction mode = Correction::Full);

struct MulNx1 {
    LaneVector U;  // high halves
    LaneVector Y;  // low halves
};

// Lane-parallel product of an n-limb value with one limb; n limb products.
MulNx1 simd_mul_nx1(LaneMachine& machine, const BigInt& M, Limb scalar);
// Recombines sum U_j 2^(w(j+1)) + sum Y_j 2^(wj).
BigInt recompose(const MulNx1& parts, RadixConfig cfg);

// Same contract as redc_reference; n <= 2 delegates to it. The deferred sum
// and the serial-step additions use `strategy`, by default
// AddStrategy::default_for(ctx.cfg()).
RedcResult redc_proposed(const BigInt& T, const PrimeContext& ctx, Correction mode = Correction::Full,
                         std::optional<AddStrategy> strategy = std::nullopt);
RedcResult redc_proposed(LaneMachine& machine, const BigInt& T, const PrimeContext& ctx,
                         Correction mode = Correction::Full, std::optional<AddStrategy> strategy = std::nullopt);

// True iff T >= pR - (n-2) r^(n-1) p.
bool needs_second_correction(const BigInt& T, const PrimeContext& ctx);

// (T * R^-1) mod p via the modular-inverse and long-division oracles.
BigInt redc_oracle(const BigInt& T, const BigInt& p, RadixConfig cfg);

}  // namespace mpsimd
