#pragma once

// Multi-limb addition whose carries are obtained from one small byte-wise
// addition instead of a limb-to-limb carry chain.
//
// Each limb sum A_i + B_i is classified as N (never carries), P (propagates
// an incoming carry: sum == 2^w - 1) or G (always carries). A byte t_i is
// derived per lane and paired with a constant byte p_i so that t_i + p_i
// lands in the same class: <= 254, == 255 or >= 256. Adding the byte strings
// t and p with ordinary carries then reproduces every limb carry c_i as
// (s_i - t_i - p_i) mod 256.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpsimd/lanes.hpp"
#include "mpsimd/limbs.hpp"

namespace mpsimd {

class AddStrategy {
public:
    enum class Kind { NativePopcount, ReducedPopcount, ReducedSaturate };

    static AddStrategy native_popcount() { return AddStrategy(Kind::NativePopcount, 0); }
    // Throws std::invalid_argument unless 1 <= k <= 63.
    static AddStrategy reduced_popcount(unsigned k);
    static AddStrategy reduced_saturate(unsigned k);
    // "native-popcount", "reduced-popcount:<k>", "reduced-saturate:<k>".
    static AddStrategy parse(std::string_view name);
    // reduced-popcount:<omega> for reduced radices, native-popcount otherwise.
    static AddStrategy default_for(const RadixConfig& cfg);

    Kind kind() const noexcept { return kind_; }
    unsigned k() const noexcept { return k_; }
    std::string name() const;

    // Constant second operand byte for limbs of the given radix.
    std::uint8_t p_byte(const RadixConfig& cfg) const;
    // Throws PreconditionError if the strategy cannot handle the radix.
    void check_compatible(const RadixConfig& cfg) const;

    bool operator==(const AddStrategy&) const = default;

private:
    AddStrategy(Kind kind, unsigned k) : kind_(kind), k_(k) {}
    Kind kind_;
    unsigned k_;
};

enum class CarryCase : std::uint8_t { N, P, G };

char case_letter(CarryCase c);
// Class of a byte sum t + p: N below 255, P at 255, G at 256 and above.
CarryCase case_of_byte_sum(unsigned sum);

struct OperandBytes {
    LaneVector G;  // popcount or saturated sum per lane
    LaneVector m;  // carry masks (popcount strategies only)
    LaneVector t;  // 8-bit lanes
    LaneVector p;  // 8-bit lanes
};

struct SimulatedCarries {
    // c_0 .. c_{n-1}: carry into each limb.
    std::vector<std::uint8_t> c;
    // Carry out of the top byte; the carry out of the whole addition.
    bool carry_out = false;
    LaneVector s;  // 8-bit lanes
};

struct AddTrace {
    LaneVector D;  // lane sums before carry injection
    LaneVector G;
    LaneVector m;
    LaneVector t;
    LaneVector p;
    LaneVector s;
    // c_0 .. c_n, c_n being the carry out.
    std::vector<std::uint8_t> c;
    std::vector<CarryCase> cases;
    OpCounts counts;
};

struct SimdAddResult {
    BigInt sum;
    bool carry_out = false;
    AddTrace trace;
};

struct SimdSubResult {
    BigInt diff;
    bool borrow_out = false;
    AddTrace trace;
};

// Test oracle: the class of each limb sum, from scalar arithmetic.
std::vector<CarryCase> classify_cases(const BigInt& a, const BigInt& b);

// D must be the lane sum of a and b in the strategy's lane layout.
OperandBytes derive_tp(LaneMachine& machine, const LaneVector& D, const BigInt& a, const AddStrategy& strategy);

// Adds the byte strings with a full inter-byte carry chain (packed into
// 64-bit words, 8 bytes per scalar add) and recovers c_i. Throws
// ContractViolation if a recovered c_i is not 0 or 1.
SimulatedCarries simulate_carries(LaneMachine& machine, const LaneVector& t, const LaneVector& p);

// (a + b) mod 2^(w * width), width = max(a.size(), b.size()).
SimdAddResult simd_add(const BigInt& a, const BigInt& b, const AddStrategy& strategy);
SimdAddResult simd_add(LaneMachine& machine, const BigInt& a, const BigInt& b, const AddStrategy& strategy);

// (a - b) mod 2^(w * width) computed as a + ~b + 1, the +1 injected through a
// virtual generate-class byte below limb 0.
SimdSubResult simd_sub(const BigInt& a, const BigInt& b, const AddStrategy& strategy);
SimdSubResult simd_sub(LaneMachine& machine, const BigInt& a, const BigInt& b, const AddStrategy& strategy);

}  // namespace mpsimd
