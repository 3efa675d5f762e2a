#pragma once

// A portable model of SIMD register semantics.
//
// LaneVector holds one register's worth of unsigned lanes of a fixed width.
// LaneMachine executes lane-wise and cross-lane operations and counts them by
// instruction class. Counters belong to the machine, so two machines never
// share state; use one machine per counting scope.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "mpsimd/limbs.hpp"

namespace mpsimd {

// lane_mul_product counts individual omega x omega -> 2*omega products (one
// per active lane). Every other counter counts instructions.
struct OpCounts {
    std::uint64_t lane_add = 0;
    std::uint64_t lane_sub = 0;
    std::uint64_t lane_mul_product = 0;
    std::uint64_t lane_popcount = 0;
    std::uint64_t lane_compare = 0;
    std::uint64_t lane_saturating = 0;
    std::uint64_t lane_masked_add = 0;
    std::uint64_t lane_logic = 0;
    std::uint64_t cross_lane = 0;
    std::uint64_t scalar_add = 0;
    std::uint64_t loads = 0;

    using Field = std::uint64_t OpCounts::*;
    static constexpr std::array<std::pair<std::string_view, Field>, 11> fields() {
        return {{{"lane_add", &OpCounts::lane_add},
                 {"lane_sub", &OpCounts::lane_sub},
                 {"lane_mul_product", &OpCounts::lane_mul_product},
                 {"lane_popcount", &OpCounts::lane_popcount},
                 {"lane_compare", &OpCounts::lane_compare},
                 {"lane_saturating", &OpCounts::lane_saturating},
                 {"lane_masked_add", &OpCounts::lane_masked_add},
                 {"lane_logic", &OpCounts::lane_logic},
                 {"cross_lane", &OpCounts::cross_lane},
                 {"scalar_add", &OpCounts::scalar_add},
                 {"loads", &OpCounts::loads}}};
    }

    std::uint64_t total() const noexcept;
    OpCounts& operator+=(const OpCounts& other) noexcept;
    friend OpCounts operator+(OpCounts a, const OpCounts& b) noexcept { return a += b; }
    bool operator==(const OpCounts&) const = default;
};

class LaneVector {
public:
    LaneVector() = default;
    // Throws std::invalid_argument if a value does not fit in lane_bits.
    LaneVector(std::vector<std::uint64_t> lanes, unsigned lane_bits);

    static LaneVector zeros(std::size_t count, unsigned lane_bits);
    static LaneVector filled(std::size_t count, unsigned lane_bits, std::uint64_t value);
    // Limbs of a BigInt, one limb per lane, lanes of omega bits.
    static LaneVector from_limbs(const BigInt& a, std::size_t count);
    static LaneVector from_limbs(const BigInt& a) { return from_limbs(a, a.size()); }

    std::size_t count() const noexcept { return lanes_.size(); }
    unsigned lane_bits() const noexcept { return lane_bits_; }
    std::uint64_t max_value() const noexcept;
    std::uint64_t operator[](std::size_t i) const { return lanes_.at(i); }
    const std::vector<std::uint64_t>& lanes() const noexcept { return lanes_; }

    bool operator==(const LaneVector&) const = default;

private:
    std::vector<std::uint64_t> lanes_;
    unsigned lane_bits_ = 64;
};

struct WideProduct {
    LaneVector hi;
    LaneVector lo;
};

class LaneMachine {
public:
    const OpCounts& counts() const noexcept { return counts_; }
    OpCounts take_counts() noexcept { return std::exchange(counts_, OpCounts{}); }
    void reset() noexcept { counts_ = OpCounts{}; }

    LaneVector add(const LaneVector& a, const LaneVector& b);
    LaneVector sub(const LaneVector& a, const LaneVector& b);

    // High and low halves of the per-lane 2w-bit product. A paired call
    // counts each lane's product once; either half alone also counts once.
    WideProduct mul_wide(const LaneVector& a, const LaneVector& b);
    LaneVector mul_hi(const LaneVector& a, const LaneVector& b);
    LaneVector mul_lo(const LaneVector& a, const LaneVector& b);

    LaneVector saturating_add(const LaneVector& a, const LaneVector& b);
    LaneVector saturating_sub(const LaneVector& a, const LaneVector& b);
    LaneVector popcount(const LaneVector& a);

    // Per-lane 0/1 masks in lanes of the operands' width.
    LaneVector less_than(const LaneVector& a, const LaneVector& b);
    LaneVector greater_equal(const LaneVector& a, const LaneVector& b);

    // a_i + addend where mask_i != 0, else a_i (wrapping).
    LaneVector masked_add(const LaneVector& a, std::uint64_t addend, const LaneVector& mask);

    LaneVector bit_and(const LaneVector& a, const LaneVector& b);
    LaneVector bit_or(const LaneVector& a, const LaneVector& b);
    LaneVector bit_xor(const LaneVector& a, const LaneVector& b);

    // Cross-lane: least-significant byte of each lane into consecutive 8-bit
    // lanes. Throws std::invalid_argument if a lane holds a value >= 256.
    LaneVector byte_gather(const LaneVector& a);
    // Cross-lane: widen 8-bit lanes into lanes of lane_bits.
    LaneVector byte_scatter(const LaneVector& bytes, unsigned lane_bits);
    // Cross-lane: lane i receives lane i - distance; the low lanes get `fill`.
    LaneVector slide_up(const LaneVector& a, std::size_t distance, std::uint64_t fill = 0);
    // Cross-lane broadcast of a general-purpose value.
    LaneVector broadcast(std::uint64_t value, std::size_t count, unsigned lane_bits);
    // Memory load of a constant vector.
    LaneVector load(std::vector<std::uint64_t> values, unsigned lane_bits);

    void count_scalar_adds(std::uint64_t n) noexcept { counts_.scalar_add += n; }
    void count_products(std::uint64_t n) noexcept { counts_.lane_mul_product += n; }

private:
    OpCounts counts_;
};

// Carry bits c_0 .. c_n of a + b computed by a log-depth parallel prefix over
// per-limb (generate, propagate) pairs. Agrees with add_carry_propagate.
std::vector<std::uint8_t> kogge_stone_carries(const BigInt& a, const BigInt& b, LaneMachine& machine);
std::vector<std::uint8_t> kogge_stone_carries(const BigInt& a, const BigInt& b);

}  // namespace mpsimd
