#include "mpsimd/lanes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace mpsimd {

namespace {

std::uint64_t mask_for(unsigned bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void require_shape(const LaneVector& a, const LaneVector& b, const char* op) {
    if (a.count() != b.count() || a.lane_bits() != b.lane_bits()) {
        throw std::invalid_argument(std::string(op) + ": lane shape mismatch (" + std::to_string(a.count()) + "x" +
                                    std::to_string(a.lane_bits()) + " vs " + std::to_string(b.count()) + "x" +
                                    std::to_string(b.lane_bits()) + ")");
    }
}

template <class Fn>
LaneVector lanewise(const LaneVector& a, const LaneVector& b, unsigned out_bits, Fn&& fn) {
    std::vector<std::uint64_t> out(a.count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(a[i], b[i]);
    return LaneVector(std::move(out), out_bits);
}

}  // namespace

std::uint64_t OpCounts::total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& [name, field] : fields()) sum += this->*field;
    return sum;
}

OpCounts& OpCounts::operator+=(const OpCounts& other) noexcept {
    for (const auto& [name, field] : fields()) this->*field += other.*field;
    return *this;
}

LaneVector::LaneVector(std::vector<std::uint64_t> lanes, unsigned lane_bits)
    : lanes_(std::move(lanes)), lane_bits_(lane_bits) {
    if (lane_bits_ < 1 || lane_bits_ > 64) {
        throw std::invalid_argument("lane width must be in 1..64, got " + std::to_string(lane_bits_));
    }
    const std::uint64_t mask = max_value();
    for (std::size_t i = 0; i < lanes_.size(); ++i) {
        if ((lanes_[i] & ~mask) != 0) {
            throw std::invalid_argument("lane " + std::to_string(i) + " value exceeds " + std::to_string(lane_bits_) +
                                        " bits");
        }
    }
}

LaneVector LaneVector::zeros(std::size_t count, unsigned lane_bits) {
    return LaneVector(std::vector<std::uint64_t>(count, 0), lane_bits);
}

LaneVector LaneVector::filled(std::size_t count, unsigned lane_bits, std::uint64_t value) {
    return LaneVector(std::vector<std::uint64_t>(count, value), lane_bits);
}

LaneVector LaneVector::from_limbs(const BigInt& a, std::size_t count) {
    std::vector<std::uint64_t> lanes(count);
    for (std::size_t i = 0; i < count; ++i) lanes[i] = a.limb(i);
    return LaneVector(std::move(lanes), a.omega());
}

std::uint64_t LaneVector::max_value() const noexcept { return mask_for(lane_bits_); }

LaneVector LaneMachine::add(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_add");
    ++counts_.lane_add;
    const auto mask = a.max_value();
    return lanewise(a, b, a.lane_bits(), [mask](auto x, auto y) { return (x + y) & mask; });
}

LaneVector LaneMachine::sub(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_sub");
    ++counts_.lane_sub;
    const auto mask = a.max_value();
    return lanewise(a, b, a.lane_bits(), [mask](auto x, auto y) { return (x - y) & mask; });
}

WideProduct LaneMachine::mul_wide(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_mul");
    counts_.lane_mul_product += a.count();
    const unsigned bits = a.lane_bits();
    const auto mask = a.max_value();
    std::vector<std::uint64_t> hi(a.count()), lo(a.count());
    for (std::size_t i = 0; i < a.count(); ++i) {
        const Wide prod = Wide{a[i]} * b[i];
        lo[i] = static_cast<std::uint64_t>(prod) & mask;
        hi[i] = static_cast<std::uint64_t>(prod >> bits) & mask;
    }
    return {LaneVector(std::move(hi), bits), LaneVector(std::move(lo), bits)};
}

LaneVector LaneMachine::mul_hi(const LaneVector& a, const LaneVector& b) { return mul_wide(a, b).hi; }

LaneVector LaneMachine::mul_lo(const LaneVector& a, const LaneVector& b) { return mul_wide(a, b).lo; }

LaneVector LaneMachine::saturating_add(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_saturating_add");
    ++counts_.lane_saturating;
    const auto max = a.max_value();
    return lanewise(a, b, a.lane_bits(), [max](auto x, auto y) { return y > max - x ? max : x + y; });
}

LaneVector LaneMachine::saturating_sub(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_saturating_sub");
    ++counts_.lane_saturating;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) { return x > y ? x - y : 0; });
}

LaneVector LaneMachine::popcount(const LaneVector& a) {
    ++counts_.lane_popcount;
    std::vector<std::uint64_t> out(a.count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint64_t>(std::popcount(a[i]));
    return LaneVector(std::move(out), a.lane_bits());
}

LaneVector LaneMachine::less_than(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_lt");
    ++counts_.lane_compare;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) -> std::uint64_t { return x < y ? 1 : 0; });
}

LaneVector LaneMachine::greater_equal(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_ge");
    ++counts_.lane_compare;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) -> std::uint64_t { return x >= y ? 1 : 0; });
}

LaneVector LaneMachine::masked_add(const LaneVector& a, std::uint64_t addend, const LaneVector& mask) {
    if (a.count() != mask.count()) throw std::invalid_argument("lane_masked_add: lane count mismatch");
    ++counts_.lane_masked_add;
    const auto m = a.max_value();
    std::vector<std::uint64_t> out(a.count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask[i] != 0 ? (a[i] + addend) & m : a[i];
    return LaneVector(std::move(out), a.lane_bits());
}

LaneVector LaneMachine::bit_and(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_and");
    ++counts_.lane_logic;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) { return x & y; });
}

LaneVector LaneMachine::bit_or(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_or");
    ++counts_.lane_logic;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) { return x | y; });
}

LaneVector LaneMachine::bit_xor(const LaneVector& a, const LaneVector& b) {
    require_shape(a, b, "lane_xor");
    ++counts_.lane_logic;
    return lanewise(a, b, a.lane_bits(), [](auto x, auto y) { return x ^ y; });
}

LaneVector LaneMachine::byte_gather(const LaneVector& a) {
    std::vector<std::uint64_t> out(a.count());
    for (std::size_t i = 0; i < a.count(); ++i) {
        if (a[i] >= 256) {
            throw std::invalid_argument("byte_gather: lane " + std::to_string(i) + " holds " + std::to_string(a[i]) +
                                        ", which does not fit in a byte");
        }
        out[i] = a[i];
    }
    ++counts_.cross_lane;
    return LaneVector(std::move(out), 8);
}

LaneVector LaneMachine::byte_scatter(const LaneVector& bytes, unsigned lane_bits) {
    ++counts_.cross_lane;
    return LaneVector(bytes.lanes(), lane_bits);
}

LaneVector LaneMachine::slide_up(const LaneVector& a, std::size_t distance, std::uint64_t fill) {
    ++counts_.cross_lane;
    std::vector<std::uint64_t> out(a.count(), fill);
    for (std::size_t i = distance; i < a.count(); ++i) out[i] = a[i - distance];
    return LaneVector(std::move(out), a.lane_bits());
}

LaneVector LaneMachine::broadcast(std::uint64_t value, std::size_t count, unsigned lane_bits) {
    ++counts_.cross_lane;
    return LaneVector::filled(count, lane_bits, value);
}

LaneVector LaneMachine::load(std::vector<std::uint64_t> values, unsigned lane_bits) {
    ++counts_.loads;
    return LaneVector(std::move(values), lane_bits);
}

std::vector<std::uint8_t> kogge_stone_carries(const BigInt& a, const BigInt& b, LaneMachine& machine) {
    if (a.omega() != b.omega()) throw RadixMismatch("kogge_stone_carries: operands use different radices");
    const std::size_t width = std::max(a.size(), b.size());
    const unsigned omega = a.omega();
    const LaneVector va = LaneVector::from_limbs(a, width);
    const LaneVector vb = LaneVector::from_limbs(b, width);

    // generate: A_i + B_i >= 2^w (the lane sum wrapped); propagate: sum == 2^w - 1.
    const LaneVector d = machine.add(va, vb);
    LaneVector gen = machine.less_than(d, va);
    const LaneVector all_ones = machine.broadcast(mask_for(omega), width, omega);
    LaneVector prop = machine.greater_equal(d, all_ones);

    // Prefix over (g, p) with (g, p) o (g', p') = (g | (p & g'), p & p').
    for (std::size_t distance = 1; distance < width; distance *= 2) {
        const LaneVector gen_lo = machine.slide_up(gen, distance, 0);
        const LaneVector prop_lo = machine.slide_up(prop, distance, 0);
        gen = machine.bit_or(gen, machine.bit_and(prop, gen_lo));
        prop = machine.bit_and(prop, prop_lo);
    }

    std::vector<std::uint8_t> carries(width + 1, 0);
    for (std::size_t i = 0; i < width; ++i) carries[i + 1] = static_cast<std::uint8_t>(gen[i]);
    return carries;
}

std::vector<std::uint8_t> kogge_stone_carries(const BigInt& a, const BigInt& b) {
    LaneMachine machine;
    return kogge_stone_carries(a, b, machine);
}

}  // namespace mpsimd
