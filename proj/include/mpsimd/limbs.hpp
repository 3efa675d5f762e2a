#pragma once

// Radix-2^omega multi-precision integers.
//
// A BigInt is a little-endian sequence of limbs, each stored in a 64-bit
// word and interpreted modulo 2^omega. For a reduced radix (omega < 64) the
// unused high bits of every word are zero. Values are immutable; all
// arithmetic below is pure.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpsimd/errors.hpp"

namespace mpsimd {

using Limb = std::uint64_t;
__extension__ typedef unsigned __int128 Wide;

struct RadixConfig {
    unsigned omega = 64;
    std::size_t n = 1;

    static RadixConfig make(unsigned omega, std::size_t n);

    constexpr bool reduced() const noexcept { return omega < 64; }
    constexpr Limb limb_mask() const noexcept {
        return omega >= 64 ? ~Limb{0} : (Limb{1} << omega) - 1;
    }

    bool operator==(const RadixConfig&) const = default;
};

class BigInt {
public:
    BigInt() = default;
    // Zero with cfg.n limbs.
    explicit BigInt(RadixConfig cfg);
    // Throws std::invalid_argument if a limb does not fit in omega bits.
    BigInt(RadixConfig cfg, std::vector<Limb> limbs);

    static BigInt from_u64(std::uint64_t value, RadixConfig cfg);
    // 2^bits, at least cfg.n limbs wide.
    static BigInt power_of_two(std::size_t bits, RadixConfig cfg);

    const RadixConfig& cfg() const noexcept { return cfg_; }
    unsigned omega() const noexcept { return cfg_.omega; }
    std::span<const Limb> limbs() const noexcept { return limbs_; }
    std::size_t size() const noexcept { return limbs_.size(); }
    // Limb i, or zero past the stored width.
    Limb limb(std::size_t i) const noexcept { return i < limbs_.size() ? limbs_[i] : 0; }

    bool is_zero() const noexcept;
    std::size_t bit_length() const noexcept;
    // Number of limbs up to and including the highest non-zero one (>= 1).
    std::size_t significant_limbs() const noexcept;
    bool bit(std::size_t index) const noexcept;
    // Low 64 bits of the value.
    std::uint64_t low_u64() const noexcept;

    // Zero-extends or truncates (truncation reduces mod 2^(omega*count)).
    BigInt resized(std::size_t count) const;
    // Same value with at least cfg.n limbs and no zero limbs beyond that.
    BigInt canonical() const;

    // Value equality within one radix; zero padding is ignored.
    friend bool operator==(const BigInt& a, const BigInt& b);

private:
    RadixConfig cfg_{};
    std::vector<Limb> limbs_;
};

enum class Ordering { Less, Equal, Greater };

struct DivModResult {
    BigInt quotient;
    BigInt remainder;
};

struct CarryAddResult {
    BigInt sum;
    bool carry_out = false;
    // c_0 .. c_width, c_0 = 0.
    std::vector<std::uint8_t> carries;
};

struct BorrowSubResult {
    BigInt diff;
    bool borrow_out = false;
};

struct ProductResult {
    BigInt value;
    // Number of omega x omega -> 2*omega limb products performed.
    std::size_t limb_products = 0;
};

// Parses hexadecimal with an optional 0x/0X prefix. The result has at least
// cfg.n limbs, more if the value needs them.
BigInt from_hex(std::string_view text, RadixConfig cfg);
// Lowercase, "0x"-prefixed, no leading zeros ("0x0" for zero).
std::string to_hex(const BigInt& a);

// Throws RadixMismatch when the configurations differ.
Ordering compare(const BigInt& a, const BigInt& b);

// Width is max(a.size(), b.size()); the shorter operand is zero-extended.
CarryAddResult add_carry_propagate(const BigInt& a, const BigInt& b);
BorrowSubResult sub_borrow_propagate(const BigInt& a, const BigInt& b);
// Precomputes both candidate sums and carries per limb, then selects.
CarryAddResult add_carry_select(const BigInt& a, const BigInt& b);

// k > 0: floor(a / r^k); k < 0: a * r^-k.
BigInt shift_limbs(const BigInt& a, long k);

ProductResult mul_schoolbook(const BigInt& a, const BigInt& b);
// Recursive Karatsuba. Operands are zero-padded to a common even length;
// operands of at most base_threshold limbs fall back to schoolbook. With the
// default threshold a 4x4-limb product costs 12 limb products.
ProductResult mul_karatsuba(const BigInt& a, const BigInt& b, std::size_t base_threshold = 2);
// Schoolbook squaring using the symmetry of cross products.
ProductResult square_schoolbook(const BigInt& a);

// Plain long division; a correctness oracle, not a fast path.
DivModResult divmod_oracle(const BigInt& a, const BigInt& m);
// Extended Euclid. Throws NotInvertible when gcd(a, m) != 1.
BigInt modinv_oracle(const BigInt& a, const BigInt& m);

BigInt radix_convert(const BigInt& a, RadixConfig to);

// Growing helpers used by the reduction algorithms.
BigInt add(const BigInt& a, const BigInt& b);
// Requires a >= b.
BigInt sub(const BigInt& a, const BigInt& b);
BigInt mul(const BigInt& a, const BigInt& b);
BigInt mul_small(const BigInt& a, Limb factor);
BigInt shift_left_bits(const BigInt& a, std::size_t bits);
BigInt shift_right_bits(const BigInt& a, std::size_t bits);
// a mod 2^bits.
BigInt low_bits(const BigInt& a, std::size_t bits);
// Number of trailing zero bits; bit_length() for zero.
std::size_t trailing_zero_bits(const BigInt& a);
BigInt mod(const BigInt& a, const BigInt& m);
BigInt mulmod(const BigInt& a, const BigInt& b, const BigInt& m);

bool operator<(const BigInt& a, const BigInt& b);
bool operator<=(const BigInt& a, const BigInt& b);
bool operator>(const BigInt& a, const BigInt& b);
bool operator>=(const BigInt& a, const BigInt& b);

// Uniform limbs; `count` limbs of omega bits each.
BigInt random_bigint(RadixConfig cfg, std::size_t count, std::mt19937_64& rng);
// Uniform in [0, bound) by rejection sampling. bound > 0.
BigInt random_below(const BigInt& bound, std::mt19937_64& rng);

}  // namespace mpsimd
