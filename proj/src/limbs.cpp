#include "mpsimd/limbs.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace mpsimd {

namespace {

using LimbVec = std::vector<Limb>;

void require_same_radix(const BigInt& a, const BigInt& b, const char* op) {
    if (a.omega() != b.omega()) {
        throw RadixMismatch(std::string(op) + ": operands use different radices (omega " +
                            std::to_string(a.omega()) + " vs " + std::to_string(b.omega()) + ")");
    }
}

int compare_vec(std::span<const Limb> a, std::span<const Limb> b) {
    const std::size_t width = std::max(a.size(), b.size());
    for (std::size_t i = width; i-- > 0;) {
        const Limb x = i < a.size() ? a[i] : 0;
        const Limb y = i < b.size() ? b[i] : 0;
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

// a -= b in place; requires a >= b and a.size() >= significant size of b.
void sub_in_place(LimbVec& a, std::span<const Limb> b, unsigned omega, Limb mask) {
    Limb borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Wide subtrahend = Wide{i < b.size() ? b[i] : 0} + borrow;
        if (Wide{a[i]} >= subtrahend) {
            a[i] = static_cast<Limb>(Wide{a[i]} - subtrahend);
            borrow = 0;
        } else {
            a[i] = static_cast<Limb>((Wide{a[i]} + (Wide{1} << omega)) - subtrahend) & mask;
            borrow = 1;
        }
    }
}

// a = 2a + bit in place, dropping nothing (caller sizes a with headroom).
void shl1_in_place(LimbVec& a, unsigned omega, Limb mask, bool in_bit) {
    Limb carry = in_bit ? 1 : 0;
    for (auto& limb : a) {
        const Limb out = (limb >> (omega - 1)) & 1;
        limb = ((limb << 1) | carry) & mask;
        carry = out;
    }
}

void karatsuba_rec(const BigInt& x, const BigInt& y, std::size_t threshold, std::size_t& products,
                   BigInt& out);

}  // namespace

// ---------------------------------------------------------------------------
// RadixConfig / BigInt

RadixConfig RadixConfig::make(unsigned omega, std::size_t n) {
    if (omega < 1 || omega > 64) {
        throw std::invalid_argument("limb width omega must be in 1..64, got " + std::to_string(omega));
    }
    if (n < 1) throw std::invalid_argument("limb count n must be at least 1");
    return RadixConfig{omega, n};
}

BigInt::BigInt(RadixConfig cfg) : cfg_(cfg), limbs_(cfg.n, 0) {}

BigInt::BigInt(RadixConfig cfg, std::vector<Limb> limbs) : cfg_(cfg), limbs_(std::move(limbs)) {
    const Limb mask = cfg_.limb_mask();
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        if ((limbs_[i] & ~mask) != 0) {
            throw std::invalid_argument("limb " + std::to_string(i) + " exceeds 2^" +
                                        std::to_string(cfg_.omega));
        }
    }
    if (limbs_.empty()) limbs_.push_back(0);
}

BigInt BigInt::from_u64(std::uint64_t value, RadixConfig cfg) {
    BigInt out(RadixConfig{64, 1}, std::vector<Limb>{value});
    return radix_convert(out, cfg);
}

BigInt BigInt::power_of_two(std::size_t bits, RadixConfig cfg) {
    std::vector<Limb> limbs(std::max(cfg.n, bits / cfg.omega + 1), 0);
    limbs[bits / cfg.omega] = Limb{1} << (bits % cfg.omega);
    return BigInt(cfg, std::move(limbs));
}

bool BigInt::is_zero() const noexcept {
    return std::all_of(limbs_.begin(), limbs_.end(), [](Limb l) { return l == 0; });
}

std::size_t BigInt::bit_length() const noexcept {
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != 0) {
            return i * cfg_.omega + static_cast<std::size_t>(std::bit_width(limbs_[i]));
        }
    }
    return 0;
}

std::size_t BigInt::significant_limbs() const noexcept {
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != 0) return i + 1;
    }
    return 1;
}

bool BigInt::bit(std::size_t index) const noexcept {
    return ((limb(index / cfg_.omega) >> (index % cfg_.omega)) & 1) != 0;
}

std::uint64_t BigInt::low_u64() const noexcept {
    std::uint64_t out = 0;
    for (std::size_t shift = 0, i = 0; shift < 64 && i < limbs_.size(); shift += cfg_.omega, ++i) {
        out |= limbs_[i] << shift;
    }
    return out;
}

BigInt BigInt::resized(std::size_t count) const {
    BigInt out = *this;
    out.limbs_.resize(std::max<std::size_t>(count, 1), 0);
    return out;
}

BigInt BigInt::canonical() const {
    return resized(std::max(cfg_.n, significant_limbs()));
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.omega() == b.omega() && compare_vec(a.limbs(), b.limbs()) == 0;
}

// ---------------------------------------------------------------------------
// Hex I/O and radix conversion

BigInt radix_convert(const BigInt& a, RadixConfig to) {
    const unsigned from_bits = a.omega();
    const Limb to_mask = to.limb_mask();
    std::vector<Limb> out;
    out.reserve(a.size() * from_bits / to.omega + 2);
    Wide acc = 0;
    unsigned acc_bits = 0;
    for (Limb limb : a.limbs()) {
        acc |= Wide{limb} << acc_bits;
        acc_bits += from_bits;
        while (acc_bits >= to.omega) {
            out.push_back(static_cast<Limb>(acc) & to_mask);
            acc = to.omega >= 128 ? 0 : acc >> to.omega;
            acc_bits -= to.omega;
        }
    }
    if (acc_bits > 0) out.push_back(static_cast<Limb>(acc) & to_mask);
    return BigInt(to, std::move(out)).canonical();
}

BigInt from_hex(std::string_view text, RadixConfig cfg) {
    std::size_t start = 0;
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) start = 2;
    if (start == text.size()) throw ParseError("empty hex literal", start);
    const RadixConfig nibbles{4, 1};
    std::vector<Limb> digits;
    digits.reserve(text.size() - start);
    for (std::size_t i = text.size(); i-- > start;) {
        const char ch = text[i];
        Limb d = 0;
        if (ch >= '0' && ch <= '9') {
            d = static_cast<Limb>(ch - '0');
        } else if (ch >= 'a' && ch <= 'f') {
            d = static_cast<Limb>(ch - 'a' + 10);
        } else if (ch >= 'A' && ch <= 'F') {
            d = static_cast<Limb>(ch - 'A' + 10);
        } else {
            throw ParseError("invalid hex digit '" + std::string(1, ch) + "' at position " + std::to_string(i), i);
        }
        digits.push_back(d);
    }
    return radix_convert(BigInt(nibbles, std::move(digits)), cfg);
}

std::string to_hex(const BigInt& a) {
    const BigInt nibbles = radix_convert(a, RadixConfig{4, 1});
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out = "0x";
    const std::size_t top = nibbles.significant_limbs();
    for (std::size_t i = top; i-- > 0;) out.push_back(kDigits[nibbles.limb(i)]);
    return out;
}

// ---------------------------------------------------------------------------
// Comparison

Ordering compare(const BigInt& a, const BigInt& b) {
    if (!(a.cfg() == b.cfg())) {
        throw RadixMismatch("compare: radix configurations differ");
    }
    const int c = compare_vec(a.limbs(), b.limbs());
    return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

bool operator<(const BigInt& a, const BigInt& b) {
    require_same_radix(a, b, "operator<");
    return compare_vec(a.limbs(), b.limbs()) < 0;
}
bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

// ---------------------------------------------------------------------------
// Addition / subtraction

CarryAddResult add_carry_propagate(const BigInt& a, const BigInt& b) {
    require_same_radix(a, b, "add_carry_propagate");
    const std::size_t width = std::max(a.size(), b.size());
    const unsigned omega = a.omega();
    const Limb mask = a.cfg().limb_mask();
    std::vector<Limb> sum(width);
    std::vector<std::uint8_t> carries(width + 1, 0);
    for (std::size_t i = 0; i < width; ++i) {
        const Wide t = Wide{a.limb(i)} + b.limb(i) + carries[i];
        sum[i] = static_cast<Limb>(t) & mask;
        carries[i + 1] = static_cast<std::uint8_t>(t >> omega);
    }
    const bool carry_out = carries[width] != 0;
    return {BigInt(a.cfg(), std::move(sum)), carry_out, std::move(carries)};
}

BorrowSubResult sub_borrow_propagate(const BigInt& a, const BigInt& b) {
    require_same_radix(a, b, "sub_borrow_propagate");
    const std::size_t width = std::max(a.size(), b.size());
    const Limb mask = a.cfg().limb_mask();
    const Wide base = Wide{1} << a.omega();
    std::vector<Limb> diff(width);
    Limb borrow = 0;
    for (std::size_t i = 0; i < width; ++i) {
        const Wide subtrahend = Wide{b.limb(i)} + borrow;
        const Wide minuend = Wide{a.limb(i)};
        if (minuend >= subtrahend) {
            diff[i] = static_cast<Limb>(minuend - subtrahend);
            borrow = 0;
        } else {
            diff[i] = static_cast<Limb>(minuend + base - subtrahend) & mask;
            borrow = 1;
        }
    }
    return {BigInt(a.cfg(), std::move(diff)), borrow != 0};
}

CarryAddResult add_carry_select(const BigInt& a, const BigInt& b) {
    require_same_radix(a, b, "add_carry_select");
    const std::size_t width = std::max(a.size(), b.size());
    const unsigned omega = a.omega();
    const Limb mask = a.cfg().limb_mask();

    // Both candidates per limb, independent of the incoming carry.
    std::vector<Limb> d0(width), d1(width);
    std::vector<std::uint8_t> c0(width), c1(width);
    for (std::size_t i = 0; i < width; ++i) {
        const Wide s = Wide{a.limb(i)} + b.limb(i);
        d0[i] = static_cast<Limb>(s) & mask;
        c0[i] = static_cast<std::uint8_t>(s >> omega);
        d1[i] = static_cast<Limb>(s + 1) & mask;
        c1[i] = static_cast<std::uint8_t>((s + 1) >> omega);
    }

    std::vector<Limb> sum(width);
    std::vector<std::uint8_t> carries(width + 1, 0);
    for (std::size_t i = 0; i < width; ++i) {
        sum[i] = carries[i] ? d1[i] : d0[i];
        carries[i + 1] = carries[i] ? c1[i] : c0[i];
    }
    const bool carry_out = carries[width] != 0;
    return {BigInt(a.cfg(), std::move(sum)), carry_out, std::move(carries)};
}

BigInt add(const BigInt& a, const BigInt& b) {
    const std::size_t width = std::max(a.size(), b.size());
    auto r = add_carry_propagate(a.resized(width + 1), b.resized(width + 1));
    return r.sum.canonical();
}

BigInt sub(const BigInt& a, const BigInt& b) {
    auto r = sub_borrow_propagate(a, b);
    if (r.borrow_out) throw std::domain_error("sub: negative result");
    return r.diff.canonical();
}

// ---------------------------------------------------------------------------
// Shifts

BigInt shift_limbs(const BigInt& a, long k) {
    if (k == 0) return a;
    std::vector<Limb> out;
    if (k > 0) {
        const auto drop = static_cast<std::size_t>(k);
        if (drop < a.size()) out.assign(a.limbs().begin() + static_cast<std::ptrdiff_t>(drop), a.limbs().end());
    } else {
        out.assign(static_cast<std::size_t>(-k), 0);
        out.insert(out.end(), a.limbs().begin(), a.limbs().end());
    }
    return BigInt(a.cfg(), std::move(out)).canonical();
}

BigInt shift_left_bits(const BigInt& a, std::size_t bits) {
    const unsigned omega = a.omega();
    const std::size_t q = bits / omega;
    const unsigned rem = static_cast<unsigned>(bits % omega);
    const Limb mask = a.cfg().limb_mask();
    std::vector<Limb> out(a.size() + q + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Wide v = Wide{a.limb(i)} << rem;
        out[i + q] |= static_cast<Limb>(v) & mask;
        out[i + q + 1] |= static_cast<Limb>(v >> omega);
    }
    return BigInt(a.cfg(), std::move(out)).canonical();
}

BigInt shift_right_bits(const BigInt& a, std::size_t bits) {
    const unsigned omega = a.omega();
    const std::size_t q = bits / omega;
    const unsigned rem = static_cast<unsigned>(bits % omega);
    const Limb mask = a.cfg().limb_mask();
    if (q >= a.size()) return BigInt(a.cfg());
    std::vector<Limb> out(a.size() - q, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Wide v = (Wide{a.limb(i + q + 1)} << omega) | a.limb(i + q);
        out[i] = static_cast<Limb>(v >> rem) & mask;
    }
    return BigInt(a.cfg(), std::move(out)).canonical();
}

BigInt low_bits(const BigInt& a, std::size_t bits) {
    const unsigned omega = a.omega();
    const std::size_t q = bits / omega;
    const unsigned rem = static_cast<unsigned>(bits % omega);
    std::vector<Limb> out(a.limbs().begin(), a.limbs().end());
    for (std::size_t i = q; i < out.size(); ++i) {
        out[i] = (i == q && rem != 0) ? out[i] & ((Limb{1} << rem) - 1) : 0;
    }
    return BigInt(a.cfg(), std::move(out)).canonical();
}

std::size_t trailing_zero_bits(const BigInt& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.limb(i) != 0) {
            return i * a.omega() + static_cast<std::size_t>(std::countr_zero(a.limb(i)));
        }
    }
    return a.bit_length();
}

// ---------------------------------------------------------------------------
// Multiplication

ProductResult mul_schoolbook(const BigInt& a, const BigInt& b) {
    require_same_radix(a, b, "mul_schoolbook");
    const unsigned omega = a.omega();
    const Limb mask = a.cfg().limb_mask();
    std::vector<Limb> out(a.size() + b.size(), 0);
    // Operand scanning: one row per limb of a.
    for (std::size_t i = 0; i < a.size(); ++i) {
        Wide carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Wide t = Wide{out[i + j]} + Wide{a.limb(i)} * b.limb(j) + carry;
            out[i + j] = static_cast<Limb>(t) & mask;
            carry = t >> omega;
        }
        out[i + b.size()] = static_cast<Limb>(carry);
    }
    return {BigInt(a.cfg(), std::move(out)).canonical(), a.size() * b.size()};
}

namespace {

BigInt slice(const BigInt& x, std::size_t from, std::size_t count) {
    std::vector<Limb> out(count, 0);
    for (std::size_t i = 0; i < count; ++i) out[i] = x.limb(from + i);
    return BigInt(x.cfg(), std::move(out));
}

void karatsuba_rec(const BigInt& x, const BigInt& y, std::size_t threshold, std::size_t& products,
                   BigInt& out) {
    std::size_t len = std::max(x.size(), y.size());
    if (len <= threshold) {
        auto r = mul_schoolbook(x.resized(len), y.resized(len));
        products += r.limb_products;
        out = std::move(r.value);
        return;
    }
    if (len % 2 != 0) ++len;
    const std::size_t h = len / 2;
    const BigInt x0 = slice(x, 0, h), x1 = slice(x, h, h);
    const BigInt y0 = slice(y, 0, h), y1 = slice(y, h, h);

    BigInt z0, z2, zm;
    karatsuba_rec(x0, y0, threshold, products, z0);
    karatsuba_rec(x1, y1, threshold, products, z2);

    // Half sums keep h limbs; their carry bits are folded back with additions.
    auto sx = add_carry_propagate(x0, x1);
    auto sy = add_carry_propagate(y0, y1);
    karatsuba_rec(sx.sum, sy.sum, threshold, products, zm);
    if (sx.carry_out) zm = add(zm, shift_limbs(sy.sum, -static_cast<long>(h)));
    if (sy.carry_out) zm = add(zm, shift_limbs(sx.sum, -static_cast<long>(h)));
    if (sx.carry_out && sy.carry_out) zm = add(zm, BigInt::power_of_two(2 * h * x.omega(), x.cfg()));

    const BigInt z1 = sub(sub(zm, z0), z2);
    out = add(add(shift_limbs(z2, -static_cast<long>(2 * h)), shift_limbs(z1, -static_cast<long>(h))), z0);
}

}  // namespace

ProductResult mul_karatsuba(const BigInt& a, const BigInt& b, std::size_t base_threshold) {
    require_same_radix(a, b, "mul_karatsuba");
    const std::size_t len = std::max(a.size(), b.size());
    ProductResult result;
    karatsuba_rec(a.resized(len), b.resized(len), std::max<std::size_t>(base_threshold, 1),
                  result.limb_products, result.value);
    result.value = result.value.canonical();
    return result;
}

ProductResult square_schoolbook(const BigInt& a) {
    const unsigned omega = a.omega();
    const Limb mask = a.cfg().limb_mask();
    const std::size_t len = a.size();
    std::size_t products = 0;
    std::vector<Limb> cross(2 * len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) {
        Wide carry = 0;
        for (std::size_t j = i + 1; j < len; ++j) {
            const Wide t = Wide{cross[i + j]} + Wide{a.limb(i)} * a.limb(j) + carry;
            cross[i + j] = static_cast<Limb>(t) & mask;
            carry = t >> omega;
            ++products;
        }
        cross[i + len] = static_cast<Limb>(carry);
    }
    std::vector<Limb> diag(2 * len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) {
        const Wide sq = Wide{a.limb(i)} * a.limb(i);
        diag[2 * i] = static_cast<Limb>(sq) & mask;
        diag[2 * i + 1] = static_cast<Limb>(sq >> omega);
        ++products;
    }
    const BigInt c(a.cfg(), std::move(cross));
    const BigInt d(a.cfg(), std::move(diag));
    return {add(add(c, c), d), products};
}

BigInt mul(const BigInt& a, const BigInt& b) {
    return mul_schoolbook(a.resized(a.significant_limbs()), b.resized(b.significant_limbs())).value;
}

BigInt mul_small(const BigInt& a, Limb factor) {
    return mul(a, BigInt::from_u64(factor, a.cfg()));
}

// ---------------------------------------------------------------------------
// Division oracles

DivModResult divmod_oracle(const BigInt& a, const BigInt& m) {
    require_same_radix(a, m, "divmod_oracle");
    if (m.is_zero()) throw std::domain_error("divmod_oracle: division by zero");
    const unsigned omega = a.omega();
    const Limb mask = a.cfg().limb_mask();
    const std::span<const Limb> divisor = m.limbs().first(m.significant_limbs());

    std::vector<Limb> quotient(a.size(), 0);
    std::vector<Limb> rem(divisor.size() + 1, 0);
    for (std::size_t bit = a.bit_length(); bit-- > 0;) {
        shl1_in_place(rem, omega, mask, a.bit(bit));
        if (compare_vec(rem, divisor) >= 0) {
            sub_in_place(rem, divisor, omega, mask);
            quotient[bit / omega] |= Limb{1} << (bit % omega);
        }
    }
    return {BigInt(a.cfg(), std::move(quotient)).canonical(), BigInt(a.cfg(), std::move(rem)).canonical()};
}

BigInt mod(const BigInt& a, const BigInt& m) { return divmod_oracle(a, m).remainder; }

BigInt mulmod(const BigInt& a, const BigInt& b, const BigInt& m) { return mod(mul(a, b), m); }

BigInt modinv_oracle(const BigInt& a, const BigInt& m) {
    require_same_radix(a, m, "modinv_oracle");
    if (m.is_zero()) throw std::domain_error("modinv_oracle: zero modulus");
    const BigInt one = BigInt::from_u64(1, m.cfg());
    if (m == one) return BigInt(m.cfg());

    // Invariant: s_k * a == r_k (mod m); coefficients are kept in [0, m).
    BigInt r0 = m, r1 = mod(a, m);
    BigInt s0(m.cfg()), s1 = one;
    while (!r1.is_zero()) {
        auto qr = divmod_oracle(r0, r1);
        const BigInt qs = mulmod(qr.quotient, s1, m);
        BigInt s2 = mod(sub(add(s0, m), qs), m);
        r0 = std::move(r1);
        r1 = std::move(qr.remainder);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (!(r0 == one)) {
        throw NotInvertible("modinv_oracle: " + to_hex(a) + " is not invertible modulo " + to_hex(m));
    }
    return s0.canonical();
}

// ---------------------------------------------------------------------------
// Random values

BigInt random_bigint(RadixConfig cfg, std::size_t count, std::mt19937_64& rng) {
    std::vector<Limb> limbs(count);
    const Limb mask = cfg.limb_mask();
    for (auto& l : limbs) l = rng() & mask;
    return BigInt(cfg, std::move(limbs));
}

BigInt random_below(const BigInt& bound, std::mt19937_64& rng) {
    if (bound.is_zero()) throw std::domain_error("random_below: zero bound");
    const std::size_t bits = bound.bit_length();
    const RadixConfig cfg = bound.cfg();
    const std::size_t count = (bits + cfg.omega - 1) / cfg.omega;
    for (;;) {
        BigInt candidate = low_bits(random_bigint(cfg, count, rng), bits);
        if (candidate < bound) return candidate.canonical();
    }
}

}  // namespace mpsimd
