#include "mpsimd/simd_add.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "mpsimd/errors.hpp"

namespace mpsimd {

namespace {

constexpr unsigned kNativeBits = 64;

unsigned parse_k(std::string_view text, std::string_view full) {
    unsigned k = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad radix width in addition strategy '" + std::string(full) + "'");
    }
    return k;
}

// Lane width holding limbs for this strategy: the limb width itself for the
// native layout, a full 64-bit lane for reduced radices.
unsigned limb_lane_bits(const AddStrategy& s, const RadixConfig& cfg) {
    return s.kind() == AddStrategy::Kind::NativePopcount ? cfg.omega : kNativeBits;
}

LaneVector limb_lanes(const BigInt& a, std::size_t width, unsigned lane_bits) {
    std::vector<std::uint64_t> lanes(width);
    for (std::size_t i = 0; i < width; ++i) lanes[i] = a.limb(i);
    return LaneVector(std::move(lanes), lane_bits);
}

LaneVector retyped(const LaneVector& v, unsigned lane_bits) { return LaneVector(v.lanes(), lane_bits); }

// Carry injection and output canonicalization shared by add and sub.
BigInt finish_sum(LaneMachine& machine, const LaneVector& D, const std::vector<std::uint8_t>& carries_in,
                  const AddStrategy& strategy, const RadixConfig& cfg) {
    const unsigned lane_bits = D.lane_bits();
    std::vector<std::uint64_t> c_bytes(carries_in.begin(), carries_in.end());
    const LaneVector c = machine.byte_scatter(LaneVector(std::move(c_bytes), 8), lane_bits);
    LaneVector sum = machine.add(D, c);
    if (strategy.kind() != AddStrategy::Kind::NativePopcount) {
        const LaneVector mask = machine.load(std::vector<std::uint64_t>(D.count(), cfg.limb_mask()), lane_bits);
        sum = machine.bit_and(sum, mask);
    }
    return BigInt(cfg, sum.lanes());
}

}  // namespace

// ---------------------------------------------------------------------------
// AddStrategy

AddStrategy AddStrategy::reduced_popcount(unsigned k) {
    if (k < 1 || k > 63) throw std::invalid_argument("reduced-radix width must be in 1..63, got " + std::to_string(k));
    return AddStrategy(Kind::ReducedPopcount, k);
}

AddStrategy AddStrategy::reduced_saturate(unsigned k) {
    if (k < 1 || k > 63) throw std::invalid_argument("reduced-radix width must be in 1..63, got " + std::to_string(k));
    return AddStrategy(Kind::ReducedSaturate, k);
}

AddStrategy AddStrategy::parse(std::string_view name) {
    if (name == "native-popcount") return native_popcount();
    constexpr std::string_view kPop = "reduced-popcount:";
    constexpr std::string_view kSat = "reduced-saturate:";
    if (name.starts_with(kPop)) return reduced_popcount(parse_k(name.substr(kPop.size()), name));
    if (name.starts_with(kSat)) return reduced_saturate(parse_k(name.substr(kSat.size()), name));
    throw std::invalid_argument("unknown addition strategy '" + std::string(name) +
                                "' (expected native-popcount, reduced-popcount:<k> or reduced-saturate:<k>)");
}

AddStrategy AddStrategy::default_for(const RadixConfig& cfg) {
    return cfg.reduced() ? reduced_popcount(cfg.omega) : native_popcount();
}

std::string AddStrategy::name() const {
    switch (kind_) {
        case Kind::NativePopcount: return "native-popcount";
        case Kind::ReducedPopcount: return "reduced-popcount:" + std::to_string(k_);
        case Kind::ReducedSaturate: return "reduced-saturate:" + std::to_string(k_);
    }
    return "?";
}

std::uint8_t AddStrategy::p_byte(const RadixConfig& cfg) const {
    switch (kind_) {
        case Kind::NativePopcount: return static_cast<std::uint8_t>(255 - cfg.omega);
        case Kind::ReducedPopcount: return static_cast<std::uint8_t>(255 - k_);
        case Kind::ReducedSaturate: return 254;
    }
    return 0;
}

void AddStrategy::check_compatible(const RadixConfig& cfg) const {
    if (kind_ != Kind::NativePopcount && cfg.omega != k_) {
        throw PreconditionError("addition strategy " + name() + " requires limbs of " + std::to_string(k_) +
                                " bits, got omega = " + std::to_string(cfg.omega));
    }
}

char case_letter(CarryCase c) {
    switch (c) {
        case CarryCase::N: return 'N';
        case CarryCase::P: return 'P';
        case CarryCase::G: return 'G';
    }
    return '?';
}

CarryCase case_of_byte_sum(unsigned sum) {
    return sum < 255 ? CarryCase::N : (sum == 255 ? CarryCase::P : CarryCase::G);
}

// ---------------------------------------------------------------------------

std::vector<CarryCase> classify_cases(const BigInt& a, const BigInt& b) {
    if (a.omega() != b.omega()) throw RadixMismatch("classify_cases: operands use different radices");
    const std::size_t width = std::max(a.size(), b.size());
    const Wide all_ones = a.cfg().limb_mask();
    std::vector<CarryCase> cases(width);
    for (std::size_t i = 0; i < width; ++i) {
        const Wide s = Wide{a.limb(i)} + b.limb(i);
        cases[i] = s > all_ones ? CarryCase::G : (s == all_ones ? CarryCase::P : CarryCase::N);
    }
    return cases;
}

OperandBytes derive_tp(LaneMachine& machine, const LaneVector& D, const BigInt& a, const AddStrategy& strategy) {
    const RadixConfig& cfg = a.cfg();
    strategy.check_compatible(cfg);
    const std::size_t n = D.count();
    if (D.lane_bits() != limb_lane_bits(strategy, cfg)) {
        throw PreconditionError("derive_tp: lane sums are not in the layout of " + strategy.name());
    }
    OperandBytes out;
    LaneVector t_wide;
    switch (strategy.kind()) {
        case AddStrategy::Kind::NativePopcount: {
            // Popcount results live in lanes of at least a byte so that the
            // masked add below cannot wrap at tiny limb widths.
            const unsigned t_bits = std::max(cfg.omega, 8u);
            out.G = retyped(machine.popcount(D), t_bits);
            out.m = retyped(machine.less_than(D, limb_lanes(a, n, cfg.omega)), t_bits);
            t_wide = machine.masked_add(out.G, cfg.omega + 1, out.m);
            break;
        }
        case AddStrategy::Kind::ReducedPopcount: {
            const LaneVector threshold =
                machine.load(std::vector<std::uint64_t>(n, std::uint64_t{1} << strategy.k()), kNativeBits);
            out.G = machine.popcount(D);
            out.m = machine.greater_equal(D, threshold);
            t_wide = machine.masked_add(out.G, 65, out.m);
            break;
        }
        case AddStrategy::Kind::ReducedSaturate: {
            const std::uint64_t bias = ~std::uint64_t{0} - (std::uint64_t{1} << strategy.k());  // 2^64 - 2^k - 1
            const std::uint64_t floor = ~std::uint64_t{0} - 2;                                   // 2^64 - 3
            out.G = machine.saturating_add(D, machine.load(std::vector<std::uint64_t>(n, bias), kNativeBits));
            t_wide = machine.saturating_sub(out.G, machine.load(std::vector<std::uint64_t>(n, floor), kNativeBits));
            break;
        }
    }
    out.t = machine.byte_gather(t_wide);
    out.p = machine.load(std::vector<std::uint64_t>(n, strategy.p_byte(cfg)), 8);
    return out;
}

SimulatedCarries simulate_carries(LaneMachine& machine, const LaneVector& t, const LaneVector& p) {
    if (t.lane_bits() != 8 || p.lane_bits() != 8 || t.count() != p.count()) {
        throw std::invalid_argument("simulate_carries: expects two byte vectors of equal length");
    }
    const std::size_t n = t.count();
    std::vector<std::uint64_t> s(n, 0);
    bool carry = false;
    // The byte strings are added 8 bytes at a time in general-purpose words.
    for (std::size_t base = 0; base < n; base += 8) {
        const std::size_t bytes = std::min<std::size_t>(8, n - base);
        std::uint64_t tw = 0, pw = 0;
        for (std::size_t j = 0; j < bytes; ++j) {
            tw |= t[base + j] << (8 * j);
            pw |= p[base + j] << (8 * j);
        }
        const Wide sum = Wide{tw} + pw + (carry ? 1 : 0);
        machine.count_scalar_adds(1);
        carry = ((sum >> (8 * bytes)) & 1) != 0;
        for (std::size_t j = 0; j < bytes; ++j) s[base + j] = static_cast<std::uint64_t>(sum >> (8 * j)) & 0xff;
    }

    SimulatedCarries out;
    out.s = machine.byte_scatter(LaneVector(std::move(s), 8), 8);
    const LaneVector c = machine.sub(machine.sub(out.s, t), p);
    out.c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] > 1) {
            throw ContractViolation("simulate_carries: recovered carry " + std::to_string(c[i]) + " at byte " +
                                    std::to_string(i) + " (t=" + std::to_string(t[i]) +
                                    ", p=" + std::to_string(p[i]) + ")");
        }
        out.c[i] = static_cast<std::uint8_t>(c[i]);
    }
    out.carry_out = carry;
    return out;
}

SimdAddResult simd_add(LaneMachine& machine, const BigInt& a, const BigInt& b, const AddStrategy& strategy) {
    if (a.omega() != b.omega()) throw RadixMismatch("simd_add: operands use different radices");
    const RadixConfig& cfg = a.cfg();
    strategy.check_compatible(cfg);
    const OpCounts before = machine.counts();
    const std::size_t width = std::max(a.size(), b.size());
    const unsigned lane_bits = limb_lane_bits(strategy, cfg);

    const LaneVector va = machine.load(limb_lanes(a, width, lane_bits).lanes(), lane_bits);
    const LaneVector vb = machine.load(limb_lanes(b, width, lane_bits).lanes(), lane_bits);
    SimdAddResult result;
    AddTrace& tr = result.trace;
    tr.D = machine.add(va, vb);
    OperandBytes ops = derive_tp(machine, tr.D, a, strategy);
    SimulatedCarries sim = simulate_carries(machine, ops.t, ops.p);

    result.sum = finish_sum(machine, tr.D, sim.c, strategy, cfg);
    result.carry_out = sim.carry_out;

    tr.G = std::move(ops.G);
    tr.m = std::move(ops.m);
    tr.t = std::move(ops.t);
    tr.p = std::move(ops.p);
    tr.s = std::move(sim.s);
    tr.c = std::move(sim.c);
    tr.c.push_back(sim.carry_out ? 1 : 0);
    tr.cases.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
        tr.cases[i] = case_of_byte_sum(static_cast<unsigned>(tr.t[i] + tr.p[i]));
    }
    tr.counts = machine.counts();
    for (const auto& [name, field] : OpCounts::fields()) tr.counts.*field -= before.*field;
    return result;
}

SimdAddResult simd_add(const BigInt& a, const BigInt& b, const AddStrategy& strategy) {
    LaneMachine machine;
    return simd_add(machine, a, b, strategy);
}

SimdSubResult simd_sub(LaneMachine& machine, const BigInt& a, const BigInt& b, const AddStrategy& strategy) {
    if (a.omega() != b.omega()) throw RadixMismatch("simd_sub: operands use different radices");
    const RadixConfig& cfg = a.cfg();
    strategy.check_compatible(cfg);
    const OpCounts before = machine.counts();
    const std::size_t width = std::max(a.size(), b.size());
    const unsigned lane_bits = limb_lane_bits(strategy, cfg);

    const LaneVector va = machine.load(limb_lanes(a, width, lane_bits).lanes(), lane_bits);
    const LaneVector vb = machine.load(limb_lanes(b, width, lane_bits).lanes(), lane_bits);
    const LaneVector ones = machine.load(std::vector<std::uint64_t>(width, cfg.limb_mask()), lane_bits);
    const LaneVector not_b = machine.bit_xor(vb, ones);

    SimdSubResult result;
    AddTrace& tr = result.trace;
    tr.D = machine.add(va, not_b);
    OperandBytes ops = derive_tp(machine, tr.D, a.resized(width), strategy);

    // Virtual byte below limb 0 whose sum with p is exactly 256: a generate
    // that injects the +1 of the two's complement.
    const std::uint8_t p_const = strategy.p_byte(cfg);
    std::vector<std::uint64_t> t_ext = ops.t.lanes();
    t_ext.push_back(0);
    const LaneVector t_virtual = machine.slide_up(LaneVector(std::move(t_ext), 8), 1, 256u - p_const);
    const LaneVector p_virtual = machine.load(std::vector<std::uint64_t>(width + 1, p_const), 8);
    SimulatedCarries sim = simulate_carries(machine, t_virtual, p_virtual);

    std::vector<std::uint8_t> carries(width);
    for (std::size_t i = 0; i < width; ++i) carries[i] = sim.c[i + 1];
    result.diff = finish_sum(machine, tr.D, carries, strategy, cfg);
    result.borrow_out = !sim.carry_out;

    tr.G = std::move(ops.G);
    tr.m = std::move(ops.m);
    tr.t = std::move(ops.t);
    tr.p = std::move(ops.p);
    tr.s = std::move(sim.s);
    tr.c.assign(carries.begin(), carries.end());
    tr.c.push_back(sim.carry_out ? 1 : 0);
    tr.cases.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
        tr.cases[i] = case_of_byte_sum(static_cast<unsigned>(tr.t[i] + tr.p[i]));
    }
    tr.counts = machine.counts();
    for (const auto& [name, field] : OpCounts::fields()) tr.counts.*field -= before.*field;
    return result;
}

SimdSubResult simd_sub(const BigInt& a, const BigInt& b, const AddStrategy& strategy) {
    LaneMachine machine;
    return simd_sub(machine, a, b, strategy);
}

}  // namespace mpsimd
