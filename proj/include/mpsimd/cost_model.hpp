#pragma once

// Latency-weighted cost of an OpCounts record.
//
// Built-in profiles carry the instruction latencies (clock cycles) and CPI of
// Intel Tigerlake (x64, AVX-512) and Fujitsu A64FX (A64, SVE). Classes with
// no published figure are absent from a profile; counts landing in such a
// class are reported as unpriced rather than guessed.

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpsimd/lanes.hpp"

namespace mpsimd {

enum class InstrClass { CacheAccess, Addition, Logic, Shift, Compare, Popcount, Mul64, Mul52, CrossLane };

inline constexpr std::array<InstrClass, 9> kInstrClasses = {
    InstrClass::CacheAccess, InstrClass::Addition, InstrClass::Logic,  InstrClass::Shift,    InstrClass::Compare,
    InstrClass::Popcount,    InstrClass::Mul64,    InstrClass::Mul52,  InstrClass::CrossLane};

std::string_view class_name(InstrClass c);
std::optional<InstrClass> parse_class(std::string_view name);

struct CostModel {
    std::string profile;
    std::map<InstrClass, std::uint32_t> latency;
    // Recorded for reference only; never used for weighting.
    std::map<InstrClass, double> cpi;

    std::optional<std::uint32_t> latency_of(InstrClass c) const;
    // Latency used for lane_mul_product: 64-bit multiply, else 52-bit.
    std::optional<std::uint32_t> multiply_latency() const;

    static const std::vector<CostModel>& builtins();
    // Throws std::invalid_argument for an unknown profile name.
    static const CostModel& builtin(std::string_view name);
};

// One profile per non-empty, non-comment line:
//   <profile-name> <class>=<latency>[/<cpi>] ...
// Throws ParseError with the 1-based line number as position.
std::vector<CostModel> parse_cost_models(std::istream& in);

struct ProfileCost {
    std::uint64_t weighted_cycles = 0;
    // Counter names with non-zero counts but no latency in this profile.
    std::vector<std::string> unpriced;
};

struct CostReport {
    OpCounts counts;
    std::map<std::string, ProfileCost> per_profile;
};

// Sum over counters of count * latency of the counter's instruction class.
ProfileCost weigh(const OpCounts& counts, const CostModel& model);
CostReport cost_report(const OpCounts& counts, const std::vector<CostModel>& models);
CostReport cost_report(const OpCounts& counts, const CostModel& model);

}  // namespace mpsimd
