#pragma once

// Named prime configurations.
//
// Preset files hold one preset per line:
//   <name> p=<hex> [omega=<bits>] [limbs=<count>]
//   <name> ell=<bits> F=<hex> [omega=<bits>] [limbs=<count>]
// The second form denotes p = 2^ell * F - 1. omega defaults to 64 and limbs
// to the fewest limbs holding p. '#' starts a comment.

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpsimd/limbs.hpp"
#include "mpsimd/mont_generic.hpp"

namespace mpsimd {

struct PrimePreset {
    std::string name;
    BigInt p;
    RadixConfig cfg;
};

// "p503": 2^250 * 3^159 - 1, omega = 64, n = 8.
// "p62207": 2^8 * 243 - 1, omega = 4, n = 4.
const std::vector<PrimePreset>& builtin_presets();

// Throws ParseError (position = 1-based line number) on malformed lines.
std::vector<PrimePreset> parse_presets(std::istream& in);
// Parses the text after the name on a single line.
PrimePreset parse_preset_line(std::string_view line, std::size_t line_no = 1);

// Searches `extra` first, then the built-ins.
std::optional<PrimePreset> find_preset(std::string_view name, const std::vector<PrimePreset>& extra = {});

// One preset line with p in hex.
std::string format_preset(const PrimePreset& preset);
PrimePreset preset_of(const PrimeContext& ctx, std::string name);

}  // namespace mpsimd
