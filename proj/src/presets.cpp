#include "mpsimd/presets.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "mpsimd/errors.hpp"

namespace mpsimd {

namespace {

std::size_t parse_count(const std::string& key, const std::string& value, std::size_t line_no) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": " + key + " must be a non-negative integer, got '" +
                             value + "'",
                         line_no);
    }
    return out;
}

BigInt friendly_prime(std::size_t ell, const BigInt& F) {
    return sub(shift_left_bits(F, ell), BigInt::from_u64(1, F.cfg()));
}

PrimePreset make_preset(std::string name, const BigInt& p64, unsigned omega, std::optional<std::size_t> limbs) {
    const std::size_t bits = std::max<std::size_t>(p64.bit_length(), 1);
    const std::size_t n = limbs.value_or((bits + omega - 1) / omega);
    const RadixConfig cfg = RadixConfig::make(omega, n);
    if (bits > omega * n) {
        throw std::invalid_argument("a " + std::to_string(bits) + "-bit modulus does not fit in " + std::to_string(n) +
                                    " limbs of " + std::to_string(omega) + " bits");
    }
    return {std::move(name), radix_convert(p64, cfg).resized(n), cfg};
}

}  // namespace

const std::vector<PrimePreset>& builtin_presets() {
    static const std::vector<PrimePreset> presets = [] {
        const RadixConfig wide{64, 1};
        BigInt three_pow = BigInt::from_u64(1, wide);
        for (int i = 0; i < 159; ++i) three_pow = mul_small(three_pow, 3);
        return std::vector<PrimePreset>{
            make_preset("p503", friendly_prime(250, three_pow), 64, 8),
            make_preset("p62207", BigInt::from_u64(62207, wide), 4, 4),
        };
    }();
    return presets;
}

PrimePreset parse_preset_line(std::string_view line, std::size_t line_no) {
    std::istringstream fields{std::string(line)};
    PrimePreset preset;
    if (!(fields >> preset.name)) throw ParseError("line " + std::to_string(line_no) + ": empty preset", line_no);

    std::map<std::string, std::string> kv;
    std::string pair;
    while (fields >> pair) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" + pair + "'", line_no);
        }
        const std::string key = pair.substr(0, eq);
        if (key != "p" && key != "ell" && key != "F" && key != "omega" && key != "limbs") {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no);
        }
        kv[key] = pair.substr(eq + 1);
    }

    const bool has_p = kv.contains("p");
    const bool has_friendly = kv.contains("ell") || kv.contains("F");
    if (has_p == has_friendly || (has_friendly && !(kv.contains("ell") && kv.contains("F")))) {
        throw ParseError("line " + std::to_string(line_no) + ": preset '" + preset.name +
                             "' needs either p or both ell and F",
                         line_no);
    }
    const RadixConfig wide{64, 1};
    const std::size_t ell = has_p ? 0 : parse_count("ell", kv["ell"], line_no);
    BigInt p64;
    try {
        p64 = has_p ? from_hex(kv["p"], wide) : friendly_prime(ell, from_hex(kv["F"], wide));
    } catch (const std::exception& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }

    const unsigned omega = kv.contains("omega") ? static_cast<unsigned>(parse_count("omega", kv["omega"], line_no)) : 64;
    std::optional<std::size_t> limbs;
    if (kv.contains("limbs")) limbs = parse_count("limbs", kv["limbs"], line_no);
    try {
        return make_preset(preset.name, p64, omega, limbs);
    } catch (const std::invalid_argument& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
}

std::vector<PrimePreset> parse_presets(std::istream& in) {
    std::vector<PrimePreset> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_preset_line(line, line_no));
    }
    return out;
}

std::optional<PrimePreset> find_preset(std::string_view name, const std::vector<PrimePreset>& extra) {
    for (const auto* list : {&extra, &builtin_presets()}) {
        for (const auto& preset : *list) {
            if (preset.name == name) return preset;
        }
    }
    return std::nullopt;
}

std::string format_preset(const PrimePreset& preset) {
    return preset.name + " p=" + to_hex(preset.p) + " omega=" + std::to_string(preset.cfg.omega) +
           " limbs=" + std::to_string(preset.cfg.n);
}

PrimePreset preset_of(const PrimeContext& ctx, std::string name) { return {std::move(name), ctx.p(), ctx.cfg()}; }

}  // namespace mpsimd
