#pragma once

// Command implementations behind the mpsimd executable. Each returns the
// process exit status: 0 success, 1 a check failed, 2 bad configuration.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpsimd/cost_model.hpp"
#include "mpsimd/field.hpp"
#include "mpsimd/presets.hpp"
#include "mpsimd/simd_add.hpp"

namespace mpsimd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // Preset name or hexadecimal modulus.
    std::string prime = "p62207";
    std::optional<unsigned> omega;
    std::optional<std::size_t> limbs;
    // "default" (per radix), "none", or a strategy name.
    std::string add_strategy = "default";
    // "all", "none", or a back-end name.
    std::string backend = "all";
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    // "all" or a profile name.
    std::string profile = "all";
    bool json = false;
    std::string presets_file;
    std::string cost_models_file;
    // Test hook: perturb M_1 before building the generic context.
    bool corrupt_m = false;
};

// Resolution helpers; all throw ConfigError.
PrimePreset resolve_prime(const RunConfig& cfg);
std::optional<AddStrategy> resolve_strategy(const RunConfig& cfg, const RadixConfig& radix);
std::vector<Backend> resolve_backends(const RunConfig& cfg, const PrimePreset& prime);
std::vector<CostModel> resolve_profiles(const RunConfig& cfg);

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_examples(std::ostream& out);
int cmd_count(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_redc(const RunConfig& cfg, const std::string& t_hex, std::ostream& out, std::ostream& err);
int cmd_mulmod(const RunConfig& cfg, const std::string& a_hex, const std::string& b_hex, std::ostream& out,
               std::ostream& err);
// Wall-clock timings; informational only.
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace mpsimd::cli
