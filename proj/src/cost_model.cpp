#include "mpsimd/cost_model.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "mpsimd/errors.hpp"

namespace mpsimd {

namespace {

using C = InstrClass;

CostModel make_model(std::string name, std::initializer_list<std::pair<C, std::uint32_t>> lat,
                     std::initializer_list<std::pair<C, double>> cpi) {
    CostModel m;
    m.profile = std::move(name);
    for (auto [c, v] : lat) m.latency[c] = v;
    for (auto [c, v] : cpi) m.cpi[c] = v;
    return m;
}

// Which instruction class prices each counter. Multiplication is handled
// separately since the profile decides between the 64- and 52-bit rows.
std::optional<C> class_of(std::string_view counter) {
    if (counter == "lane_add" || counter == "lane_sub" || counter == "lane_saturating" ||
        counter == "lane_masked_add" || counter == "scalar_add") {
        return C::Addition;
    }
    if (counter == "lane_popcount") return C::Popcount;
    if (counter == "lane_compare") return C::Compare;
    if (counter == "lane_logic") return C::Logic;
    if (counter == "cross_lane") return C::CrossLane;
    if (counter == "loads") return C::CacheAccess;
    return std::nullopt;
}

}  // namespace

std::string_view class_name(InstrClass c) {
    switch (c) {
        case C::CacheAccess: return "cache_access";
        case C::Addition: return "addition";
        case C::Logic: return "logic";
        case C::Shift: return "shift";
        case C::Compare: return "compare";
        case C::Popcount: return "popcount";
        case C::Mul64: return "mul64";
        case C::Mul52: return "mul52";
        case C::CrossLane: return "cross_lane";
    }
    return "?";
}

std::optional<InstrClass> parse_class(std::string_view name) {
    for (auto c : kInstrClasses) {
        if (class_name(c) == name) return c;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> CostModel::latency_of(InstrClass c) const {
    if (auto it = latency.find(c); it != latency.end()) return it->second;
    return std::nullopt;
}

std::optional<std::uint32_t> CostModel::multiply_latency() const {
    if (auto l = latency_of(C::Mul64)) return l;
    return latency_of(C::Mul52);
}

const std::vector<CostModel>& CostModel::builtins() {
    static const std::vector<CostModel> models = {
        make_model("tigerlake-x64",
                   {{C::CacheAccess, 3}, {C::Addition, 1}, {C::Logic, 1}, {C::Shift, 1}, {C::Compare, 1},
                    {C::Popcount, 3}, {C::Mul64, 3}},
                   {{C::CacheAccess, 0.5}, {C::Addition, 0.25}, {C::Logic, 0.25}, {C::Shift, 0.5},
                    {C::Compare, 0.25}, {C::Popcount, 1}, {C::Mul64, 1}}),
        make_model("tigerlake-avx512",
                   {{C::CacheAccess, 4}, {C::Addition, 1}, {C::Logic, 1}, {C::Shift, 1}, {C::Compare, 3},
                    {C::Popcount, 3}, {C::Mul52, 4}, {C::CrossLane, 3}},
                   {{C::CacheAccess, 0.5}, {C::Addition, 0.5}, {C::Logic, 0.5}, {C::Shift, 1}, {C::Compare, 1},
                    {C::Popcount, 1}, {C::Mul52, 1}, {C::CrossLane, 1}}),
        // A64FX: latency only, no CPI published.
        make_model("a64fx-a64",
                   {{C::CacheAccess, 5}, {C::Addition, 1}, {C::Logic, 1}, {C::Shift, 2}, {C::Compare, 1},
                    {C::Mul64, 5}},
                   {}),
        make_model("a64fx-sve",
                   {{C::CacheAccess, 11}, {C::Addition, 4}, {C::Logic, 4}, {C::Shift, 4}, {C::Compare, 4},
                    {C::Popcount, 4}, {C::Mul64, 9}, {C::CrossLane, 6}},
                   {}),
    };
    return models;
}

const CostModel& CostModel::builtin(std::string_view name) {
    for (const auto& m : builtins()) {
        if (m.profile == name) return m;
    }
    throw std::invalid_argument("unknown cost profile '" + std::string(name) + "'");
}

std::vector<CostModel> parse_cost_models(std::istream& in) {
    std::vector<CostModel> models;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        CostModel model;
        if (!(fields >> model.profile)) continue;
        std::string pair;
        while (fields >> pair) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos) {
                throw ParseError("line " + std::to_string(line_no) + ": expected class=latency, got '" + pair + "'",
                                 line_no);
            }
            const auto cls = parse_class(std::string_view(pair).substr(0, eq));
            if (!cls) {
                throw ParseError("line " + std::to_string(line_no) + ": unknown instruction class '" +
                                     pair.substr(0, eq) + "'",
                                 line_no);
            }
            std::string value = pair.substr(eq + 1);
            std::string cpi;
            if (auto slash = value.find('/'); slash != std::string::npos) {
                cpi = value.substr(slash + 1);
                value.erase(slash);
            }
            std::uint32_t latency = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), latency);
            if (ec != std::errc{} || ptr != value.data() + value.size() || latency == 0) {
                throw ParseError("line " + std::to_string(line_no) + ": latency must be a positive integer in '" +
                                     pair + "'",
                                 line_no);
            }
            model.latency[*cls] = latency;
            if (!cpi.empty()) {
                try {
                    model.cpi[*cls] = std::stod(cpi);
                } catch (const std::exception&) {
                    throw ParseError("line " + std::to_string(line_no) + ": bad CPI in '" + pair + "'", line_no);
                }
            }
        }
        models.push_back(std::move(model));
    }
    return models;
}

ProfileCost weigh(const OpCounts& counts, const CostModel& model) {
    ProfileCost cost;
    for (const auto& [name, field] : OpCounts::fields()) {
        const std::uint64_t n = counts.*field;
        if (n == 0) continue;
        const std::optional<std::uint32_t> latency =
            name == "lane_mul_product" ? model.multiply_latency() : model.latency_of(*class_of(name));
        if (latency) {
            cost.weighted_cycles += n * *latency;
        } else {
            cost.unpriced.emplace_back(name);
        }
    }
    return cost;
}

CostReport cost_report(const OpCounts& counts, const std::vector<CostModel>& models) {
    CostReport report{counts, {}};
    for (const auto& m : models) report.per_profile[m.profile] = weigh(counts, m);
    return report;
}

CostReport cost_report(const OpCounts& counts, const CostModel& model) {
    return cost_report(counts, std::vector<CostModel>{model});
}

}  // namespace mpsimd
