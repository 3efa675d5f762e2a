#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mpsimd/errors.hpp"
#include "mpsimd/lanes.hpp"
#include "mpsimd/mont_generic.hpp"
#include "mpsimd/mont_special.hpp"

namespace mpsimd::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr Backend kAllBackends[] = {Backend::GenericReference, Backend::GenericProposed, Backend::FriendlyReference,
                                    Backend::FriendlyProposed};

bool is_friendly(Backend b) { return b == Backend::FriendlyReference || b == Backend::FriendlyProposed; }

std::vector<PrimePreset> load_extra_presets(const RunConfig& cfg) {
    if (cfg.presets_file.empty()) return {};
    std::ifstream in(cfg.presets_file);
    if (!in) throw ConfigError("cannot open preset file '" + cfg.presets_file + "'");
    try {
        return parse_presets(in);
    } catch (const ParseError& e) {
        throw ConfigError(cfg.presets_file + ": " + e.what());
    }
}

PrimePreset reshape(PrimePreset preset, std::optional<unsigned> omega, std::optional<std::size_t> limbs) {
    const unsigned w = omega.value_or(preset.cfg.omega);
    if (w < 1 || w > 64) throw ConfigError("omega must be in 1..64, got " + std::to_string(w));
    const std::size_t bits = std::max<std::size_t>(preset.p.bit_length(), 1);
    const std::size_t n = limbs.value_or(omega ? (bits + w - 1) / w : preset.cfg.n);
    if (n < 1 || bits > w * n) {
        throw ConfigError("modulus of " + std::to_string(bits) + " bits does not fit in " + std::to_string(n) +
                          " limbs of " + std::to_string(w) + " bits");
    }
    const RadixConfig cfg = RadixConfig::make(w, n);
    preset.p = radix_convert(preset.p, cfg).resized(n);
    preset.cfg = cfg;
    return preset;
}

// Per-suite pass/total tally; the first failure message is kept.
struct Suite {
    explicit Suite(std::string suite_name) : name(std::move(suite_name)) {}

    std::string name;
    std::size_t passed = 0;
    std::size_t total = 0;
    std::string first_failure;

    void run(const std::function<bool()>& check, const std::function<std::string()>& describe) {
        ++total;
        try {
            if (check()) {
                ++passed;
                return;
            }
            if (first_failure.empty()) first_failure = describe();
        } catch (const std::exception& e) {
            if (first_failure.empty()) first_failure = describe() + ": " + e.what();
        }
    }
    bool ok() const { return passed == total; }
};

Json counts_json(const OpCounts& counts) {
    Json out = Json::object();
    for (const auto& [name, field] : OpCounts::fields()) {
        if (counts.*field != 0) out[std::string(name)] = counts.*field;
    }
    return out;
}

Json cycles_json(const OpCounts& counts, const std::vector<CostModel>& models) {
    Json out = Json::object();
    const CostReport report = cost_report(counts, models);
    for (const auto& model : models) {
        const ProfileCost& cost = report.per_profile.at(model.profile);
        out[model.profile] = {{"weighted_cycles", cost.weighted_cycles}, {"unpriced", cost.unpriced}};
    }
    return out;
}

OpCounts run_reduction(Backend backend, const BigInt& T, const PrimeContext& generic,
                       const std::optional<FriendlyContext>& friendly) {
    LaneMachine machine;
    switch (backend) {
        case Backend::GenericReference: redc_reference(machine, T, generic); break;
        case Backend::GenericProposed: redc_proposed(machine, T, generic); break;
        case Backend::FriendlyReference: redc_friendly_reference(machine, T, *friendly); break;
        case Backend::FriendlyProposed: redc_friendly_proposed(machine, T, *friendly); break;
    }
    return machine.take_counts();
}

BigInt reduce_with(Backend backend, const BigInt& T, const PrimeContext& generic,
                   const std::optional<FriendlyContext>& friendly) {
    switch (backend) {
        case Backend::GenericReference: return redc_reference(T, generic).value;
        case Backend::GenericProposed: return redc_proposed(T, generic).value;
        case Backend::FriendlyReference: return redc_friendly_reference(T, *friendly).value;
        case Backend::FriendlyProposed: return redc_friendly_proposed(T, *friendly).value;
    }
    throw std::logic_error("unknown back end");
}

std::optional<FriendlyContext> friendly_for(const std::vector<Backend>& backends, const PrimePreset& prime) {
    for (Backend b : backends) {
        if (is_friendly(b)) return FriendlyContext::create(prime.p, prime.cfg);
    }
    return std::nullopt;
}

PrimeContext generic_context(const RunConfig& cfg, const PrimePreset& prime) {
    PrimeContext ctx = PrimeContext::create(prime.p, prime.cfg);
    if (!cfg.corrupt_m) return ctx;
    if (ctx.m_table().empty()) throw ConfigError("--corrupt-m needs a modulus of at least 3 limbs");
    std::vector<BigInt> table = ctx.m_table();
    table[0] = mod(add(table[0], BigInt::from_u64(1, prime.cfg)), ctx.p());
    return PrimeContext::with_m_table(prime.p, prime.cfg, std::move(table));
}

BigInt parse_operand(const std::string& hex, const RadixConfig& cfg, const char* what) {
    try {
        return from_hex(hex, cfg);
    } catch (const ParseError& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

std::string tuple_text(const std::vector<std::uint64_t>& values) {
    std::string out = "(";
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out + ")";
}

template <class Range>
std::vector<std::uint64_t> as_u64(const Range& r) {
    return std::vector<std::uint64_t>(r.begin(), r.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Resolution

PrimePreset resolve_prime(const RunConfig& cfg) {
    const std::vector<PrimePreset> extra = load_extra_presets(cfg);
    if (auto preset = find_preset(cfg.prime, extra)) {
        if (!cfg.omega && !cfg.limbs) return *preset;
        return reshape(*preset, cfg.omega, cfg.limbs);
    }
    const bool hex = cfg.prime.starts_with("0x") || cfg.prime.starts_with("0X");
    if (!hex) throw ConfigError("unknown prime preset '" + cfg.prime + "' (use a preset name or a 0x-prefixed modulus)");
    const BigInt p64 = parse_operand(cfg.prime, RadixConfig{64, 1}, "--prime");
    if (!p64.bit(0)) throw ConfigError("modulus " + to_hex(p64) + " must be odd");
    const unsigned omega = cfg.omega.value_or(64);
    return reshape(PrimePreset{"custom", p64, RadixConfig{64, p64.size()}}, omega, cfg.limbs);
}

std::optional<AddStrategy> resolve_strategy(const RunConfig& cfg, const RadixConfig& radix) {
    if (cfg.add_strategy == "none") return std::nullopt;
    try {
        const AddStrategy s =
            cfg.add_strategy == "default" ? AddStrategy::default_for(radix) : AddStrategy::parse(cfg.add_strategy);
        s.check_compatible(radix);
        return s;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("--add-strategy: ") + e.what());
    }
}

std::vector<Backend> resolve_backends(const RunConfig& cfg, const PrimePreset& prime) {
    if (cfg.backend == "none") return {};
    auto friendly_ok = [&](bool proposed) {
        try {
            const FriendlyContext ctx = FriendlyContext::create(prime.p, prime.cfg);
            return !proposed || ctx.proposed_admissible();
        } catch (const PreconditionError&) {
            return false;
        }
    };
    if (cfg.backend == "all") {
        std::vector<Backend> out = {Backend::GenericReference, Backend::GenericProposed};
        if (friendly_ok(false)) out.push_back(Backend::FriendlyReference);
        if (friendly_ok(true)) out.push_back(Backend::FriendlyProposed);
        return out;
    }
    const auto b = parse_backend(cfg.backend);
    if (!b) throw ConfigError("unknown back end '" + cfg.backend + "'");
    if (is_friendly(*b) && !friendly_ok(*b == Backend::FriendlyProposed)) {
        throw ConfigError("back end " + cfg.backend + " does not support modulus " + to_hex(prime.p) + " at omega = " +
                          std::to_string(prime.cfg.omega));
    }
    return {*b};
}

std::vector<CostModel> resolve_profiles(const RunConfig& cfg) {
    std::vector<CostModel> models = CostModel::builtins();
    if (!cfg.cost_models_file.empty()) {
        std::ifstream in(cfg.cost_models_file);
        if (!in) throw ConfigError("cannot open cost model file '" + cfg.cost_models_file + "'");
        try {
            models = parse_cost_models(in);
        } catch (const ParseError& e) {
            throw ConfigError(cfg.cost_models_file + ": " + e.what());
        }
    }
    if (cfg.profile == "all") return models;
    for (const auto& m : models) {
        if (m.profile == cfg.profile) return {m};
    }
    throw ConfigError("unknown cost profile '" + cfg.profile + "'");
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    PrimePreset prime;
    std::optional<AddStrategy> strategy;
    std::vector<Backend> backends;
    try {
        prime = resolve_prime(cfg);
        strategy = resolve_strategy(cfg, prime.cfg);
        backends = resolve_backends(cfg, prime);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (!cfg.json) {
        out << "prime " << prime.name << " = " << to_hex(prime.p) << " (omega=" << prime.cfg.omega
            << ", limbs=" << prime.cfg.n << "), seed " << cfg.seed << ", " << cfg.trials << " trials per suite\n";
    }

    std::optional<PrimeContext> generic;
    std::optional<FriendlyContext> friendly;
    try {
        generic = generic_context(cfg, prime);
        friendly = friendly_for(backends, prime);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        if (cfg.json) {
            out << Json{{"prime", prime.name}, {"error", std::string("context construction failed: ") + e.what()},
                        {"result", "FAIL"}}
                       .dump(2)
                << "\n";
        } else {
            out << "context construction failed: " << e.what() << "\n";
            out << "FAIL\n";
        }
        return kExitFailure;
    }

    std::mt19937_64 rng(cfg.seed);
    const RadixConfig radix = prime.cfg;
    const std::size_t n = radix.n;
    std::vector<Suite> suites;

    {
        Suite add_suite{strategy ? "add:" + strategy->name() : "add:carry-select"};
        Suite ks{"kogge-stone"};
        for (std::size_t i = 0; i < cfg.trials; ++i) {
            const BigInt a = random_bigint(radix, n, rng);
            const BigInt b = random_bigint(radix, n, rng);
            const auto describe = [&] { return "a=" + to_hex(a) + " b=" + to_hex(b); };
            const CarryAddResult expected = add_carry_propagate(a, b);
            add_suite.run(
                [&] {
                    if (!strategy) {
                        const auto r = add_carry_select(a, b);
                        return r.sum == expected.sum && r.carry_out == expected.carry_out;
                    }
                    const auto r = simd_add(a, b, *strategy);
                    const auto d = simd_sub(a, b, *strategy);
                    const auto ref_d = sub_borrow_propagate(a, b);
                    return r.sum == expected.sum && r.carry_out == expected.carry_out && d.diff == ref_d.diff &&
                           d.borrow_out == ref_d.borrow_out;
                },
                describe);
            ks.run([&] { return kogge_stone_carries(a, b) == expected.carries; }, describe);
        }
        suites.push_back(std::move(add_suite));
        suites.push_back(std::move(ks));
    }

    const BigInt three_p = add(add(prime.p, prime.p), prime.p);
    const BigInt two_p = add(prime.p, prime.p);
    for (Backend backend : backends) {
        Suite redc{"redc:" + std::string(backend_name(backend))};
        Suite bounds{"bounds:" + std::string(backend_name(backend))};
        Suite field{"field:" + std::string(backend_name(backend))};
        FieldOptions options;
        options.backend = backend;
        options.add_strategy = strategy;
        const FieldPtr fctx = FieldContext::create(prime.p, radix, options);
        for (std::size_t i = 0; i < cfg.trials; ++i) {
            const BigInt T = random_below(generic->pR(), rng);
            const auto describe = [&] { return "T=" + to_hex(T); };
            redc.run([&] { return reduce_with(backend, T, *generic, friendly) == redc_oracle(T, prime.p, radix); },
                     describe);
            bounds.run(
                [&] {
                    switch (backend) {
                        case Backend::GenericReference: {
                            const auto r = redc_reference(T, *generic);
                            return r.trace.pre_correction < two_p;
                        }
                        case Backend::GenericProposed: {
                            const auto r = redc_proposed(T, *generic);
                            bool ok = r.trace.pre_correction < three_p;
                            if (!needs_second_correction(T, *generic)) {
                                ok = ok && r.trace.pre_correction < two_p;
                            }
                            for (Limb rem : r.trace.remainders) ok = ok && rem == 0;
                            return ok;
                        }
                        case Backend::FriendlyReference: {
                            const auto r = redc_friendly_reference(T, *friendly);
                            return r.trace.pre_correction < two_p;
                        }
                        case Backend::FriendlyProposed: {
                            const auto r = redc_friendly_proposed(T, *friendly);
                            bool ok = r.trace.pre_correction < two_p;
                            for (const BigInt& rem : r.trace.remainders) ok = ok && rem.is_zero();
                            return ok;
                        }
                    }
                    return false;
                },
                describe);

            const BigInt a = random_below(prime.p, rng);
            const BigInt b = random_below(prime.p, rng);
            field.run(
                [&] {
                    const FieldElement x = to_mont(a, fctx);
                    const FieldElement y = to_mont(b, fctx);
                    const BigInt sum = mod(add(a, b), prime.p);
                    const BigInt diff = mod(sub(add(a, prime.p), b), prime.p);
                    return from_mont(fmul(x, y)) == mulmod(a, b, prime.p) && from_mont(fadd(x, y)) == sum &&
                           from_mont(fsub(x, y)) == diff && feq(fsqr(x), fmul(x, x));
                },
                [&] { return "a=" + to_hex(a) + " b=" + to_hex(b); });
        }
        suites.push_back(std::move(redc));
        suites.push_back(std::move(bounds));
        suites.push_back(std::move(field));
    }

    bool all_ok = true;
    if (cfg.json) {
        Json report = {{"prime", prime.name}, {"p", to_hex(prime.p)},   {"omega", prime.cfg.omega},
                       {"limbs", prime.cfg.n}, {"seed", cfg.seed},         {"trials", cfg.trials},
                       {"suites", Json::array()}};
        for (const auto& s : suites) {
            Json entry = {{"name", s.name}, {"passed", s.passed}, {"total", s.total}};
            if (!s.ok()) entry["first_failure"] = s.first_failure;
            report["suites"].push_back(entry);
            all_ok = all_ok && s.ok();
        }
        report["result"] = all_ok ? "PASS" : "FAIL";
        out << report.dump(2) << "\n";
    } else {
        for (const auto& s : suites) {
            out << "suite " << s.name << ": " << s.passed << "/" << s.total << " passed\n";
            if (!s.ok()) out << "  first failure: " << s.first_failure << "\n";
            all_ok = all_ok && s.ok();
        }
        out << (all_ok ? "PASS" : "FAIL") << "\n";
    }
    return all_ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// examples

int cmd_examples(std::ostream& out) {
    bool all_ok = true;
    auto expect = [&](const std::string& what, const std::string& expected, const std::string& actual) {
        const bool ok = expected == actual;
        all_ok = all_ok && ok;
        out << (ok ? "  ok       " : "  MISMATCH ") << what << ": expected " << expected << ", got " << actual << "\n";
    };
    auto run = [&](const std::string& title, const std::function<void()>& body) {
        out << title << "\n";
        try {
            body();
        } catch (const std::exception& e) {
            all_ok = false;
            out << "  MISMATCH exception: " << e.what() << "\n";
        }
    };

    run("carry-simulating addition, omega=16, n=4 (tuples least significant first)", [&] {
        const RadixConfig c16 = RadixConfig::make(16, 4);
        const BigInt a(c16, {60000, 50000, 10000, 20000});
        const BigInt b(c16, {5536, 15535, 10000, 20000});
        const auto r = simd_add(a, b, AddStrategy::native_popcount());
        const auto& tr = r.trace;
        expect("D", "(0,65535,20000,40000)", tuple_text(tr.D.lanes()));
        expect("G", "(0,16,5,5)", tuple_text(tr.G.lanes()));
        expect("m", "(1,0,0,0)", tuple_text(tr.m.lanes()));
        expect("t", "(17,16,5,5)", tuple_text(tr.t.lanes()));
        expect("p", "(239,239,239,239)", tuple_text(tr.p.lanes()));
        expect("s", "(0,0,245,244)", tuple_text(tr.s.lanes()));
        std::string cases;
        for (CarryCase c : tr.cases) cases.push_back(case_letter(c));
        expect("cases", "GPNN", cases);
        expect("carries c_0..c_3", "(0,1,1,0)", tuple_text(as_u64(std::vector<std::uint8_t>(tr.c.begin(), tr.c.end() - 1))));
        expect("sum", "(0,0,20001,40000)", tuple_text(as_u64(r.sum.limbs())));
    });

    const RadixConfig c4 = RadixConfig::make(4, 4);
    const BigInt p = BigInt::from_u64(62207, c4);
    const BigInt T = BigInt::from_u64(100000000, c4);

    run("generic reduction, p=62207, omega=4, n=4, T=100000000", [&] {
        const PrimeContext ctx = PrimeContext::create(p, c4);
        expect("p'", "1", std::to_string(ctx.p_prime()));
        expect("(M_1,M_2)", "(243,3888)",
               tuple_text({ctx.m_table()[0].low_u64(), ctx.m_table()[1].low_u64()}));
        const auto r = redc_proposed(T, ctx);
        expect("T^(2)", "390625", std::to_string(r.trace.t_steps[0].low_u64()));
        expect("Q", "(1,14)", tuple_text(as_u64(r.trace.q_steps)));
        expect("T^(3)", "28302", std::to_string(r.trace.t_steps[1].low_u64()));
        expect("T^(4)", "56200", std::to_string(r.trace.t_steps[2].low_u64()));
        expect("corrections", "0", std::to_string(r.trace.corrections));
        expect("result", "56200", std::to_string(r.value.low_u64()));
        expect("reference result", "56200", std::to_string(redc_reference(T, ctx).value.low_u64()));
    });

    run("friendly reduction, p=2^8*243-1, omega=4, n=4, T=100000000", [&] {
        const FriendlyContext ctx = FriendlyContext::create(p, c4);
        expect("l", "8", std::to_string(ctx.ell()));
        expect("F", "243", std::to_string(ctx.F().low_u64()));
        expect("lambda", "2", std::to_string(ctx.lambda()));
        const auto r = redc_friendly_proposed(T, ctx);
        expect("t^(1)", "0", std::to_string(r.trace.t1.low_u64()));
        expect("Q^(1)", "0", std::to_string(r.trace.q1.low_u64()));
        expect("T^(1)", "390625", std::to_string(r.trace.t_steps[1].low_u64()));
        expect("t^(2)", "768", std::to_string(r.trace.t2 ? r.trace.t2->low_u64() : 0));
        expect("Q^(2)", "225", std::to_string(r.trace.q2.low_u64()));
        expect("T^(2)", "56200", std::to_string(r.trace.t_steps[2].low_u64()));
        expect("result", "56200", std::to_string(r.value.low_u64()));
        expect("reference result", "56200", std::to_string(redc_friendly_reference(T, ctx).value.low_u64()));
    });

    run("instruction counts, p503 preset", [&] {
        const PrimePreset p503 = *find_preset("p503");
        const FriendlyContext ctx = FriendlyContext::create(p503.p, p503.cfg);
        std::mt19937_64 rng(7);
        const BigInt t = random_below(ctx.pR(), rng);
        expect("friendly-reference limb products", "32",
               std::to_string(redc_friendly_reference(t, ctx).trace.counts.lane_mul_product));
        expect("friendly-proposed limb products", "24",
               std::to_string(redc_friendly_proposed(t, ctx).trace.counts.lane_mul_product));
    });

    out << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// count

int cmd_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    PrimePreset prime;
    std::optional<AddStrategy> strategy;
    std::vector<Backend> backends;
    std::vector<CostModel> models;
    std::optional<PrimeContext> generic;
    std::optional<FriendlyContext> friendly;
    try {
        prime = resolve_prime(cfg);
        strategy = resolve_strategy(cfg, prime.cfg);
        backends = resolve_backends(cfg, prime);
        models = resolve_profiles(cfg);
        generic = PrimeContext::create(prime.p, prime.cfg);
        friendly = friendly_for(backends, prime);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    // One pass of every configured operation on inputs drawn from `seed`.
    auto measure = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::vector<std::pair<std::string, OpCounts>> ops;
        if (strategy) {
            const BigInt a = random_bigint(prime.cfg, prime.cfg.n, rng);
            const BigInt b = random_bigint(prime.cfg, prime.cfg.n, rng);
            LaneMachine machine;
            simd_add(machine, a, b, *strategy);
            ops.emplace_back("add:" + strategy->name(), machine.take_counts());
            simd_sub(machine, a, b, *strategy);
            ops.emplace_back("sub:" + strategy->name(), machine.take_counts());
        }
        for (Backend backend : backends) {
            const BigInt T = random_below(generic->pR(), rng);
            ops.emplace_back("redc:" + std::string(backend_name(backend)),
                             run_reduction(backend, T, *generic, friendly));
        }
        return ops;
    };

    const auto first = measure(cfg.seed);
    const auto second = measure(cfg.seed + 1);
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!(first[i].second == second[i].second)) {
            err << "count mismatch for " << first[i].first << ": operation counts depend on operand values\n";
            return kExitFailure;
        }
    }

    Json report = {{"prime", prime.name},
                   {"p", to_hex(prime.p)},
                   {"omega", prime.cfg.omega},
                   {"limbs", prime.cfg.n},
                   {"seed", cfg.seed},
                   {"operations", Json::array()}};
    OpCounts total;
    for (const auto& [name, counts] : first) {
        report["operations"].push_back(
            {{"name", name}, {"counts", counts_json(counts)}, {"cycles", cycles_json(counts, models)}});
        total += counts;
    }
    report["total"] = {{"counts", counts_json(total)}, {"cycles", cycles_json(total, models)}};
    out << report.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// redc / mulmod

int cmd_redc(const RunConfig& cfg, const std::string& t_hex, std::ostream& out, std::ostream& err) {
    try {
        const PrimePreset prime = resolve_prime(cfg);
        RunConfig single = cfg;
        if (single.backend == "all") single.backend = "generic-proposed";
        const std::vector<Backend> backends = resolve_backends(single, prime);
        if (backends.empty()) throw ConfigError("redc needs a reduction back end");
        const BigInt T = parse_operand(t_hex, prime.cfg, "T");
        const PrimeContext generic = PrimeContext::create(prime.p, prime.cfg);
        const auto friendly = friendly_for(backends, prime);
        out << to_hex(reduce_with(backends.front(), T, generic, friendly)) << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
    }
    return kExitConfig;
}

int cmd_mulmod(const RunConfig& cfg, const std::string& a_hex, const std::string& b_hex, std::ostream& out,
               std::ostream& err) {
    try {
        const PrimePreset prime = resolve_prime(cfg);
        RunConfig single = cfg;
        if (single.backend == "all") single.backend = "generic-proposed";
        const std::vector<Backend> backends = resolve_backends(single, prime);
        if (backends.empty()) throw ConfigError("mulmod needs a reduction back end");
        FieldOptions options;
        options.backend = backends.front();
        options.add_strategy = resolve_strategy(cfg, prime.cfg);
        const FieldPtr field = FieldContext::create(prime.p, prime.cfg, options);
        const BigInt a = parse_operand(a_hex, prime.cfg, "a");
        const BigInt b = parse_operand(b_hex, prime.cfg, "b");
        out << to_hex(from_mont(fmul(to_mont(a, field), to_mont(b, field)))) << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
    }
    return kExitConfig;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    PrimePreset prime;
    std::vector<Backend> backends;
    std::optional<PrimeContext> generic;
    std::optional<FriendlyContext> friendly;
    try {
        prime = resolve_prime(cfg);
        backends = resolve_backends(cfg, prime);
        generic = PrimeContext::create(prime.p, prime.cfg);
        friendly = friendly_for(backends, prime);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::mt19937_64 rng(cfg.seed);
    std::vector<BigInt> inputs;
    for (std::size_t i = 0; i < cfg.trials; ++i) inputs.push_back(random_below(generic->pR(), rng));
    out << "wall-clock timings of the portable model (not hardware cycles)\n";
    for (Backend backend : backends) {
        const auto start = std::chrono::steady_clock::now();
        for (const BigInt& T : inputs) reduce_with(backend, T, *generic, friendly);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        const double ns = std::chrono::duration<double, std::nano>(elapsed).count();
        out << backend_name(backend) << ": " << static_cast<std::uint64_t>(ns / std::max<std::size_t>(inputs.size(), 1))
            << " ns/op over " << inputs.size() << " reductions\n";
    }
    return kExitOk;
}

}  // namespace mpsimd::cli
