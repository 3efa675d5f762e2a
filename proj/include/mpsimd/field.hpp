#pragma once

// Prime-field arithmetic on Montgomery representatives A * R mod p.
//
// A FieldContext fixes the modulus, the reduction back end, the adder used
// by fadd/fsub and whether residues are kept lazily in [0, 2p). Elements keep
// a shared pointer to their context; mixing contexts is an error.

#include <memory>
#include <optional>
#include <string_view>

#include "mpsimd/mont_generic.hpp"
#include "mpsimd/mont_special.hpp"
#include "mpsimd/simd_add.hpp"

namespace mpsimd {

enum class Backend { GenericReference, GenericProposed, FriendlyReference, FriendlyProposed };

// "generic-reference", "generic-proposed", "friendly-reference", "friendly-proposed".
std::string_view backend_name(Backend b);
std::optional<Backend> parse_backend(std::string_view name);

struct FieldOptions {
    Backend backend = Backend::GenericProposed;
    // Residues in [0, 2p); requires R > 4p.
    bool lazy = false;
    // Adder for fadd/fsub; nullopt selects plain carry propagation.
    std::optional<AddStrategy> add_strategy;
    // Karatsuba (threshold 2) instead of schoolbook for products.
    bool karatsuba = false;
};

class FieldContext {
public:
    // Throws PreconditionError when lazy mode is requested with R <= 4p,
    // when a friendly back end is requested for an unsuitable p, or when the
    // add strategy does not fit the radix.
    static std::shared_ptr<const FieldContext> create(const BigInt& p, RadixConfig cfg, FieldOptions options = {});

    const FieldOptions& options() const noexcept { return options_; }
    const BigInt& p() const noexcept { return generic_->p(); }
    const RadixConfig& cfg() const noexcept { return generic_->cfg(); }
    const PrimeContext& generic() const noexcept { return *generic_; }
    // Null unless the back end is a friendly one.
    const FriendlyContext* friendly() const noexcept { return friendly_ ? &*friendly_ : nullptr; }
    // Exclusive upper bound of stored residues: p, or 2p in lazy mode.
    const BigInt& bound() const noexcept { return bound_; }

    // T * R^-1 mod p through the configured back end; T < pR.
    BigInt reduce(LaneMachine& machine, const BigInt& T, Correction mode) const;

private:
    FieldContext() = default;

    FieldOptions options_;
    std::optional<PrimeContext> generic_;
    std::optional<FriendlyContext> friendly_;
    BigInt bound_;
};

using FieldPtr = std::shared_ptr<const FieldContext>;

class FieldElement {
public:
    FieldElement(BigInt value, FieldPtr ctx) : value_(std::move(value)), ctx_(std::move(ctx)) {}

    const BigInt& value() const noexcept { return value_; }
    const FieldPtr& context() const noexcept { return ctx_; }

private:
    BigInt value_;
    FieldPtr ctx_;
};

// Throws PreconditionError unless a < p.
FieldElement to_mont(const BigInt& a, const FieldPtr& ctx);
BigInt from_mont(const FieldElement& a);

// Binary operations throw std::invalid_argument for elements of different contexts.
FieldElement fmul(const FieldElement& a, const FieldElement& b);
FieldElement fsqr(const FieldElement& a);
FieldElement fadd(const FieldElement& a, const FieldElement& b);
FieldElement fsub(const FieldElement& a, const FieldElement& b);
FieldElement normalize(const FieldElement& a);
bool feq(const FieldElement& a, const FieldElement& b);

}  // namespace mpsimd
