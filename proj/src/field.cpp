#include "mpsimd/field.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "mpsimd/errors.hpp"

namespace mpsimd {

namespace {

constexpr std::array<std::pair<Backend, std::string_view>, 4> kBackends = {{
    {Backend::GenericReference, "generic-reference"},
    {Backend::GenericProposed, "generic-proposed"},
    {Backend::FriendlyReference, "friendly-reference"},
    {Backend::FriendlyProposed, "friendly-proposed"},
}};

const FieldContext& shared_context(const FieldElement& a, const FieldElement& b, const char* op) {
    if (a.context() != b.context()) {
        throw std::invalid_argument(std::string(op) + ": elements belong to different field contexts");
    }
    return *a.context();
}

BigInt product(const FieldContext& ctx, const BigInt& a, const BigInt& b) {
    const std::size_t n = ctx.cfg().n;
    return ctx.options().karatsuba ? mul_karatsuba(a.resized(n), b.resized(n), 2).value
                                   : mul_schoolbook(a.resized(n), b.resized(n)).value;
}

struct AddOut {
    BigInt value;
    bool carry;
};

// n + 1 limbs so that sums of two residues below 2p never wrap.
AddOut add_wide(const FieldContext& ctx, const BigInt& a, const BigInt& b) {
    const std::size_t width = ctx.cfg().n + 1;
    if (const auto& s = ctx.options().add_strategy) {
        auto r = simd_add(a.resized(width), b.resized(width), *s);
        return {std::move(r.sum), r.carry_out};
    }
    auto r = add_carry_propagate(a.resized(width), b.resized(width));
    return {std::move(r.sum), r.carry_out};
}

AddOut sub_wide(const FieldContext& ctx, const BigInt& a, const BigInt& b) {
    const std::size_t width = ctx.cfg().n + 1;
    if (const auto& s = ctx.options().add_strategy) {
        auto r = simd_sub(a.resized(width), b.resized(width), *s);
        return {std::move(r.diff), r.borrow_out};
    }
    auto r = sub_borrow_propagate(a.resized(width), b.resized(width));
    return {std::move(r.diff), r.borrow_out};
}

FieldElement make(const BigInt& value, const FieldPtr& ctx) {
    return FieldElement(value.canonical().resized(ctx->cfg().n), ctx);
}

}  // namespace

std::string_view backend_name(Backend b) {
    for (const auto& [backend, name] : kBackends) {
        if (backend == b) return name;
    }
    return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
    for (const auto& [backend, text] : kBackends) {
        if (text == name) return backend;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const FieldContext> FieldContext::create(const BigInt& p, RadixConfig cfg, FieldOptions options) {
    std::shared_ptr<FieldContext> ctx(new FieldContext());
    ctx->options_ = options;
    ctx->generic_ = PrimeContext::create(p, cfg);
    if (options.lazy && !ctx->generic_->lazy_ok()) {
        throw PreconditionError("field context: lazy mode needs R > 4p, but R = " + to_hex(ctx->generic_->R()) +
                                " and p = " + to_hex(ctx->generic_->p()));
    }
    if (options.backend == Backend::FriendlyReference || options.backend == Backend::FriendlyProposed) {
        ctx->friendly_ = FriendlyContext::create(p, cfg);
        if (options.backend == Backend::FriendlyProposed && !ctx->friendly_->proposed_admissible()) {
            throw PreconditionError("field context: modulus does not admit the half-width friendly reduction");
        }
    }
    if (options.add_strategy) options.add_strategy->check_compatible(ctx->generic_->cfg());
    ctx->bound_ = options.lazy ? add(ctx->generic_->p(), ctx->generic_->p()) : ctx->generic_->p();
    return ctx;
}

BigInt FieldContext::reduce(LaneMachine& machine, const BigInt& T, Correction mode) const {
    switch (options_.backend) {
        case Backend::GenericReference: return redc_reference(machine, T, *generic_, mode).value;
        case Backend::GenericProposed: return redc_proposed(machine, T, *generic_, mode).value;
        case Backend::FriendlyReference: return redc_friendly_reference(machine, T, *friendly_, mode).value;
        case Backend::FriendlyProposed: return redc_friendly_proposed(machine, T, *friendly_, mode).value;
    }
    throw std::logic_error("unknown reduction back end");
}

// ---------------------------------------------------------------------------

FieldElement to_mont(const BigInt& a, const FieldPtr& ctx) {
    if (a.omega() != ctx->cfg().omega) throw RadixMismatch("to_mont: operand radix does not match the field");
    if (a >= ctx->p()) throw PreconditionError("to_mont: operand " + to_hex(a) + " is not below p");
    LaneMachine machine;
    const Correction mode = ctx->options().lazy ? Correction::Lazy : Correction::Full;
    return make(ctx->reduce(machine, mul(a, ctx->generic().r2()), mode), ctx);
}

BigInt from_mont(const FieldElement& a) {
    LaneMachine machine;
    BigInt v = a.context()->reduce(machine, a.value(), Correction::Full);
    return v.resized(a.context()->cfg().n);
}

FieldElement fmul(const FieldElement& a, const FieldElement& b) {
    const FieldContext& ctx = shared_context(a, b, "fmul");
    LaneMachine machine;
    const Correction mode = ctx.options().lazy ? Correction::Lazy : Correction::Full;
    return make(ctx.reduce(machine, product(ctx, a.value(), b.value()), mode), a.context());
}

FieldElement fsqr(const FieldElement& a) {
    const FieldContext& ctx = *a.context();
    LaneMachine machine;
    const Correction mode = ctx.options().lazy ? Correction::Lazy : Correction::Full;
    const BigInt square = square_schoolbook(a.value().resized(ctx.cfg().n)).value;
    return make(ctx.reduce(machine, square, mode), a.context());
}

FieldElement fadd(const FieldElement& a, const FieldElement& b) {
    const FieldContext& ctx = shared_context(a, b, "fadd");
    AddOut s = add_wide(ctx, a.value(), b.value());
    if (s.value >= ctx.bound()) s = sub_wide(ctx, s.value, ctx.bound());
    return make(s.value, a.context());
}

FieldElement fsub(const FieldElement& a, const FieldElement& b) {
    const FieldContext& ctx = shared_context(a, b, "fsub");
    AddOut d = sub_wide(ctx, a.value(), b.value());
    // A borrow leaves a - b + 2^(w(n+1)); adding the bound wraps it back.
    if (d.carry) d = add_wide(ctx, d.value, ctx.bound());
    return make(d.value, a.context());
}

FieldElement normalize(const FieldElement& a) {
    const FieldContext& ctx = *a.context();
    if (a.value() >= ctx.p()) return make(sub(a.value(), ctx.p()), a.context());
    return a;
}

bool feq(const FieldElement& a, const FieldElement& b) {
    shared_context(a, b, "feq");
    return normalize(a).value() == normalize(b).value();
}

}  // namespace mpsimd
