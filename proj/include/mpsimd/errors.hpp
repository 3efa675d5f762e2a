#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpsimd {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class RadixMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotInvertible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An input violates a documented precondition (T >= pR, even modulus, ...).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An internal invariant failed; indicates a bug or corrupted constants.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mpsimd
