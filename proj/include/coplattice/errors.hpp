#pragma once

#include <stdexcept>
#include <string>

namespace coplattice {

// Caller broke a precondition (dimension mismatch, call after capture, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// No cop qualifies in a direction whose census is bounded.
class BoundedDirection : public std::runtime_error {
public:
    BoundedDirection(const std::string& direction, const std::string& what)
        : std::runtime_error(what), direction_(direction) {}

    const std::string& direction() const noexcept { return direction_; }

private:
    std::string direction_;
};

// Malformed or inconsistent copset specification. `field` is a JSON-pointer
// style path ("generators[1].base"), empty for document-level problems.
class SpecError : public std::runtime_error {
public:
    SpecError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IllegalMove : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coplattice
