#pragma once

#include <stdexcept>
#include <string>

namespace hitomezashi {

// Caller broke a documented precondition (non-adjacent endpoints, absent edge,
// non-positive budget, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the decomposer when an ordering, parity or length identity that
// must hold for every Hitomezashi loop fails. Reaching this is a bug or a
// counterexample; `detail` carries the offending data.
class InternalContradiction : public std::runtime_error {
public:
    InternalContradiction(std::string check, std::string detail)
        : std::runtime_error(check + ": " + detail),
          check_(std::move(check)),
          detail_(std::move(detail)) {}

    const std::string& check() const noexcept { return check_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string check_;
    std::string detail_;
};

} // namespace hitomezashi
