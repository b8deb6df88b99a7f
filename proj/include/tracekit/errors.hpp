#pragma once

#include <stdexcept>
#include <string>

namespace tracekit {

// Error taxonomy shared by the library and the CLI exit-code mapping:
//   ParseError    -> malformed input text (exit 2)
//   DomainError   -> out-of-range ids, mismatched row universes (exit 2)
//   ContractError -> violated operation precondition (exit 3)
//   BudgetError   -> configured search budget exhausted (exit 4)

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line)
        : std::runtime_error(std::move(msg)), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by certificate evaluation when no stored sequence settles the
// queried column; only reachable for columns outside the certificate's
// original domain.
class UndeterminedError : public std::runtime_error {
public:
    UndeterminedError(const std::string& msg, int col)
        : std::runtime_error(msg), col_(col) {}
    int col() const { return col_; }

private:
    int col_;
};

// Cooperative work counter. Operations with potentially exponential search
// spaces charge units against it and abort with BudgetError when exhausted.
class Budget {
public:
    Budget() = default;
    explicit Budget(std::uint64_t limit) : limit_(limit) {}

    void charge(std::uint64_t units = 1) const {
        used_ += units;
        if (limit_ != 0 && used_ > limit_)
            throw BudgetError("budget exceeded (" + std::to_string(limit_) + " units)");
    }
    std::uint64_t used() const { return used_; }
    std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_ = 0;  // 0 = unlimited
    mutable std::uint64_t used_ = 0;
};

}  // namespace tracekit
