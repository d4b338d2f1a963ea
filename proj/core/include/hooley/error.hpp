#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hooley {

// Argument outside the mathematical domain of an operation (n = 0, m = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated a documented precondition (length mismatch, gcd condition, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A brute-force scan or enumeration would exceed its configured ceiling.
// `hint` names the cheapest admissible alternative when one exists.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::string hint = {})
      : std::runtime_error(what), hint_(std::move(hint)) {}
  const std::string& hint() const noexcept { return hint_; }

 private:
  std::string hint_;
};

// Budget ran out part way through a segmented computation. Everything below
// `boundary` was computed exactly and is carried along.
class PartialResultError : public BudgetError {
 public:
  PartialResultError(const std::string& what, std::uint64_t boundary,
                     std::uint64_t partial_sum, double partial_log_sum)
      : BudgetError(what),
        boundary_(boundary),
        partial_sum_(partial_sum),
        partial_log_sum_(partial_log_sum) {}
  std::uint64_t boundary() const noexcept { return boundary_; }
  std::uint64_t partial_sum() const noexcept { return partial_sum_; }
  double partial_weighted_sum() const noexcept { return partial_log_sum_; }

 private:
  std::uint64_t boundary_;
  std::uint64_t partial_sum_;
  double partial_log_sum_;
};

// An exact identity that should hold did not. `where` names the offending
// component, e.g. "j=1" or "h=2".
class MismatchError : public std::runtime_error {
 public:
  MismatchError(const std::string& what, std::string where)
      : std::runtime_error(what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// A hard invariant check failed. Indicates a bug, not a property of the data.
class AssertionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hooley
