#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hurewicz {

/// Bad arguments: length mismatches, malformed input, zero entries where
/// positive ones are required.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request beyond the configured depth / horizon / node caps.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A finite prefix is too short for the requested operation. required()
/// is the prefix length that would have sufficed.
class HorizonError : public std::runtime_error {
 public:
  HorizonError(const std::string& what, std::size_t required)
      : std::runtime_error(what + " (needs a prefix of length " + std::to_string(required) + ")"),
        required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// A point outside the domain of the map being applied.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    default:
      return "unknown";
  }
}

struct Limits {
  std::size_t max_depth = 5;
  std::size_t max_horizon = 1'000'000;
  // enumerate_nodes(5) would hold ~3.3M nodes; refuse anything past this.
  std::size_t max_nodes = std::size_t{1} << 21;
};

/// Deliberate faults used to show that the verification suites can fail.
struct Mutation {
  bool rewrite_off_by_one = false;  // rewrite to J(x|q ^ 0) instead of J(x|q ^ 1)
  bool drop_non_ones = false;       // forget the must-not-be-1 constraints
  bool relax_epsilon = false;       // accept child distances equal to the bound

  bool any() const { return rewrite_off_by_one || drop_non_ones || relax_epsilon; }
};

}  // namespace hurewicz
