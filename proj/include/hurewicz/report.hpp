#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace hurewicz {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "hurewicz-kit/1";

/// Outcome counts for one named check of a suite. Inconclusive means the
/// horizon ran out before the check could be decided; it is not a failure.
struct CheckTally {
  std::string name;
  std::string statement;  // the finite inequality or identity being checked
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::size_t kept = 0;  // counterexamples stored
};

/// Verification report with a stable JSON rendering (no timestamps, keys
/// in insertion order), so equal runs give equal bytes.
class Report {
 public:
  explicit Report(std::string suite, bool assertive = true) : suite_(std::move(suite)), assertive_(assertive) {}

  Json& params() { return params_; }
  Json& findings() { return findings_; }

  /// Registers a check; later calls with the same name reuse it.
  void declare(const std::string& name, const std::string& statement);
  void pass(const std::string& name, std::size_t n = 1);
  void fail(const std::string& name, Json counterexample);
  void inconclusive(const std::string& name, std::size_t n = 1);
  /// pass() or fail() depending on ok; the counterexample is built lazily.
  template <class F>
  void expect(const std::string& name, bool ok, F&& counterexample) {
    if (ok) {
      pass(name);
    } else {
      fail(name, counterexample());
    }
  }

  /// Adds the other report's tallies and counterexamples (same caps).
  void merge(const Report& other);

  std::size_t failures() const;
  std::size_t inconclusives() const;
  std::size_t passes() const;
  const std::vector<CheckTally>& checks() const { return checks_; }
  const std::string& suite() const { return suite_; }
  /// Exploratory suites record evidence but never fail.
  bool assertive() const { return assertive_; }
  bool ok() const { return !assertive_ || failures() == 0; }

  Json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }

  /// Counterexamples kept per check; the tallies still count every failure.
  static constexpr std::size_t kMaxCounterexamples = 16;

 private:
  CheckTally& find(const std::string& name);

  std::string suite_;
  bool assertive_ = true;
  Json params_ = Json::object();
  Json findings_ = Json::object();
  std::vector<CheckTally> checks_;
  std::vector<Json> counterexamples_;
  std::vector<std::string> counterexample_check_;
};

}  // namespace hurewicz
