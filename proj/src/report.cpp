#include "hurewicz/report.hpp"

#include <stdexcept>

namespace hurewicz {

CheckTally& Report::find(const std::string& name) {
  for (CheckTally& c : checks_) {
    if (c.name == name) return c;
  }
  throw std::logic_error("undeclared check: " + name);
}

void Report::declare(const std::string& name, const std::string& statement) {
  for (CheckTally& c : checks_) {
    if (c.name == name) return;
  }
  checks_.push_back({name, statement});
}

void Report::pass(const std::string& name, std::size_t n) { find(name).passed += n; }

void Report::inconclusive(const std::string& name, std::size_t n) { find(name).inconclusive += n; }

void Report::fail(const std::string& name, Json counterexample) {
  CheckTally& c = find(name);
  ++c.failed;
  if (c.kept < kMaxCounterexamples) {
    ++c.kept;
    Json entry = Json::object();
    entry["check"] = name;
    for (auto& [k, v] : counterexample.items()) entry[k] = v;
    counterexamples_.push_back(std::move(entry));
    counterexample_check_.push_back(name);
  }
}

void Report::merge(const Report& other) {
  for (const CheckTally& o : other.checks_) {
    declare(o.name, o.statement);
    CheckTally& c = find(o.name);
    c.passed += o.passed;
    c.failed += o.failed;
    c.inconclusive += o.inconclusive;
  }
  for (std::size_t i = 0; i < other.counterexamples_.size(); ++i) {
    CheckTally& c = find(other.counterexample_check_[i]);
    if (c.kept < kMaxCounterexamples) {
      ++c.kept;
      counterexamples_.push_back(other.counterexamples_[i]);
      counterexample_check_.push_back(c.name);
    }
  }
}

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const CheckTally& c : checks_) n += c.failed;
  return n;
}

std::size_t Report::inconclusives() const {
  std::size_t n = 0;
  for (const CheckTally& c : checks_) n += c.inconclusive;
  return n;
}

std::size_t Report::passes() const {
  std::size_t n = 0;
  for (const CheckTally& c : checks_) n += c.passed;
  return n;
}

Json Report::to_json() const {
  Json out = Json::object();
  out["schema"] = kSchema;
  out["suite"] = suite_;
  out["params"] = params_;
  Json checks = Json::array();
  for (const CheckTally& c : checks_) {
    Json j = Json::object();
    j["name"] = c.name;
    j["statement"] = c.statement;
    j["passed"] = c.passed;
    j["failed"] = c.failed;
    j["inconclusive"] = c.inconclusive;
    checks.push_back(std::move(j));
  }
  out["checks"] = std::move(checks);
  out["counterexamples"] = counterexamples_;
  if (!findings_.empty()) out["findings"] = findings_;
  Json summary = Json::object();
  summary["passed"] = passes();
  summary["failed"] = failures();
  summary["inconclusive"] = inconclusives();
  summary["mode"] = assertive_ ? "assertive" : "exploratory";
  summary["status"] = ok() ? "pass" : "fail";
  out["summary"] = std::move(summary);
  return out;
}

}  // namespace hurewicz
