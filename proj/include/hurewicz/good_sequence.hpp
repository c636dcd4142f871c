#pragma once

#include "hurewicz/common.hpp"
#include "hurewicz/report.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hurewicz {

/// Index sequence for h_s; every entry must be positive.
using PosSeq = std::vector<std::uint64_t>;

std::string to_string(const PosSeq& s);

/// A finite binary word, optionally continued by a repeated period.
class BitPrefix {
 public:
  BitPrefix() = default;
  explicit BitPrefix(std::vector<bool> bits, std::vector<bool> period = {})
      : bits_(std::move(bits)), period_(std::move(period)) {}

  /// "0110" or "0110(01)" for 0110 followed by 01 repeated.
  static BitPrefix parse(const std::string& text);

  std::size_t length() const { return bits_.size(); }
  const std::vector<bool>& bits() const { return bits_; }
  const std::vector<bool>& period() const { return period_; }
  bool periodic() const { return !period_.empty(); }

  /// Bit i, or nullopt past the explicit part when there is no period.
  std::optional<bool> at(const mpz_class& i) const;
  std::string to_string() const;

 private:
  std::vector<bool> bits_;
  std::vector<bool> period_;
};

/// sigma_s precomputed: m_j = J(s|j) / q_{j-1} for 1 <= j <= |s|.
class IndexMap {
 public:
  /// UsageError on a zero entry.
  explicit IndexMap(PosSeq s);

  const PosSeq& s() const { return s_; }
  mpz_class operator()(const mpz_class& k) const;
  /// Same on machine words; nullopt when the result would not fit.
  std::optional<std::uint64_t> operator()(std::uint64_t k) const;
  /// The level i chosen for k, or 0 when sigma_s(k) = k.
  std::size_t level(const mpz_class& k) const;
  const std::vector<mpz_class>& moduli() const { return m_; }

 private:
  PosSeq s_;
  std::vector<mpz_class> m_;             // m_[j-1] = J(s|j) / q_{j-1}
  std::vector<std::uint64_t> m_small_;   // same, 0 when too large
  std::vector<std::uint64_t> q_;         // q_[j-1] = q_{j-1}
};

/// sigma_s(k): h_s(x)(k) = x(sigma_s(k)).
mpz_class sigma(const PosSeq& s, const mpz_class& k);

/// h_s(x)(k), unknown when x does not reach sigma_s(k).
std::optional<bool> h_eval(const PosSeq& s, const BitPrefix& x, const mpz_class& k);

/// J(s^k) / q_{|s|} - 1: h_{s^k} and h_s agree below this index.
mpz_class convergence_bound(const PosSeq& s, std::uint64_t k);

struct DisagreementWitness {
  BitPrefix x;        // extends u
  mpz_class k;        // h_s(x)(k) != h_t(x)(k)
  mpz_class source_s;  // sigma_s(k)
  mpz_class source_t;  // sigma_t(k)
  std::uint64_t n = 0;
  bool prefix_case = false;  // one index sequence is a strict prefix of the other
};

/// A point extending u where h_s and h_t differ. UsageError when s = t.
DisagreementWitness disagreement_witness(const PosSeq& s, const PosSeq& t, const BitPrefix& u);

struct GoodSuiteOptions {
  std::size_t max_s_len = 3;    // sigma tested for every s with |s| <= this
  std::uint64_t max_entry = 4;  // and entries in 1..max_entry
  std::uint64_t horizon = 100000;
  std::uint64_t max_k = 6;            // convergence tested for s^k, k <= this
  std::size_t witness_len = 2;        // witness pairs: |s|,|t| <= this
  std::uint64_t witness_entry = 3;    // and entries <= this
  std::size_t witness_u_len = 12;     // every u with |u| <= this
};

Report verify_good_sequence(const GoodSuiteOptions& opt);

/// Every sequence with entries in 1..max_entry and length <= max_len,
/// shortest first then lexicographic.
std::vector<PosSeq> positive_sequences(std::size_t max_len, std::uint64_t max_entry);

}  // namespace hurewicz
