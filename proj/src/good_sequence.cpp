#include "hurewicz/good_sequence.hpp"

#include "hurewicz/prime_coding.hpp"

#include <algorithm>

namespace hurewicz {

namespace {

void require_positive(const PosSeq& s) {
  for (std::uint64_t v : s) {
    if (v == 0) throw UsageError("index sequences for h_s take positive entries only: " + to_string(s));
  }
}

mpz_class prime_power(std::size_t i, std::uint64_t e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), nth_prime(i), e);
  return out;
}

mpz_class code(const PosSeq& s) {
  mpz_class out = 1;
  for (std::size_t i = 0; i < s.size(); ++i) out *= prime_power(i, s[i] + 1);
  return out;
}

std::optional<std::uint64_t> as_u64(const mpz_class& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::nullopt;
  return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

bool coprime(std::uint64_t v, const std::vector<mpz_class>& moduli) {
  const mpz_class big(std::to_string(v));
  for (const mpz_class& m : moduli) {
    if (gcd(big, m) != 1) return false;
  }
  return true;
}

std::string mpz_json(const mpz_class& v) { return v.get_str(); }

}  // namespace

std::string to_string(const PosSeq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + ")";
}

BitPrefix BitPrefix::parse(const std::string& text) {
  std::vector<bool> bits, period;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != '('; ++i) {
    if (text[i] != '0' && text[i] != '1') throw UsageError("bit strings use 0 and 1: " + text);
    bits.push_back(text[i] == '1');
  }
  if (i < text.size()) {
    if (text.back() != ')' || i + 2 >= text.size()) throw UsageError("period must look like (01): " + text);
    for (std::size_t j = i + 1; j + 1 < text.size(); ++j) {
      if (text[j] != '0' && text[j] != '1') throw UsageError("bit strings use 0 and 1: " + text);
      period.push_back(text[j] == '1');
    }
  }
  return BitPrefix(std::move(bits), std::move(period));
}

std::optional<bool> BitPrefix::at(const mpz_class& i) const {
  if (sgn(i) < 0) return std::nullopt;
  if (i < bits_.size()) return bits_[static_cast<std::size_t>(i.get_ui())];
  if (period_.empty()) return std::nullopt;
  const mpz_class offset = (i - bits_.size()) % period_.size();
  return period_[static_cast<std::size_t>(offset.get_ui())];
}

std::string BitPrefix::to_string() const {
  std::string out;
  for (bool b : bits_) out += b ? '1' : '0';
  if (!period_.empty()) {
    out += '(';
    for (bool b : period_) out += b ? '1' : '0';
    out += ')';
  }
  return out;
}

IndexMap::IndexMap(PosSeq s) : s_(std::move(s)) {
  require_positive(s_);
  mpz_class j = 1;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    m_.push_back(j * prime_power(i, s_[i]));
    j *= prime_power(i, s_[i] + 1);
    m_small_.push_back(as_u64(m_.back()).value_or(0));
    q_.push_back(nth_prime(i));
  }
}

std::size_t IndexMap::level(const mpz_class& k) const {
  const mpz_class next = k + 1;
  for (std::size_t j = m_.size(); j >= 1; --j) {
    if (mpz_divisible_p(next.get_mpz_t(), m_[j - 1].get_mpz_t())) return j;
  }
  return 0;
}

mpz_class IndexMap::operator()(const mpz_class& k) const {
  if (sgn(k) < 0) throw UsageError("sigma takes a natural number");
  const std::size_t i = level(k);
  if (i == 0) return k;
  // J(s|i) q - m_i - 1 with q = (k+1)/m_i, and J(s|i) = m_i q_{i-1}
  return mpz_class((k + 1) * q_[i - 1] - m_[i - 1] - 1);
}

std::optional<std::uint64_t> IndexMap::operator()(std::uint64_t k) const {
  if (k == UINT64_MAX) return std::nullopt;
  const std::uint64_t next = k + 1;
  for (std::size_t j = m_.size(); j >= 1; --j) {
    const std::uint64_t m = m_small_[j - 1];
    if (m == 0) continue;  // larger than any machine-word k + 1
    if (next % m != 0) continue;
    std::uint64_t out;
    if (__builtin_mul_overflow(next, q_[j - 1], &out)) return std::nullopt;
    return out - m - 1;
  }
  return k;
}

mpz_class sigma(const PosSeq& s, const mpz_class& k) { return IndexMap(s)(k); }

std::optional<bool> h_eval(const PosSeq& s, const BitPrefix& x, const mpz_class& k) { return x.at(sigma(s, k)); }

mpz_class convergence_bound(const PosSeq& s, std::uint64_t k) {
  require_positive(s);
  if (k == 0) throw UsageError("the appended index must be positive");
  return mpz_class(code(s) * prime_power(s.size(), k) - 1);
}

DisagreementWitness disagreement_witness(const PosSeq& s, const PosSeq& t, const BitPrefix& u) {
  require_positive(s);
  require_positive(t);
  if (s == t) throw UsageError("disagreement needs two different sequences");
  const IndexMap hs(s), ht(t);
  const std::size_t common = std::min(s.size(), t.size());
  std::size_t m = 0;
  while (m < common && s[m] == t[m]) ++m;

  DisagreementWitness w;
  mpz_class base;
  std::uint64_t mult;
  if (m < common) {
    const PosSeq& hi = s[m] < t[m] ? t : s;
    base = code(PosSeq(hi.begin(), hi.begin() + static_cast<std::ptrdiff_t>(m + 1))) / nth_prime(m);
    mult = nth_prime(m + 2);
  } else {
    const PosSeq& longer = s.size() > t.size() ? s : t;
    base = code(longer) / nth_prime(longer.size() - 1);
    mult = nth_prime(longer.size() + 1);
    w.prefix_case = true;
  }

  const std::size_t floor = u.length();
  mpz_class scale = 1;
  for (std::uint64_t n = 0; n < 4096; ++n, scale *= mult) {
    const mpz_class k = base * scale - 1;
    mpz_class a = hs(k), b = ht(k);
    if (a < floor || b < floor || a == b) continue;
    const mpz_class top = a > b ? a : b;
    if (mpz_sizeinbase(top.get_mpz_t(), 2) > 40) throw CapacityError("witness index too large to materialize");
    std::vector<bool> bits = u.bits();
    bits.resize(static_cast<std::size_t>(top.get_ui()) + 1, false);
    bits[static_cast<std::size_t>(a.get_ui())] = false;
    bits[static_cast<std::size_t>(b.get_ui())] = true;
    w.x = BitPrefix(std::move(bits));
    w.k = k;
    w.source_s = std::move(a);
    w.source_t = std::move(b);
    w.n = n;
    return w;
  }
  throw std::logic_error("no disagreement found for " + to_string(s) + " and " + to_string(t));
}

std::vector<PosSeq> positive_sequences(std::size_t max_len, std::uint64_t max_entry) {
  std::vector<PosSeq> out{{}};
  std::size_t start = 0;
  for (std::size_t len = 1; len <= max_len && max_entry > 0; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i) {
      for (std::uint64_t v = 1; v <= max_entry; ++v) {
        PosSeq s = out[i];
        s.push_back(v);
        out.push_back(std::move(s));
      }
    }
    start = end;
  }
  return out;
}

Report verify_good_sequence(const GoodSuiteOptions& o) {
  if (o.horizon > (std::uint64_t{1} << 32)) throw CapacityError("horizon above 2^32 is not supported");
  if (o.witness_u_len > 20) throw CapacityError("prefix length above 20 is not supported");
  Report r("good-sequence");
  r.params()["max_s_len"] = o.max_s_len;
  r.params()["max_entry"] = o.max_entry;
  r.params()["horizon"] = o.horizon;
  r.params()["max_k"] = o.max_k;
  r.params()["witness_len"] = o.witness_len;
  r.params()["witness_entry"] = o.witness_entry;
  r.params()["witness_u_len"] = o.witness_u_len;
  r.declare("sigma-injective", "sigma_s is injective on [0, horizon)");
  r.declare("sigma-fixes-coprime", "sigma_s(k) = k whenever k + 1 is coprime to every m_j = J(s|j)/q_{j-1}");
  r.declare("convergence-shadow", "sigma_{s^k}(n) = sigma_s(n) for n < J(s^k)/q_{|s|} - 1");
  r.declare("bound-monotone", "J(s^k)/q_{|s|} - 1 increases with k");
  r.declare("disagreement-witness", "the witness extends u and h_s, h_t read different bits at k");

  const auto seqs = positive_sequences(o.max_s_len, o.max_entry);
  std::vector<std::uint64_t> values(o.horizon);
  for (const PosSeq& s : seqs) {
    const IndexMap map(s);
    std::optional<std::uint64_t> coprime_bad;
    for (std::uint64_t k = 0; k < o.horizon; ++k) {
      const auto v = map(k);
      if (!v) throw CapacityError("sigma value overflow for " + to_string(s));
      values[k] = *v;
      if (!coprime_bad && *v != k && coprime(k + 1, map.moduli())) coprime_bad = k;
    }
    r.expect("sigma-fixes-coprime", !coprime_bad, [&] { return Json{{"s", to_string(s)}, {"k", *coprime_bad}}; });
    std::vector<std::uint64_t> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    r.expect("sigma-injective", dup == sorted.end(), [&] {
      Json ks = Json::array();
      for (std::uint64_t k = 0; k < o.horizon; ++k) {
        if (values[k] == *dup) ks.push_back(k);
      }
      return Json{{"s", to_string(s)}, {"value", *dup}, {"k", ks}};
    });
  }

  std::size_t sharp = 0, tested = 0;
  for (const PosSeq& s : seqs) {
    if (s.size() >= o.max_s_len) continue;
    const IndexMap map(s);
    mpz_class previous = -1;
    for (std::uint64_t k = 1; k <= o.max_k; ++k) {
      PosSeq sk = s;
      sk.push_back(k);
      const IndexMap ext(sk);
      const mpz_class bound = convergence_bound(s, k);
      r.expect("bound-monotone", bound > previous, [&] {
        return Json{{"s", to_string(s)}, {"k", k}, {"bound", mpz_json(bound)}};
      });
      previous = bound;
      const std::uint64_t limit = bound < o.horizon ? bound.get_ui() : o.horizon;
      std::optional<std::uint64_t> bad;
      for (std::uint64_t n = 0; n < limit && !bad; ++n) {
        if (map(n) != ext(n)) bad = n;
      }
      r.expect("convergence-shadow", !bad, [&] {
        return Json{{"s", to_string(s)}, {"k", k}, {"bound", mpz_json(bound)}, {"n", *bad}};
      });
      ++tested;
      if (bound < o.horizon && map(bound) != ext(bound)) ++sharp;
    }
  }
  r.findings()["convergence_pairs"] = tested;
  r.findings()["first_difference_at_bound"] = sharp;

  const auto pairs_from = positive_sequences(o.witness_len, o.witness_entry);
  std::size_t prefix_cases = 0, largest_n = 0;
  for (const PosSeq& s : pairs_from) {
    for (const PosSeq& t : pairs_from) {
      if (s == t) continue;
      for (std::size_t len = 0; len <= o.witness_u_len; ++len) {
        for (std::uint64_t word = 0; word < (std::uint64_t{1} << len); ++word) {
          std::vector<bool> bits(len);
          for (std::size_t i = 0; i < len; ++i) bits[i] = (word >> i) & 1;
          const BitPrefix u(bits);
          const DisagreementWitness w = disagreement_witness(s, t, u);
          const auto a = h_eval(s, w.x, w.k), b = h_eval(t, w.x, w.k);
          bool ok = a && b && *a != *b && w.x.length() >= len;
          ok = ok && std::equal(bits.begin(), bits.end(), w.x.bits().begin());
          ok = ok && sigma(s, w.k) == w.source_s && sigma(t, w.k) == w.source_t;
          r.expect("disagreement-witness", ok, [&] {
            return Json{{"s", to_string(s)}, {"t", to_string(t)}, {"u", u.to_string()}, {"k", mpz_json(w.k)}};
          });
          prefix_cases += w.prefix_case;
          largest_n = std::max<std::size_t>(largest_n, w.n);
        }
      }
    }
  }
  r.findings()["prefix_case_witnesses"] = prefix_cases;
  r.findings()["largest_n"] = largest_n;
  return r;
}

}  // namespace hurewicz
