#include "hurewicz/natural.hpp"

#include "detail.hpp"
#include "hurewicz/prime_coding.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

namespace hurewicz {

struct Natural::Form {
  SharedSeq base;
  std::size_t prefix = 0;
  FiniteSeq suffix;
  mutable std::atomic<std::size_t> hash_cache{0};

  Form(SharedSeq b, std::size_t p, FiniteSeq s) : base(std::move(b)), prefix(p), suffix(std::move(s)) {}

  std::size_t size() const { return prefix + suffix.size(); }
  const Natural& at(std::size_t i) const { return i < prefix ? (*base)[i] : suffix[i - prefix]; }
};

namespace {

// Exact values at most this wide are always smaller than any symbolic code.
constexpr std::size_t kSafeExactBits = 4000;

class Real {
 public:
  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

std::size_t combine(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Read access to the J-preimage of a code, whether decoded or symbolic.
class View {
 public:
  explicit View(const FiniteSeq& s) : vec_(&s) {}
  View(const Natural& symbolic) : nat_(&symbolic) {}  // NOLINT

  std::size_t size() const { return vec_ ? vec_->size() : nat_->form_size(); }
  const Natural& at(std::size_t i) const { return vec_ ? (*vec_)[i] : nat_->form_at(i); }

 private:
  const FiniteSeq* vec_ = nullptr;
  const Natural* nat_ = nullptr;
};

// ln q_i at (at least) the precision of out. Values are cached per prime
// and precision bucket; the cached value is rounded once into out.
void log_prime(std::size_t i, mpfr_ptr out) {
  struct Entry {
    mpfr_prec_t prec;
    std::unique_ptr<Real> value;
  };
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<Entry>> cache;
  const mpfr_prec_t want = mpfr_get_prec(out);
  const mpfr_prec_t bucket = ((want + 255) / 256) * 256;
  std::lock_guard lock(mutex);
  auto& entries = cache[i];
  for (const Entry& e : entries) {
    if (e.prec == bucket) {
      mpfr_set(out, e.value->get(), MPFR_RNDN);
      return;
    }
  }
  auto v = std::make_unique<Real>(bucket);
  mpfr_log_ui(v->get(), nth_prime(i), MPFR_RNDN);
  mpfr_set(out, v->get(), MPFR_RNDN);
  entries.push_back({bucket, std::move(v)});
}

// ln(v) for v > 0. Symbolic codes need exact entries: ln J(u) = sum (u_i+1) ln q_i.
void log_of(const Natural& v, mpfr_ptr out) {
  const mpfr_prec_t prec = mpfr_get_prec(out);
  if (v.is_exact()) {
    Real x(prec);
    mpfr_set_z(x.get(), v.exact().get_mpz_t(), MPFR_RNDN);
    mpfr_log(out, x.get(), MPFR_RNDN);
    return;
  }
  Real acc(prec), lq(prec), term(prec);
  for (std::size_t i = 0; i < v.form_size(); ++i) {
    const Natural& e = v.form_at(i);
    if (e.is_symbolic()) {
      throw RepresentationError("logarithm of a doubly symbolic code is not representable");
    }
    mpz_class exponent = e.exact() + 1;
    log_prime(i, lq.get());
    mpfr_mul_z(term.get(), lq.get(), exponent.get_mpz_t(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
  }
  mpfr_set(out, acc.get(), MPFR_RNDN);
}

// Widest exact entry feeding a logarithm of v, used to size precisions.
std::size_t log_bits(const Natural& v) {
  if (v.is_exact()) return v.exact_bits();
  std::size_t bits = 0;
  for (std::size_t i = 0; i < v.form_size(); ++i) {
    const Natural& e = v.form_at(i);
    if (e.is_symbolic()) {
      throw RepresentationError("logarithm of a doubly symbolic code is not representable");
    }
    bits = std::max(bits, e.exact_bits());
  }
  return bits + static_cast<std::size_t>(std::bit_width(v.form_size()));
}

struct Term {
  std::size_t index;
  const Natural* lhs;  // nullptr: exponent 0
  const Natural* rhs;
};

// Sign of sum_i (lhs_i - rhs_i) ln q_i with every exponent exact.
int exact_log_sign(const std::vector<Term>& terms) {
  std::vector<mpz_class> diffs;
  std::size_t bits = 0;
  for (const Term& t : terms) {
    mpz_class a = t.lhs ? t.lhs->exact() + 1 : mpz_class(0);
    mpz_class b = t.rhs ? t.rhs->exact() + 1 : mpz_class(0);
    diffs.push_back(a - b);
    bits = std::max(bits, mpz_sizeinbase(diffs.back().get_mpz_t(), 2));
  }
  const auto prec = static_cast<mpfr_prec_t>(bits + 128 + std::bit_width(terms.size()));
  Real sum(prec), lq(prec), term(prec);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    log_prime(terms[k].index, lq.get());
    mpfr_mul_z(term.get(), lq.get(), diffs[k].get_mpz_t(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
  }
  if (mpfr_zero_p(sum.get()) || mpfr_get_exp(sum.get()) < -60) {
    throw RepresentationError("codes too close to order at working precision");
  }
  return mpfr_sgn(sum.get());
}

// Some exponent is symbolic. Writing each exponent difference as an integer
// combination of distinct symbolic values H plus an exact remainder, the log
// ratio becomes sum_H a_H * H + R with a_H = sum_i c_{iH} ln q_i. The H terms
// are compared on a common scale exp(ln|a_H| + ln H - M).
int symbolic_log_sign(const std::vector<Term>& terms) {
  struct Symbol {
    const Natural* value;
    std::vector<std::pair<std::size_t, long>> coeffs;  // (prime index, multiplicity)
  };
  std::vector<Symbol> symbols;
  std::vector<Term> remainder_terms;
  std::vector<Natural> remainder_store;
  remainder_store.reserve(2 * terms.size());

  auto add_symbol = [&](const Natural* v, std::size_t index, long c) {
    for (Symbol& s : symbols) {
      if (*s.value == *v) {
        for (auto& [i, m] : s.coeffs) {
          if (i == index) {
            m += c;
            return;
          }
        }
        s.coeffs.emplace_back(index, c);
        return;
      }
    }
    symbols.push_back({v, {{index, c}}});
  };

  std::size_t bits = 64;
  for (const Term& t : terms) {
    // Exact parts: x+1 for exact x, 0+1 for symbolic x (the symbol carries x).
    const Natural* lhs = t.lhs;
    const Natural* rhs = t.rhs;
    const Natural* lhs_exact = nullptr;
    const Natural* rhs_exact = nullptr;
    if (lhs && lhs->is_symbolic()) {
      add_symbol(lhs, t.index, 1);
      bits = std::max(bits, log_bits(*lhs));
      remainder_store.emplace_back(std::uint64_t{0});
      lhs_exact = &remainder_store.back();
    } else {
      lhs_exact = lhs;
    }
    if (rhs && rhs->is_symbolic()) {
      add_symbol(rhs, t.index, -1);
      bits = std::max(bits, log_bits(*rhs));
      remainder_store.emplace_back(std::uint64_t{0});
      rhs_exact = &remainder_store.back();
    } else {
      rhs_exact = rhs;
    }
    if (lhs_exact || rhs_exact) {
      bits = std::max(bits, lhs_exact ? lhs_exact->exact_bits() : 0);
      bits = std::max(bits, rhs_exact ? rhs_exact->exact_bits() : 0);
      remainder_terms.push_back({t.index, lhs_exact, rhs_exact});
    }
  }
  const auto prec = static_cast<mpfr_prec_t>(bits + 128);

  // Scaled symbol terms: ln|a_H| + ln H.
  struct Scaled {
    int sign;
    std::unique_ptr<Real> log_magnitude;
  };
  std::vector<Scaled> scaled;
  for (const Symbol& s : symbols) {
    Real coefficient(prec), lq(prec), term(prec);
    bool nonzero = false;
    for (const auto& [i, m] : s.coeffs) {
      if (m == 0) continue;
      nonzero = true;
      log_prime(i, lq.get());
      mpfr_mul_si(term.get(), lq.get(), m, MPFR_RNDN);
      mpfr_add(coefficient.get(), coefficient.get(), term.get(), MPFR_RNDN);
    }
    // logs of distinct primes are rationally independent
    if (!nonzero) continue;
    Scaled sc{mpfr_sgn(coefficient.get()), std::make_unique<Real>(prec)};
    mpfr_abs(coefficient.get(), coefficient.get(), MPFR_RNDN);
    mpfr_log(sc.log_magnitude->get(), coefficient.get(), MPFR_RNDN);
    Real lh(prec);
    log_of(*s.value, lh.get());
    mpfr_add(sc.log_magnitude->get(), sc.log_magnitude->get(), lh.get(), MPFR_RNDN);
    scaled.push_back(std::move(sc));
  }

  // Exact remainder R = sum_i r_i ln q_i.
  Real remainder(prec);
  bool has_remainder = false;
  {
    Real lq(prec), term(prec);
    for (const Term& t : remainder_terms) {
      mpz_class a = t.lhs ? mpz_class(t.lhs->exact() + 1) : mpz_class(0);
      mpz_class b = t.rhs ? mpz_class(t.rhs->exact() + 1) : mpz_class(0);
      mpz_class d = a - b;
      if (d == 0) continue;
      has_remainder = true;
      log_prime(t.index, lq.get());
      mpfr_mul_z(term.get(), lq.get(), d.get_mpz_t(), MPFR_RNDN);
      mpfr_add(remainder.get(), remainder.get(), term.get(), MPFR_RNDN);
    }
  }

  if (scaled.empty()) {
    if (!has_remainder || mpfr_zero_p(remainder.get()) || mpfr_get_exp(remainder.get()) < -60) {
      throw RepresentationError("codes too close to order at working precision");
    }
    return mpfr_sgn(remainder.get());
  }

  std::size_t top = 0;
  for (std::size_t k = 1; k < scaled.size(); ++k) {
    if (mpfr_cmp(scaled[k].log_magnitude->get(), scaled[top].log_magnitude->get()) > 0) top = k;
  }
  Real sum(prec), shifted(prec);
  for (const Scaled& sc : scaled) {
    mpfr_sub(shifted.get(), sc.log_magnitude->get(), scaled[top].log_magnitude->get(), MPFR_RNDN);
    mpfr_exp(shifted.get(), shifted.get(), MPFR_RNDN);
    if (sc.sign < 0) mpfr_neg(shifted.get(), shifted.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), shifted.get(), MPFR_RNDN);
  }
  if (mpfr_zero_p(sum.get()) || mpfr_get_exp(sum.get()) < -60) {
    throw RepresentationError("symbolic exponents cancel at working precision");
  }
  if (has_remainder && !mpfr_zero_p(remainder.get())) {
    // |R| must be negligible against e^M.
    Real lr(prec);
    mpfr_abs(lr.get(), remainder.get(), MPFR_RNDN);
    mpfr_log(lr.get(), lr.get(), MPFR_RNDN);
    mpfr_add_ui(lr.get(), lr.get(), 100, MPFR_RNDN);
    if (mpfr_cmp(lr.get(), scaled[top].log_magnitude->get()) >= 0) {
      throw RepresentationError("exact remainder not negligible against symbolic exponents");
    }
  }
  return mpfr_sgn(sum.get());
}

// Order J(a) against J(b) for nonempty preimages a and b.
int compare_views(const View& a, const View& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<Term> terms;
  bool all_exact = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Natural* x = i < a.size() ? &a.at(i) : nullptr;
    const Natural* y = i < b.size() ? &b.at(i) : nullptr;
    if (x && y && *x == *y) continue;
    terms.push_back({i, x, y});
    if ((x && x->is_symbolic()) || (y && y->is_symbolic())) all_exact = false;
  }
  if (terms.empty()) return 0;
  return all_exact ? exact_log_sign(terms) : symbolic_log_sign(terms);
}

// Exact value (possibly large, possibly a non-code) against a symbolic code.
int compare_exact_symbolic(const Natural& x, const Natural& f) {
  if (x.exact_bits() <= kSafeExactBits) return -1;
  if (auto form = detail::decode_exact(x.exact()); form && !form->empty()) {
    return compare_views(View(*form), View(f));
  }
  for (std::size_t i = 0; i < f.form_size(); ++i) {
    if (f.form_at(i).is_symbolic()) return -1;
  }
  const auto prec = static_cast<mpfr_prec_t>(std::max(log_bits(x), log_bits(f)) + 128);
  Real lx(prec), lf(prec), d(prec);
  log_of(x, lx.get());
  log_of(f, lf.get());
  mpfr_sub(d.get(), lx.get(), lf.get(), MPFR_RNDN);
  if (mpfr_zero_p(d.get()) || mpfr_get_exp(d.get()) < -60) {
    throw RepresentationError("values too close to order at working precision");
  }
  return mpfr_sgn(d.get());
}

std::strong_ordering to_ordering(int s) {
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace

namespace detail {

std::optional<FiniteSeq> decode_exact(const mpz_class& value) {
  FiniteSeq out;
  if (value == 0) return out;
  if (value < 0 || value == 1) return std::nullopt;
  if (value.fits_ulong_p()) {
    std::uint64_t rest = value.get_ui();
    for (std::size_t i = 0; rest > 1; ++i) {
      const std::uint64_t p = nth_prime(i);
      std::uint64_t count = 0;
      while (rest % p == 0) {
        rest /= p;
        ++count;
      }
      if (count == 0) return std::nullopt;
      out.emplace_back(count - 1);
    }
    return out;
  }
  mpz_class rest = value;
  mpz_class prime;
  for (std::size_t i = 0; rest > 1; ++i) {
    prime = static_cast<unsigned long>(nth_prime(i));
    const mp_bitcnt_t count = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t());
    if (count == 0) return std::nullopt;
    out.emplace_back(static_cast<std::uint64_t>(count - 1));
  }
  return out;
}

}  // namespace detail

Natural::Natural(const mpz_class& value) {
  if (value < 0) throw std::invalid_argument("Natural: negative value");
  if (value.fits_ulong_p()) {
    rep_ = static_cast<std::uint64_t>(value.get_ui());
    return;
  }
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > kSafeExactBits) {
    // Keep the representation canonical: large codes may be symbolic.
    if (auto form = detail::decode_exact(value)) {
      auto shared = std::make_shared<const FiniteSeq>(std::move(*form));
      Natural c = code(shared, shared->size());
      if (c.is_symbolic()) {
        *this = std::move(c);
        return;
      }
    }
  }
  rep_ = value;
}

namespace {

// log2 q_i without touching the shared prime table on every call.
double log2_prime(std::size_t i) {
  static const std::vector<double> table = [] {
    std::vector<double> out(2048);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::log2(static_cast<double>(nth_prime(k)));
    return out;
  }();
  return i < table.size() ? table[i] : std::log2(static_cast<double>(nth_prime(i)));
}

}  // namespace

Natural Natural::code(SharedSeq base, std::size_t prefix, FiniteSeq suffix) {
  const std::size_t n = prefix + suffix.size();
  if (n == 0) return Natural{};
  if (prefix > 0 && (!base || base->size() < prefix)) {
    throw std::invalid_argument("Natural::code: prefix exceeds base");
  }
  auto at = [&](std::size_t i) -> const Natural& { return i < prefix ? (*base)[i] : suffix[i - prefix]; };

  bool symbolic = false;
  double bits = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = at(i).small();
    if (!v || *v > (std::uint64_t{1} << 24)) {
      symbolic = true;
      break;
    }
    bits += static_cast<double>(*v + 1) * log2_prime(i);
    if (bits > kMaterializeBits) {
      symbolic = true;
      break;
    }
  }
  if (!symbolic) {
    mpz_class acc = 1, power;
    for (std::size_t i = 0; i < n; ++i) {
      mpz_ui_pow_ui(power.get_mpz_t(), nth_prime(i), *at(i).small() + 1);
      acc *= power;
    }
    Natural out;
    if (acc.fits_ulong_p()) {
      out.rep_ = static_cast<std::uint64_t>(acc.get_ui());
    } else {
      out.rep_ = std::move(acc);
    }
    return out;
  }
  if (prefix == 0) base.reset();
  return Natural(std::make_shared<const Form>(std::move(base), prefix, std::move(suffix)));
}

Natural Natural::parse(std::string_view text) {
  std::size_t pos = 0;
  std::function<Natural()> parse_one = [&]() -> Natural {
    if (text.substr(pos, 2) == "J[") {
      pos += 2;
      FiniteSeq entries;
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        return Natural{};
      }
      while (true) {
        entries.push_back(parse_one());
        if (pos >= text.size()) throw std::invalid_argument("unterminated code form");
        if (text[pos] == ';') {
          ++pos;
          continue;
        }
        if (text[pos] == ']') {
          ++pos;
          break;
        }
        throw std::invalid_argument("unexpected character in code form");
      }
      auto shared = std::make_shared<const FiniteSeq>(std::move(entries));
      return code(shared, shared->size());
    }
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (start == pos) throw std::invalid_argument("expected a natural number");
    return Natural(mpz_class(std::string(text.substr(start, pos - start)), 10));
  };
  Natural out = parse_one();
  if (pos != text.size()) throw std::invalid_argument("trailing characters after natural number");
  return out;
}

bool Natural::is_zero() const noexcept {
  const auto* v = std::get_if<std::uint64_t>(&rep_);
  return v && *v == 0;
}

bool Natural::is_one() const noexcept {
  const auto* v = std::get_if<std::uint64_t>(&rep_);
  return v && *v == 1;
}

bool Natural::is_symbolic() const noexcept { return rep_.index() == 2; }

std::optional<std::uint64_t> Natural::small() const noexcept {
  if (const auto* v = std::get_if<std::uint64_t>(&rep_)) return *v;
  return std::nullopt;
}

mpz_class Natural::exact() const {
  switch (rep_.index()) {
    case 0: {
      mpz_class out;
      mpz_set_ui(out.get_mpz_t(), static_cast<unsigned long>(std::get<0>(rep_)));
      return out;
    }
    case 1:
      return std::get<1>(rep_);
    default:
      throw RepresentationError("symbolic code has no materialized value: " + to_string());
  }
}

std::size_t Natural::exact_bits() const {
  switch (rep_.index()) {
    case 0:
      return static_cast<std::size_t>(std::bit_width(std::get<0>(rep_)));
    case 1:
      return mpz_sizeinbase(std::get<1>(rep_).get_mpz_t(), 2);
    default:
      throw RepresentationError("symbolic code has no bit length");
  }
}

std::size_t Natural::form_size() const {
  if (!is_symbolic()) throw RepresentationError("not a symbolic code");
  return std::get<2>(rep_)->size();
}

const Natural& Natural::form_at(std::size_t i) const {
  if (!is_symbolic()) throw RepresentationError("not a symbolic code");
  return std::get<2>(rep_)->at(i);
}

const SharedSeq& Natural::form_base() const {
  if (!is_symbolic()) throw RepresentationError("not a symbolic code");
  return std::get<2>(rep_)->base;
}

std::size_t Natural::form_prefix() const {
  if (!is_symbolic()) throw RepresentationError("not a symbolic code");
  return std::get<2>(rep_)->prefix;
}

std::size_t Natural::hash() const {
  switch (rep_.index()) {
    case 0:
      return std::hash<std::uint64_t>{}(std::get<0>(rep_));
    case 1: {
      const mpz_class& v = std::get<1>(rep_);
      std::size_t h = 0x51ed27;
      for (std::size_t i = 0; i < mpz_size(v.get_mpz_t()); ++i) {
        h = combine(h, static_cast<std::size_t>(mpz_getlimbn(v.get_mpz_t(), static_cast<mp_size_t>(i))));
      }
      return h;
    }
    default: {
      const Form& f = *std::get<2>(rep_);
      std::size_t cached = f.hash_cache.load(std::memory_order_relaxed);
      if (cached != 0) return cached;
      std::size_t h = combine(0x7a3c, f.size());
      for (std::size_t i = 0; i < f.size(); ++i) h = combine(h, f.at(i).hash());
      if (h == 0) h = 1;
      f.hash_cache.store(h, std::memory_order_relaxed);
      return h;
    }
  }
}

std::string Natural::to_string() const {
  switch (rep_.index()) {
    case 0:
      return std::to_string(std::get<0>(rep_));
    case 1:
      return std::get<1>(rep_).get_str(10);
    default: {
      const Form& f = *std::get<2>(rep_);
      std::string out = "J[";
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += ';';
        out += f.at(i).to_string();
      }
      return out + "]";
    }
  }
}

bool operator==(const Natural& a, const Natural& b) {
  if (a.rep_.index() != b.rep_.index()) return false;
  switch (a.rep_.index()) {
    case 0:
      return std::get<0>(a.rep_) == std::get<0>(b.rep_);
    case 1:
      return std::get<1>(a.rep_) == std::get<1>(b.rep_);
    default: {
      const auto& fa = std::get<2>(a.rep_);
      const auto& fb = std::get<2>(b.rep_);
      if (fa == fb) return true;
      if (fa->size() != fb->size()) return false;
      const std::size_t ha = fa->hash_cache.load(std::memory_order_relaxed);
      const std::size_t hb = fb->hash_cache.load(std::memory_order_relaxed);
      if (ha != 0 && hb != 0 && ha != hb) return false;
      if (fa->base == fb->base && fa->prefix == fb->prefix) {
        return fa->suffix == fb->suffix;
      }
      for (std::size_t i = 0; i < fa->size(); ++i) {
        if (!(fa->at(i) == fb->at(i))) return false;
      }
      return true;
    }
  }
}

std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
  const bool sa = a.is_symbolic();
  const bool sb = b.is_symbolic();
  if (!sa && !sb) {
    if (a.rep_.index() == 0 && b.rep_.index() == 0) return std::get<0>(a.rep_) <=> std::get<0>(b.rep_);
    if (a.rep_.index() == 0) return std::strong_ordering::less;
    if (b.rep_.index() == 0) return std::strong_ordering::greater;
    return to_ordering(cmp(std::get<1>(a.rep_), std::get<1>(b.rep_)));
  }
  if (!sa) return to_ordering(compare_exact_symbolic(a, b));
  if (!sb) return to_ordering(-compare_exact_symbolic(b, a));
  if (std::get<2>(a.rep_) == std::get<2>(b.rep_) || a == b) return std::strong_ordering::equal;
  return to_ordering(compare_views(View(a), View(b)));
}

std::size_t SeqHash::operator()(const FiniteSeq& s) const {
  std::size_t h = combine(0x2545f491, s.size());
  for (const Natural& n : s) h = combine(h, n.hash());
  return h;
}

FiniteSeq seq(std::initializer_list<std::uint64_t> values) {
  FiniteSeq out;
  out.reserve(values.size());
  for (std::uint64_t v : values) out.emplace_back(v);
  return out;
}

std::string to_string(const FiniteSeq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i].to_string();
  }
  return out + ")";
}

}  // namespace hurewicz
