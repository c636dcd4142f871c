#include "hurewicz/prime_coding.hpp"

#include "detail.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace hurewicz {

namespace {

class PrimeTable {
 public:
  std::uint64_t at(std::size_t n) {
    {
      std::shared_lock lock(mutex_);
      if (n < primes_.size()) return primes_[n];
    }
    std::unique_lock lock(mutex_);
    while (n >= primes_.size()) grow(n);
    return primes_[n];
  }

 private:
  void grow(std::size_t n) {
    // p_n < n (ln n + ln ln n) for n >= 6
    const double m = static_cast<double>(n + 1);
    std::uint64_t limit = n < 6 ? 16 : static_cast<std::uint64_t>(m * (std::log(m) + std::log(std::log(m)))) + 16;
    limit = std::max<std::uint64_t>(limit, 2 * limit_);
    std::vector<bool> composite(limit + 1, false);
    primes_.clear();
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes_.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    limit_ = limit;
  }

  std::shared_mutex mutex_;
  std::vector<std::uint64_t> primes_;
  std::uint64_t limit_ = 0;
};

PrimeTable& table() {
  static PrimeTable t;
  return t;
}

}  // namespace

std::uint64_t nth_prime(std::size_t n) { return table().at(n); }

Natural encode(std::span<const Natural> s) {
  if (s.empty()) return Natural{};
  return Natural::code(nullptr, 0, FiniteSeq(s.begin(), s.end()));
}

Natural encode_prefix(const SharedSeq& base, std::size_t prefix, FiniteSeq suffix) {
  return Natural::code(base, prefix, std::move(suffix));
}

std::optional<FiniteSeq> decode(const Natural& c) {
  if (c.is_symbolic()) {
    FiniteSeq out;
    out.reserve(c.form_size());
    for (std::size_t i = 0; i < c.form_size(); ++i) out.push_back(c.form_at(i));
    return out;
  }
  return detail::decode_exact(c.exact());
}

std::optional<std::string> factored(const Natural& c) {
  if (c.is_zero()) return "0";
  auto form = decode(c);
  if (!form) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < form->size(); ++i) {
    if (i) out += '*';
    out += std::to_string(nth_prime(i)) + '^';
    const Natural& e = (*form)[i];
    if (auto v = e.small(); v && *v < UINT64_MAX) {
      out += std::to_string(*v + 1);
    } else if (e.is_exact()) {
      out += mpz_class(e.exact() + 1).get_str(10);
    } else {
      out += "(" + factored(e).value_or(e.to_string()) + "+1)";
    }
  }
  return out;
}

}  // namespace hurewicz
