#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hurewicz {

class Natural;

/// A finite sequence of naturals (an element of omega^{<omega}).
using FiniteSeq = std::vector<Natural>;
using SharedSeq = std::shared_ptr<const FiniteSeq>;

/// Raised when a value cannot be handled in its current representation,
/// e.g. asking for the decimal digits of a symbolic code or ordering two
/// codes whose logarithms cannot be separated.
class RepresentationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An arbitrary natural number.
///
/// Values are stored exactly (machine word or GMP integer) while their
/// binary size stays below a few thousand bits. Larger prime-power codes
/// J(u) = q_0^{u(0)+1}...q_{n-1}^{u(n-1)+1} are kept symbolically by their
/// preimage u, which makes towers such as the members of A_3 and A_4
/// representable. The representation is canonical: a code is symbolic iff
/// its size estimate exceeds the materialization bound, so equality is
/// structural and hashing is consistent with it.
class Natural {
 public:
  /// Bit budget under which codes are materialized as integers.
  static constexpr double kMaterializeBits = 4096.0;

  Natural() noexcept : rep_(std::uint64_t{0}) {}
  Natural(std::uint64_t value) noexcept : rep_(value) {}  // NOLINT: implicit by design of literals
  explicit Natural(const mpz_class& value);

  /// Decimal digits, or a nested code form "J[a;b;...]".
  static Natural parse(std::string_view text);

  /// J(base[0..prefix) ++ suffix), materialized when small enough.
  static Natural code(SharedSeq base, std::size_t prefix, FiniteSeq suffix = {});

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  bool is_exact() const noexcept { return !is_symbolic(); }
  bool is_symbolic() const noexcept;

  std::optional<std::uint64_t> small() const noexcept;
  /// Exact value; throws RepresentationError for symbolic codes.
  mpz_class exact() const;
  /// Bit length of an exact value (0 for zero).
  std::size_t exact_bits() const;

  /// Preimage of a symbolic code under J.
  std::size_t form_size() const;
  const Natural& form_at(std::size_t i) const;
  /// Shared storage behind a symbolic code: entries [0, form_prefix()) of
  /// the preimage live in form_base(). Null when nothing is shared.
  const SharedSeq& form_base() const;
  std::size_t form_prefix() const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const Natural& a, const Natural& b);
  /// May throw RepresentationError when the two magnitudes are inseparable.
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b);

 private:
  struct Form;
  explicit Natural(std::shared_ptr<const Form> form) : rep_(std::move(form)) {}

  std::variant<std::uint64_t, mpz_class, std::shared_ptr<const Form>> rep_;
};

struct NaturalHash {
  std::size_t operator()(const Natural& n) const { return n.hash(); }
};

struct SeqHash {
  std::size_t operator()(const FiniteSeq& s) const;
};

/// Convenience: a FiniteSeq from small integers.
FiniteSeq seq(std::initializer_list<std::uint64_t> values);

/// "(a,b,c)" rendering; "()" for the empty sequence.
std::string to_string(const FiniteSeq& s);

}  // namespace hurewicz

template <>
struct std::hash<hurewicz::Natural> {
  std::size_t operator()(const hurewicz::Natural& n) const { return n.hash(); }
};
