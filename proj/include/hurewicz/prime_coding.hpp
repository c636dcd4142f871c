#pragma once

#include "hurewicz/natural.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace hurewicz {

/// The (n+1)-th prime: nth_prime(0) == 2. Backed by a memoized sieve that
/// is safe to query from several threads.
std::uint64_t nth_prime(std::size_t n);

/// J(s) = q_0^{s(0)+1} ... q_{|s|-1}^{s(|s|-1)+1}, and J(()) = 0.
Natural encode(std::span<const Natural> s);
/// J(base[0..prefix) ++ suffix) without copying the shared prefix.
Natural encode_prefix(const SharedSeq& base, std::size_t prefix, FiniteSeq suffix = {});

/// Inverse of J; std::nullopt when c > 0 is not a J-code.
std::optional<FiniteSeq> decode(const Natural& c);

/// "2^5*3^2" style factored form of a code, nested for symbolic exponents.
/// Returns "0" for J(()) and std::nullopt for non-codes.
std::optional<std::string> factored(const Natural& c);

}  // namespace hurewicz
