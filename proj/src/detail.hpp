#pragma once

#include "hurewicz/natural.hpp"

#include <optional>

namespace hurewicz::detail {

/// Factor an exact value over consecutive primes. Empty sequence for 0.
std::optional<FiniteSeq> decode_exact(const mpz_class& value);

}  // namespace hurewicz::detail
