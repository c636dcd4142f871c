#pragma once

#include "hurewicz/departure.hpp"
#include "hurewicz/relations.hpp"
#include "hurewicz/report.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace hurewicz {

/// Draws points of F = prod A_i, explicit up to some length and 1 after.
/// Non-1 entries are J(b|i ^ 1) for b one of a few random base points, so
/// every entry shares storage with a base and stays cheap to compare.
class PointSampler {
 public:
  PointSampler(std::uint64_t seed, std::size_t length, std::size_t bases = 6);

  std::size_t length() const { return length_; }

  Natural member(std::mt19937_64& rng, std::size_t i) const;   // uniform-ish over {1, non-1}
  Natural non_one(std::mt19937_64& rng, std::size_t i) const;  // never 1
  /// A random point with n explicit coordinates and the 1-tail.
  PointPrefix point(std::mt19937_64& rng, std::size_t n) const;
  /// A random point of length n inside the cylinder, starting with `fixed`.
  /// nullopt when a constraint lies past n or contradicts `fixed`.
  std::optional<PointPrefix> inside(std::mt19937_64& rng, const CylinderConstraint& c, std::size_t n,
                                    const FiniteSeq& fixed = {}) const;

 private:
  std::size_t length_;
  std::vector<PointPrefix> bases_;
};

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag = 0);

Json mutation_json(const Mutation& m);

struct DepartureOptions {
  std::size_t depth = 3;         // density and relation checks run on nodes of depth <= this
  std::uint64_t horizon = 10000;  // branches with J(s^t) below this are sampled
  std::size_t samples = 1000;    // domain points per branch
  std::uint64_t seed = 0;
  Mutation mutation;
  bool density = true;
  bool relations = true;  // relation axioms on nodes of depth <= min(depth, 4)
  bool pairwise = true;   // cross-check rel_R on every ordered pair of nodes
};

Report verify_departure(const DepartureOptions& opt);

struct NoIsolatedOptions {
  std::size_t depth = 2;
  std::uint64_t horizon = 10000;
  std::size_t samples = 20;
  std::size_t extensions = 3;  // n = 0 .. extensions-1 for each branch
  std::size_t precision = 64;  // output window for the equicontinuity check
  std::uint64_t seed = 0;
  Mutation mutation;
};

Report verify_no_isolated(const NoIsolatedOptions& opt);

struct ArrivalOptions {
  std::size_t depth = 3;
  std::uint64_t horizon = 100;
  std::size_t max_chain = 2;
};

/// Exploratory: the report lists what was found and never fails.
Report verify_arrival_no_fixed_composition(const ArrivalOptions& opt);

/// Runs job(i) for i in [0, n) on a few threads. Each job writes only its
/// own slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job);

}  // namespace hurewicz
