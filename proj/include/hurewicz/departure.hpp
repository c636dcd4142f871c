#pragma once

#include "hurewicz/alphabet.hpp"
#include "hurewicz/common.hpp"
#include "hurewicz/natural.hpp"

#include <optional>
#include <vector>

namespace hurewicz {

/// Index (s, t) of a branch map f_{s,t}; |t| = |s| + 1.
struct BranchIndex {
  FiniteSeq s;
  FiniteSeq t;

  /// Throws UsageError unless |t| = |s| + 1.
  BranchIndex(FiniteSeq s_, FiniteSeq t_);

  friend bool operator==(const BranchIndex&, const BranchIndex&) = default;
  std::string to_string() const;
};

/// The clopen domain of f_{s,t}: coordinates that must read 1 and
/// coordinates that must not. ones[j] = J(s|j ^ t|(j+1)), increasing in j;
/// these are exactly the coordinates f_{s,t} rewrites.
struct CylinderConstraint {
  std::vector<Natural> ones;
  std::vector<Natural> non_ones;
};

CylinderConstraint constraints(const BranchIndex& b, const Mutation& mut = {});

/// J(s ^ t), the largest coordinate the branch touches.
Natural max_modified(const BranchIndex& b);

Verdict in_domain(const PointPrefix& x, const BranchIndex& b, const Mutation& mut = {});
/// Same test against constraints computed once by the caller.
Verdict in_domain(const PointPrefix& x, const CylinderConstraint& c);

/// f_{s,t}(x): coordinate q in ones becomes J(x|q ^ 1), read off the
/// original x. DomainError outside the domain, HorizonError when x does
/// not determine membership.
PointPrefix apply(const BranchIndex& b, const PointPrefix& x, const Mutation& mut = {});

/// f_{s,t}^{-1}(y). DomainError when y is not in the image.
PointPrefix inverse(const BranchIndex& b, const PointPrefix& y);

struct BranchSearch {
  Verdict verdict = Verdict::unknown;
  FiniteSeq t;               // set when verdict is yes
  std::size_t required = 0;  // prefix length needed when unknown
};

/// Greedy choice t(j) = least p with x(J(s|j ^ t|j ^ p)) = 1.
BranchSearch find_branch(const FiniteSeq& s, const PointPrefix& x);

/// Enumeration of finite sequences by increasing J-code: e(0) = ().
FiniteSeq e(std::uint64_t n);
/// Inverse of e. CapacityError when J(s) does not fit in 62 bits.
std::uint64_t e_inv(const FiniteSeq& s);

/// Psi(n, p) = (e(n), the p-th sequence of length |e(n)|+1 by J-code).
BranchIndex psi_branch(std::uint64_t n, std::uint64_t p);
std::pair<std::uint64_t, std::uint64_t> psi_branch_inv(const BranchIndex& b);

/// Number of J-codes c with c < bound (counting J(()) = 0). With a length,
/// only codes of sequences of exactly that length count.
std::uint64_t count_codes_below(std::uint64_t bound, std::optional<std::size_t> length = std::nullopt);

struct GluedResult {
  Verdict verdict = Verdict::unknown;
  std::optional<BranchIndex> branch;
  std::optional<PointPrefix> image;
  std::size_t required = 0;
};

/// f_n(x): the branch of e(n) containing x, then its map.
GluedResult apply_fn(std::uint64_t n, const PointPrefix& x, const Mutation& mut = {});

/// Branches (s, t) with J(s ^ t) < bound, ordered by that code.
std::vector<BranchIndex> branches_below(std::uint64_t bound);

}  // namespace hurewicz
