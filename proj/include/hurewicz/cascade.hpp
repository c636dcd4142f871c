#pragma once

#include "hurewicz/common.hpp"
#include "hurewicz/report.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hurewicz {

/// A node of the index tree. Children of s are s^0, s^1, ...
using TreeNode = std::vector<std::uint32_t>;

std::string to_string(const TreeNode& s);

/// Distances d(l_y(x), l_z(x)) at one fixed point x, for y, z in a finite
/// prefix-closed set of nodes.
class CascadeSample {
 public:
  CascadeSample() = default;
  /// UsageError when the set is not prefix-closed or has duplicates.
  explicit CascadeSample(std::vector<TreeNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> index(const TreeNode& s) const;
  bool contains(const TreeNode& s) const { return index(s).has_value(); }

  /// Stores d(a, b) = d(b, a). UsageError on a negative value, on a
  /// nonzero d(a, a), or on an unknown node.
  void set(const TreeNode& a, const TreeNode& b, const mpq_class& d);
  void set_at(std::size_t a, std::size_t b, const mpq_class& d);
  /// nullptr when the entry is missing.
  const mpq_class* find(std::size_t a, std::size_t b) const;
  /// DomainError when the entry is missing.
  const mpq_class& d(const TreeNode& a, const TreeNode& b) const;
  const mpq_class& d_at(std::size_t a, std::size_t b) const;

  /// Indices of the children of node i, by increasing last entry.
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }
  /// Index of the parent, or none for the root.
  std::optional<std::size_t> parent(std::size_t i) const;

  /// First stored triple breaking the triangle inequality, if any.
  std::optional<std::array<std::size_t, 3>> triangle_violation() const;

  Json to_json() const;

 private:
  std::size_t slot(std::size_t a, std::size_t b) const;

  std::vector<TreeNode> nodes_;
  std::map<TreeNode, std::size_t> index_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<mpq_class> table_;  // upper triangle, row-major
  std::vector<bool> present_;
};

/// min[2^-k, min_{i<|s|} d(l_{s|i+1}, l_{s|i})/4, min_{j<k} d(l_{s^j}, l_s)/4]
/// for sk = s^k. DomainError on a missing entry, UsageError on the root.
mpq_class epsilon(const CascadeSample& sample, const TreeNode& sk);

struct ConditionViolation {
  TreeNode node;        // the child s^k
  std::string clause;   // "bound" or "distinct"
  TreeNode other;       // for "distinct": the ancestor it meets
  mpq_class distance;
  mpq_class epsilon;    // for "bound"
  Json to_json() const;
};

/// Every child s^k lies strictly within epsilon(s^k) of s and differs from
/// every s|i, i <= |s|. relax accepts a distance equal to epsilon.
std::optional<ConditionViolation> find_condition_violation(const CascadeSample& sample, bool relax = false);
bool check_cascade_conditions(const CascadeSample& sample, bool relax = false);

/// d(l_s, l_t) >= d(l_{s|i+1}, l_{s|i}) / 3. UsageError unless s|i = t|i
/// and s(i) < t(i); DomainError on a missing entry.
bool check_separation(const CascadeSample& sample, const TreeNode& s, const TreeNode& t, std::size_t i);

enum class CascadePlacement {
  inside,    // children strictly within the bound
  boundary,  // some children exactly at the bound
};

/// Random points of the plane with the L1 metric, one per node of the full
/// tree of the given depth and branching, children placed within epsilon of
/// their parent. The table holds every pairwise distance.
CascadeSample gen_cascade(std::uint64_t seed, std::size_t depth, std::size_t branching,
                          CascadePlacement placement = CascadePlacement::inside);

struct CascadeOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;  // trial n uses seed + n
  std::size_t probes = 200;  // boundary samples for the strictness check
  Mutation mutation;
};

/// A trial with seed n draws depth n % 5 and branching 1 + (n / 5) % 4.
Report verify_cascade(const CascadeOptions& opt);

}  // namespace hurewicz
