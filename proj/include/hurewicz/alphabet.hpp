#pragma once

#include "hurewicz/common.hpp"
#include "hurewicz/natural.hpp"

#include <compare>
#include <unordered_map>
#include <vector>

namespace hurewicz {

/// A node of depth p: entries[i] in A_i for i < p.
using Node = FiniteSeq;

/// A_level = {1} u {J(u^1) : u a node of depth level}, sorted ascending.
struct Alphabet {
  std::size_t level = 0;
  std::vector<Natural> members;
  std::unordered_map<Natural, std::size_t, NaturalHash> index;

  bool contains(const Natural& v) const { return index.contains(v); }
  std::size_t size() const { return members.size(); }
};

/// A_0 .. A_{depth-1}. Built once and shared; throws CapacityError when
/// depth exceeds limits.max_depth.
std::vector<const Alphabet*> alphabets(std::size_t depth, const Limits& limits = {});

/// Every node of depth p in lexicographic order.
std::vector<Node> enumerate_nodes(std::size_t p, const Limits& limits = {});

/// Lexicographic order on equal-length nodes; UsageError otherwise.
std::strong_ordering lex_compare(const Node& x, const Node& y);

/// Structural membership test v in A_level, usable at any level (the
/// alphabets themselves are only materialized for small levels).
bool is_member(std::size_t level, const Natural& v);

/// A finite description of a point of F: explicit entries, optionally
/// followed by 1 forever.
class PointPrefix {
 public:
  PointPrefix() : entries_(std::make_shared<const FiniteSeq>()) {}
  PointPrefix(FiniteSeq entries, bool tail_ones)
      : entries_(std::make_shared<const FiniteSeq>(std::move(entries))), tail_ones_(tail_ones) {}
  PointPrefix(SharedSeq entries, bool tail_ones) : entries_(std::move(entries)), tail_ones_(tail_ones) {}

  /// The point 1^omega.
  static PointPrefix ones() { return PointPrefix(FiniteSeq{}, true); }

  std::size_t length() const { return entries_->size(); }
  bool tail_ones() const { return tail_ones_; }
  const SharedSeq& entries() const { return entries_; }

  bool readable(std::size_t i) const { return tail_ones_ || i < length(); }
  /// Coordinate i, or nullptr when the prefix does not determine it.
  const Natural* get(std::size_t i) const;
  /// Same, for an index given as a code (possibly far beyond any horizon).
  const Natural* get(const Natural& i) const;

  /// J(x|q ^ 1), sharing storage with this prefix. HorizonError when x|q
  /// is not determined.
  Natural code_prefix_one(std::size_t q) const { return code_prefix_then(q, Natural(1)); }
  /// J(x|q ^ last).
  Natural code_prefix_then(std::size_t q, const Natural& last) const;

  /// The first n coordinates as an explicit sequence.
  FiniteSeq take(std::size_t n) const;

  /// Explicit entries padded with 1 up to length n (tail convention kept).
  PointPrefix extended(std::size_t n) const;

  std::string to_string() const;

 private:
  SharedSeq entries_;
  bool tail_ones_ = false;
};

struct Disagreement {
  enum class Kind { equal, differ, unknown };
  Kind kind = Kind::unknown;
  std::size_t index = 0;  // first differing index, or where information ran out
};

/// Least index where the denoted points differ. `equal` needs both tails
/// set; `unknown` reports the first unreadable index.
Disagreement first_disagreement(const PointPrefix& x, const PointPrefix& y);

}  // namespace hurewicz
