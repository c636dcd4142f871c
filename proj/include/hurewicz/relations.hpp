#pragma once

#include "hurewicz/alphabet.hpp"
#include "hurewicz/departure.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace hurewicz {

/// A branch seen through a window of length L: only its constraints below
/// L matter for cylinders of depth L. `cut` marks branches whose last
/// rewritten coordinate J(s^t) lies at or beyond L.
struct EffectiveWitness {
  BranchIndex branch;
  std::vector<std::size_t> ones;      // rewritten coordinates below L
  std::vector<std::size_t> non_ones;  // must-not-be-1 coordinates below L
  bool cut = false;
  std::uint64_t rank = 0;  // e_inv(branch.s)
};

/// Complete list of witness shapes for cylinders of length L. Every branch
/// restricted below L agrees with one of them, and among branches with the
/// same restriction the listed one has the smallest e-rank.
const std::vector<EffectiveWitness>& witness_basis(std::size_t length, const Limits& limits = {});

struct RelationResult {
  bool related = false;
  std::optional<std::uint64_t> psi;
  std::optional<BranchIndex> witness;  // a branch attaining psi
};

/// s R t, with psi(s,t) = least e-rank of a witnessing branch.
RelationResult rel_R(const Node& s, const Node& t);
std::optional<std::uint64_t> psi(const Node& s, const Node& t);

struct RelationEdge {
  std::size_t from = 0;  // from R to, lexicographically smaller side
  std::size_t to = 0;
  std::uint64_t psi = 0;
};

struct RelationGraph {
  std::size_t length = 0;
  std::vector<Node> nodes;
  std::unordered_map<Node, std::size_t, SeqHash> index;
  std::vector<RelationEdge> edges;                              // non-loop T edges
  std::vector<std::pair<std::size_t, std::uint64_t>> loops;  // s R s, with psi

  std::vector<std::vector<std::size_t>> adjacency() const;
};

/// T restricted to depth-p nodes, built from witness images.
RelationGraph t_graph(std::size_t p, const Limits& limits = {});

/// The repetition-free T-chain from s to t (BFS), or none.
std::optional<std::vector<Node>> t_chain(const Node& s, const Node& t, const RelationGraph& g);

struct ForestReport {
  bool acyclic = true;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t loops = 0;
  std::size_t components = 0;
  std::vector<std::size_t> cycle;  // node ids around the first cycle found
};

ForestReport verify_forest(const RelationGraph& g);

}  // namespace hurewicz
