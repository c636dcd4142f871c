#include "hurewicz/relations.hpp"

#include "hurewicz/prime_coding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>

namespace hurewicz {

namespace {

bool below(const Natural& c, std::size_t length) {
  auto v = c.small();
  return v && *v < length;
}

FiniteSeq joined(const FiniteSeq& a, const FiniteSeq& b) {
  FiniteSeq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

FiniteSeq with(FiniteSeq s, std::uint64_t v) {
  s.emplace_back(v);
  return s;
}

// Level j of a branch constrains J(s|j ^ t|j ^ p) for p <= t(j); the
// candidate values v of t(j) are scanned until that code leaves the window.
// Deeper levels only touch larger coordinates.
void collect(std::size_t length, const FiniteSeq& sp, const FiniteSeq& tp, const std::vector<std::size_t>& ones,
             std::vector<std::size_t> non_ones, std::vector<EffectiveWitness>& out) {
  const std::uint64_t rank = e_inv(sp);
  for (std::uint64_t v = 0;; ++v) {
    const FiniteSeq tv = with(tp, v);
    const Natural c = encode(joined(sp, tv));
    if (!below(c, length)) {
      out.push_back({BranchIndex(sp, tv), ones, non_ones, true, rank});
      return;
    }
    const std::size_t cv = static_cast<std::size_t>(*c.small());
    std::vector<std::size_t> ones_v = ones;
    ones_v.push_back(cv);
    out.push_back({BranchIndex(sp, tv), ones_v, non_ones, false, rank});
    for (std::uint64_t w = 0;; ++w) {
      const FiniteSeq sw = with(sp, w);
      if (!below(encode(with(joined(sw, tv), 0)), length)) break;
      collect(length, sw, tv, ones_v, non_ones, out);
    }
    non_ones.push_back(cv);
  }
}

bool matches(const EffectiveWitness& w, const Node& s, const Node& t) {
  for (std::size_t q : w.non_ones) {
    if (s[q].is_one()) return false;
  }
  for (std::size_t q : w.ones) {
    if (!s[q].is_one()) return false;
  }
  for (std::size_t q = 0; q < s.size(); ++q) {
    if (std::find(w.ones.begin(), w.ones.end(), q) != w.ones.end()) continue;
    if (!(s[q] == t[q])) return false;
  }
  for (std::size_t q : w.ones) {
    FiniteSeq prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(q));
    prefix.emplace_back(std::uint64_t{1});
    if (!(t[q] == encode(prefix))) return false;
  }
  return true;
}

// Image of s under a witness whose domain side s satisfies.
std::optional<Node> image(const EffectiveWitness& w, const Node& s) {
  for (std::size_t q : w.non_ones) {
    if (s[q].is_one()) return std::nullopt;
  }
  for (std::size_t q : w.ones) {
    if (!s[q].is_one()) return std::nullopt;
  }
  Node t = s;
  for (std::size_t q : w.ones) {
    FiniteSeq prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(q));
    prefix.emplace_back(std::uint64_t{1});
    t[q] = encode(prefix);
  }
  return t;
}

}  // namespace

const std::vector<EffectiveWitness>& witness_basis(std::size_t length, const Limits& limits) {
  if (length > limits.max_horizon) {
    throw CapacityError("cylinder length " + std::to_string(length) + " exceeds the horizon cap");
  }
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<EffectiveWitness>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(length);
  if (it == cache.end()) {
    std::vector<EffectiveWitness> out;
    collect(length, {}, {}, {}, {}, out);
    it = cache.emplace(length, std::move(out)).first;
  }
  return it->second;
}

RelationResult rel_R(const Node& s, const Node& t) {
  RelationResult out;
  if (lex_compare(s, t) > 0) return out;
  for (const EffectiveWitness& w : witness_basis(s.size())) {
    if (out.psi && *out.psi <= w.rank) continue;
    if (!matches(w, s, t)) continue;
    out.related = true;
    out.psi = w.rank;
    out.witness = w.branch;
  }
  return out;
}

std::optional<std::uint64_t> psi(const Node& s, const Node& t) { return rel_R(s, t).psi; }

std::vector<std::vector<std::size_t>> RelationGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const RelationEdge& e : edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  return adj;
}

RelationGraph t_graph(std::size_t p, const Limits& limits) {
  RelationGraph g;
  g.length = p;
  g.nodes = enumerate_nodes(p, limits);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) g.index.emplace(g.nodes[i], i);
  const auto& basis = witness_basis(p, limits);
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> found;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const EffectiveWitness& w : basis) {
      auto t = image(w, g.nodes[i]);
      if (!t) continue;
      auto it = g.index.find(*t);
      if (it == g.index.end()) {
        throw std::logic_error("image " + to_string(*t) + " of " + to_string(g.nodes[i]) + " is not a node");
      }
      auto [pos, fresh] = found.emplace(std::make_pair(i, it->second), w.rank);
      if (!fresh) pos->second = std::min(pos->second, w.rank);
    }
  }
  for (const auto& [key, rank] : found) {
    if (key.first == key.second) {
      g.loops.emplace_back(key.first, rank);
    } else {
      g.edges.push_back({key.first, key.second, rank});
    }
  }
  return g;
}

std::optional<std::vector<Node>> t_chain(const Node& s, const Node& t, const RelationGraph& g) {
  auto is = g.index.find(s);
  auto it = g.index.find(t);
  if (is == g.index.end() || it == g.index.end()) throw UsageError("t_chain: node not in graph");
  const auto adj = g.adjacency();
  std::vector<std::size_t> parent(g.nodes.size(), SIZE_MAX);
  std::deque<std::size_t> queue{is->second};
  parent[is->second] = is->second;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (u == it->second) break;
    for (std::size_t v : adj[u]) {
      if (parent[v] != SIZE_MAX) continue;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  if (parent[it->second] == SIZE_MAX) return std::nullopt;
  std::vector<Node> chain;
  for (std::size_t u = it->second;; u = parent[u]) {
    chain.push_back(g.nodes[u]);
    if (u == is->second) break;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

ForestReport verify_forest(const RelationGraph& g) {
  ForestReport r;
  r.nodes = g.nodes.size();
  r.edges = g.edges.size();
  r.loops = g.loops.size();
  std::vector<std::size_t> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::size_t>> accepted(g.nodes.size());
  for (const RelationEdge& e : g.edges) {
    const std::size_t a = find(e.from);
    const std::size_t b = find(e.to);
    if (a != b) {
      parent[a] = b;
      accepted[e.from].push_back(e.to);
      accepted[e.to].push_back(e.from);
      continue;
    }
    if (!r.acyclic) continue;
    r.acyclic = false;
    // Path from e.to back to e.from through accepted edges closes the cycle.
    std::vector<std::size_t> prev(g.nodes.size(), SIZE_MAX);
    std::deque<std::size_t> queue{e.from};
    prev[e.from] = e.from;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : accepted[u]) {
        if (prev[v] != SIZE_MAX) continue;
        prev[v] = u;
        queue.push_back(v);
      }
    }
    for (std::size_t u = e.to;; u = prev[u]) {
      r.cycle.push_back(u);
      if (u == e.from) break;
    }
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) r.components += find(i) == i;
  return r;
}

}  // namespace hurewicz
