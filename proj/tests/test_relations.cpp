#include "hurewicz/relations.hpp"
#include "hurewicz/prime_coding.hpp"

#include "doctest.h"

#include <map>
#include <random>
#include <set>

using namespace hurewicz;

namespace {

// Independent oracle: push concrete domain points through explicit branches
// and record which length-L prefixes come out, with the least e-rank.
std::map<std::string, std::uint64_t> oracle_images(const Node& s, const std::vector<BranchIndex>& branches) {
  std::map<std::string, std::uint64_t> out;
  const std::size_t len = s.size();
  const PointPrefix ones = PointPrefix::ones();
  for (const BranchIndex& b : branches) {
    const auto c = constraints(b);
    const std::size_t top = c.ones.back().small().value();
    FiniteSeq alpha(s);
    if (alpha.size() < top + 1) alpha.resize(top + 1, Natural(1));
    bool ok = true;
    for (const Natural& q : c.non_ones) {
      const std::size_t k = q.small().value();
      if (k >= len) alpha[k] = ones.code_prefix_one(k);
    }
    for (const Natural& q : c.ones) {
      const std::size_t k = q.small().value();
      if (k >= len) alpha[k] = Natural(1);
    }
    const PointPrefix x(alpha, true);
    if (in_domain(x, b) != Verdict::yes) ok = false;
    if (!ok) continue;
    const FiniteSeq t = apply(b, x).take(len);
    if (lex_compare(s, t) > 0) continue;
    const std::uint64_t rank = e_inv(b.s);
    auto [it, fresh] = out.emplace(to_string(t), rank);
    if (!fresh) it->second = std::min(it->second, rank);
  }
  return out;
}

bool has_one_at_power_of_two(const Node& s) {
  for (std::size_t q = 2; q < s.size(); q *= 2) {
    if (s[q].is_one()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rel_R and psi examples") {
  auto r = rel_R(seq({1, 1, 1}), seq({1, 1, 900}));
  CHECK(r.related);
  CHECK(r.psi == 0u);
  CHECK(*r.witness == BranchIndex({}, seq({0})));
  r = rel_R(seq({1, 1, 4}), seq({1, 1, 4}));
  CHECK(r.related);
  CHECK(r.psi == 0u);
  CHECK_FALSE(rel_R(seq({1, 1, 1}), seq({1, 1, 1})).related);
  CHECK_FALSE(psi(seq({1, 1, 1}), seq({1, 4, 1})));
  CHECK_THROWS_AS(rel_R(seq({1}), seq({1, 1})), UsageError);
  CHECK(rel_R({}, {}).related);
}

TEST_CASE("witness restrictions agree with the branch constraints") {
  for (std::size_t len : {0, 1, 3, 5, 31, 200}) {
    const auto& basis = witness_basis(len);
    REQUIRE(!basis.empty());
    std::set<std::string> seen;
    for (const EffectiveWitness& w : basis) {
      const auto c = constraints(w.branch);
      std::vector<std::size_t> ones, non_ones;
      for (const Natural& q : c.ones) {
        if (q < Natural(len)) ones.push_back(q.small().value());
      }
      for (const Natural& q : c.non_ones) {
        if (q < Natural(len)) non_ones.push_back(q.small().value());
      }
      CHECK(ones == w.ones);
      CHECK(non_ones == w.non_ones);
      CHECK(w.cut == !(max_modified(w.branch) < Natural(len)));
      CHECK(w.rank == e_inv(w.branch.s));
      CHECK(seen.insert(to_string(FiniteSeq(w.ones.begin(), w.ones.end())) + "|" +
                        to_string(FiniteSeq(w.non_ones.begin(), w.non_ones.end())))
                .second);
    }
  }
}

TEST_CASE("t_graph edge census") {
  auto g0 = t_graph(0);
  CHECK(g0.nodes.size() == 1);
  CHECK(g0.loops.size() == 1);
  CHECK(g0.edges.empty());
  CHECK(t_graph(1).edges.empty());
  CHECK(t_graph(2).edges.empty());
  auto g3 = t_graph(3);
  REQUIRE(g3.edges.size() == 6);
  for (const RelationEdge& e : g3.edges) {
    const Node& s = g3.nodes[e.from];
    const Node& t = g3.nodes[e.to];
    CHECK(s[2] == Natural(1));
    CHECK(t[0] == s[0]);
    CHECK(t[1] == s[1]);
    CHECK(t[2] == encode(FiniteSeq{s[0], s[1], Natural(1)}));
    CHECK(e.psi == 0);
  }
  auto g4 = t_graph(4);
  CHECK(g4.edges.size() == 6 * 43);
}

TEST_CASE("graph edges agree with pairwise rel_R and the explicit-branch oracle") {
  const auto branches = branches_below(10000);
  for (std::size_t p = 0; p <= 3; ++p) {
    auto g = t_graph(p);
    std::set<std::pair<std::size_t, std::size_t>> graph_pairs;
    for (const RelationEdge& e : g.edges) graph_pairs.insert({e.from, e.to});
    for (const auto& [i, r] : g.loops) graph_pairs.insert({i, i});
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const auto images = oracle_images(g.nodes[i], branches);
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const auto r = rel_R(g.nodes[i], g.nodes[j]);
        CHECK(r.related == graph_pairs.contains({i, j}));
        auto it = images.find(to_string(g.nodes[j]));
        CHECK(r.related == (it != images.end()));
        if (r.related && it != images.end()) CHECK(*r.psi == it->second);
      }
    }
  }
}

TEST_CASE("longer cylinders against the explicit-branch oracle") {
  // Random length-31 nodes: ones mostly, and non-1 alphabet members drawn
  // as J(y|i ^ 1) for y = 1^w.
  const auto branches = branches_below(20000);
  std::mt19937_64 rng(3);
  const PointPrefix ones = PointPrefix::ones();
  std::size_t related = 0, nonzero_psi = 0, extended = 0;
  for (int k = 0; k < 150; ++k) {
    Node s(31, Natural(1));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (rng() % 4 == 0) s[i] = ones.code_prefix_one(i);
    }
    const auto images = oracle_images(s, branches);
    const PointPrefix sp(s, true);
    // Every witness image is R-related, with the oracle's psi.
    std::size_t checked = 0;
    for (const auto& w : witness_basis(31)) {
      bool fits = true;
      for (std::size_t q : w.non_ones) fits = fits && !s[q].is_one();
      for (std::size_t q : w.ones) fits = fits && s[q].is_one();
      if (!fits) continue;
      Node img = s;
      for (std::size_t q : w.ones) img[q] = sp.code_prefix_one(q);
      auto r = rel_R(s, img);
      REQUIRE(r.related);
      auto it = images.find(to_string(img));
      REQUIRE(it != images.end());
      CHECK(*r.psi == it->second);
      // second clause of the psi axiom, one level further
      for (const Natural& j : {Natural(1), ones.code_prefix_one(31)}) {
        Node sj = s, tj = img;
        sj.push_back(j);
        tj.push_back(j);
        auto rj = rel_R(sj, tj);
        if (rj.related) {
          CHECK(*rj.psi == *r.psi);
          ++extended;
        }
      }
      ++checked;
      ++related;
      nonzero_psi += *r.psi > 0;
    }
    CHECK(checked > 0);
    // and nothing else is
    for (const auto& [text, rank] : images) {
      bool found = false;
      for (const auto& w : witness_basis(31)) {
        bool fits = true;
        for (std::size_t q : w.non_ones) fits = fits && !s[q].is_one();
        for (std::size_t q : w.ones) fits = fits && s[q].is_one();
        if (!fits) continue;
        Node img = s;
        for (std::size_t q : w.ones) img[q] = sp.code_prefix_one(q);
        found = found || to_string(img) == text;
      }
      CHECK(found);
    }
    // a perturbed target is unrelated
    Node t = s;
    t[5] = t[5].is_one() ? ones.code_prefix_one(5) : Natural(1);
    CHECK_FALSE(rel_R(s, t).related);
    CHECK(images.find(to_string(t)) == images.end());
  }
  CHECK(related > 150);
  CHECK(nonzero_psi > 0);
  CHECK(extended > 100);
}

TEST_CASE("relation axioms on all nodes of depth <= 4") {
  for (std::size_t p = 0; p <= 4; ++p) {
    auto g = t_graph(p);
    std::set<std::size_t> loop_nodes;
    for (const auto& [i, r] : g.loops) {
      loop_nodes.insert(i);
      CHECK(r == 0);
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const bool loop = loop_nodes.contains(i);
      CHECK(loop == !has_one_at_power_of_two(g.nodes[i]));
      CHECK(loop == rel_R(g.nodes[i], g.nodes[i]).related);
    }
    // antisymmetry: no edge is related in both directions
    for (const RelationEdge& e : g.edges) {
      CHECK(lex_compare(g.nodes[e.from], g.nodes[e.to]) < 0);
      CHECK_FALSE(rel_R(g.nodes[e.to], g.nodes[e.from]).related);
    }
    // psi(s^j, t^j) = psi(s, t) for every related parent pair and child j
    if (p < 4) {
      auto child = t_graph(p + 1);
      const auto next = alphabets(p + 1).back();
      for (const RelationEdge& e : g.edges) {
        for (const Natural& j : next->members) {
          Node s = g.nodes[e.from], t = g.nodes[e.to];
          s.push_back(j);
          t.push_back(j);
          auto r = rel_R(s, t);
          if (r.related) CHECK(*r.psi == e.psi);
        }
      }
      for (const auto& [i, r] : g.loops) {
        for (const Natural& j : next->members) {
          Node s = g.nodes[i];
          s.push_back(j);
          auto rr = rel_R(s, s);
          if (rr.related) CHECK(*rr.psi == r);
        }
      }
    }
  }
}

TEST_CASE("forest property and chains") {
  for (std::size_t p = 0; p <= 4; ++p) {
    auto rep = verify_forest(t_graph(p));
    CHECK(rep.acyclic);
    CHECK(rep.cycle.empty());
  }
  auto g2 = verify_forest(t_graph(2));
  CHECK(g2.nodes == 6);
  CHECK(g2.edges == 0);
  auto g3 = t_graph(3);
  auto r3 = verify_forest(g3);
  CHECK(r3.nodes == 42);
  CHECK(r3.edges == 6);
  CHECK(r3.components == 36);

  auto same = t_chain(seq({1, 1, 1}), seq({1, 1, 1}), g3);
  REQUIRE(same);
  CHECK(same->size() == 1);
  auto two = t_chain(seq({1, 1, 1}), seq({1, 1, 900}), g3);
  REQUIRE(two);
  CHECK(two->size() == 2);
  CHECK_FALSE(t_chain(seq({1, 1, 1}), seq({4, 1, 1}), g3));

  RelationGraph tri;
  tri.nodes = {seq({1}), seq({2}), seq({3})};
  for (std::size_t i = 0; i < 3; ++i) tri.index.emplace(tri.nodes[i], i);
  tri.edges = {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}};
  auto bad = verify_forest(tri);
  CHECK_FALSE(bad.acyclic);
  CHECK(bad.cycle.size() == 3);
}
