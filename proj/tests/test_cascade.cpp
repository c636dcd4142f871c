#include "hurewicz/cascade.hpp"

#include "doctest.h"

using namespace hurewicz;

namespace {

// Points on a line: d = |a - b|.
CascadeSample on_line(const std::vector<std::pair<TreeNode, mpq_class>>& pts) {
  std::vector<TreeNode> nodes;
  for (const auto& p : pts) nodes.push_back(p.first);
  CascadeSample s(nodes);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a; b < pts.size(); ++b) s.set_at(a, b, abs(pts[a].second - pts[b].second));
  }
  return s;
}

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }

}  // namespace

TEST_CASE("sample table") {
  CHECK_THROWS_AS(CascadeSample({{}, {0, 1}}), UsageError);
  CHECK_THROWS_AS(CascadeSample({{}, {}}), UsageError);
  CascadeSample s({{}, {0}, {1}});
  CHECK(s.children(0).size() == 2);
  CHECK_FALSE(s.parent(0).has_value());
  s.set({0}, {}, q(1, 2));
  CHECK(s.d({}, {0}) == q(1, 2));
  CHECK(s.d({0}, {0}) == 0);
  CHECK_THROWS_AS(s.d({1}, {}), DomainError);
  CHECK_THROWS_AS(s.set({1}, {}, q(-1)), UsageError);
  CHECK_THROWS_AS(s.set({1}, {1}, q(1)), UsageError);
  CHECK_THROWS_AS(s.set({2}, {}, q(1)), UsageError);
  s.set({1}, {}, q(1, 8));
  s.set({0}, {1}, q(1));
  CHECK(s.triangle_violation().has_value());  // 1 > 1/2 + 1/8
  s.set({0}, {1}, q(5, 8));
  CHECK_FALSE(s.triangle_violation().has_value());
}

TEST_CASE("epsilon") {
  // a lone child of the root: 2^0, both inner minima empty
  CascadeSample one = on_line({{{}, 0}, {{0}, q(1, 2)}});
  CHECK(epsilon(one, {0}) == 1);
  CHECK_THROWS_AS(epsilon(one, {}), UsageError);

  // d(l_<0>, l_<>) = 1 and the third child of <0>: min(1/8, 1/4, sibling terms)
  CascadeSample deep = on_line({{{}, 0}, {{0}, 1}, {{0, 0}, 4}, {{0, 1}, 5}, {{0, 2}, 9}, {{0, 3}, q(11, 10)}});
  CHECK(epsilon(deep, {0, 3}) == q(1, 8));
  CHECK(epsilon(deep, {0, 0}) == q(1, 4));
  CHECK(epsilon(deep, {0, 1}) == q(1, 4));

  // second child of the root with d(l_<0>, l_<>) = 1/2: min(1/2, 1/8)
  CascadeSample two = on_line({{{}, 0}, {{0}, q(1, 2)}, {{1}, q(1, 16)}});
  CHECK(epsilon(two, {1}) == q(1, 8));

  // a missing sibling or distance is an error
  CascadeSample gap({{}, {1}});
  gap.set({}, {1}, q(1, 4));
  CHECK_THROWS_AS(epsilon(gap, {1}), DomainError);
  CascadeSample blank({{}, {0}, {0, 0}});
  CHECK_THROWS_AS(epsilon(blank, {0, 0}), DomainError);
}

TEST_CASE("child conditions") {
  CHECK(check_cascade_conditions(on_line({{{}, 0}})));
  CHECK(check_cascade_conditions(on_line({{{}, 0}, {{0}, q(1, 2)}, {{1}, q(-1, 16)}})));

  // a child equal to its parent breaks distinctness even though 0 < epsilon
  auto same = find_condition_violation(on_line({{{}, 0}, {{0}, 0}}));
  REQUIRE(same);
  CHECK(same->clause == "distinct");

  // a child exactly at epsilon: rejected, unless the bound is relaxed
  const CascadeSample edge = on_line({{{}, 0}, {{0}, 1}});
  auto v = find_condition_violation(edge);
  REQUIRE(v);
  CHECK(v->clause == "bound");
  CHECK(v->distance == 1);
  CHECK(v->epsilon == 1);
  CHECK(check_cascade_conditions(edge, true));

  // a grandchild meeting the root
  auto back = find_condition_violation(on_line({{{}, 0}, {{0}, q(1, 2)}, {{0, 0}, 0}}));
  REQUIRE(back);
  CHECK(back->clause == "bound");  // 1/2 > epsilon = 1/8 is caught first

  CascadeSample partial({{}, {0}});
  CHECK_FALSE(check_cascade_conditions(partial));
}

TEST_CASE("separation") {
  // near the boundary everywhere: l_<> = 0, l_<0> = 1 - 1/64, l_<1> = -(1/4 - 1/64)
  // and grandchildren pushed towards each other
  const mpq_class a = 1 - q(1, 64);
  const mpq_class b = -(a / 4 - q(1, 1024));
  const mpq_class ga = a - (a / 4 - q(1, 1024));
  const mpq_class gb = b + (-b / 4 - q(1, 4096));
  const CascadeSample s = on_line({{{}, 0}, {{0}, a}, {{1}, b}, {{0, 0}, ga}, {{1, 0}, gb}});
  REQUIRE(check_cascade_conditions(s));
  CHECK(check_separation(s, {0}, {1}, 0));
  CHECK(check_separation(s, {0, 0}, {1, 0}, 0));
  CHECK(check_separation(s, {0, 0}, {1}, 0));
  // the margin by hand: d(ga, gb) against a / 3
  CHECK(abs(ga - gb) - a / 3 > q(1, 3));

  CHECK_THROWS_AS(check_separation(s, {1}, {0}, 0), UsageError);
  CHECK_THROWS_AS(check_separation(s, {0, 0}, {1, 0}, 1), UsageError);
  CHECK_THROWS_AS(check_separation(s, {0}, {1}, 1), UsageError);

  // without the bound the inequality can fail
  const CascadeSample bad = on_line({{{}, 0}, {{0}, 1}, {{1}, 1}});
  CHECK_FALSE(check_cascade_conditions(bad));
  CHECK_FALSE(check_separation(bad, {0}, {1}, 0));
}

TEST_CASE("generated cascades") {
  const CascadeSample root = gen_cascade(3, 0, 4);
  CHECK(root.size() == 1);
  const CascadeSample s = gen_cascade(0, 2, 2);
  CHECK(s.size() == 7);
  CHECK(check_cascade_conditions(s));
  CHECK(gen_cascade(0, 2, 2).to_json() == s.to_json());
  CHECK_THROWS_AS(gen_cascade(0, 7, 2), CapacityError);

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t depth = seed % 4, branching = 1 + seed % 3;
    const CascadeSample g = gen_cascade(seed, depth, branching);
    CHECK(check_cascade_conditions(g));
    CHECK_FALSE(g.triangle_violation().has_value());
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) CHECK(g.d_at(i, j) == g.d_at(j, i));
      // later siblings never get a larger bound
      const auto& kids = g.children(i);
      for (std::size_t k = 1; k < kids.size(); ++k) CHECK(epsilon(g, g.node(kids[k])) <= epsilon(g, g.node(kids[k - 1])));
    }
    const CascadeSample edge = gen_cascade(seed, depth + 1, branching, CascadePlacement::boundary);
    CHECK_FALSE(check_cascade_conditions(edge));
    CHECK(check_cascade_conditions(edge, true));
  }
}

TEST_CASE("cascade suite") {
  CascadeOptions o;
  o.trials = 300;
  o.probes = 20;
  const Report r = verify_cascade(o);
  CHECK(r.ok());
  CHECK(r.failures() == 0);
  const Json j = r.to_json();
  CHECK(j["findings"]["cascades_meeting_conditions"] == 300);
  CHECK(j["findings"]["triples"] > 0);
  CHECK(j["findings"]["boundary_probes"] == 20);
  CHECK(r.dump() == verify_cascade(o).dump());

  o.mutation.relax_epsilon = true;
  const Report relaxed = verify_cascade(o);
  CHECK_FALSE(relaxed.ok());
  const Json rj = relaxed.to_json();
  REQUIRE_FALSE(rj["counterexamples"].empty());
  CHECK(rj["counterexamples"][0]["check"] == "strictness");
  CHECK(rj["counterexamples"][0]["clause"] == "bound");
}
