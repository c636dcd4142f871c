#include "hurewicz/verifier.hpp"
#include "hurewicz/prime_coding.hpp"

#include "doctest.h"

using namespace hurewicz;

namespace {

const CheckTally& tally(const Report& r, const std::string& name) {
  for (const CheckTally& c : r.checks()) {
    if (c.name == name) return c;
  }
  throw std::logic_error("no check " + name);
}

bool has_counterexample(const Report& r, const std::string& name) {
  const Json j = r.to_json();
  for (const auto& c : j["counterexamples"]) {
    if (c["check"] == name) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("report tallies, caps and merge") {
  Report r("demo");
  r.declare("a", "first");
  r.declare("b", "second");
  r.pass("a", 3);
  for (int i = 0; i < 20; ++i) r.fail("b", Json{{"i", i}});
  r.inconclusive("a");
  CHECK(r.failures() == 20);
  CHECK(r.passes() == 3);
  CHECK(r.inconclusives() == 1);
  CHECK_FALSE(r.ok());
  Json j = r.to_json();
  CHECK(j["schema"] == "hurewicz-kit/1");
  CHECK(j["counterexamples"].size() == Report::kMaxCounterexamples);
  CHECK(j["counterexamples"][0]["check"] == "b");
  CHECK(j["summary"]["status"] == "fail");
  CHECK_THROWS_AS(r.pass("missing"), std::logic_error);

  Report other("demo");
  other.declare("c", "third");
  other.fail("c", Json{{"x", 1}});
  r.merge(other);
  CHECK(r.failures() == 21);
  CHECK(r.to_json()["counterexamples"].size() == Report::kMaxCounterexamples + 1);

  Report explore("scan", false);
  explore.declare("a", "");
  explore.fail("a", Json::object());
  CHECK(explore.ok());
  CHECK(explore.to_json()["summary"]["mode"] == "exploratory");
}

TEST_CASE("sampled points lie in F and in the requested cylinder") {
  const PointSampler sampler(7, 400);
  auto rng = seeded_rng(7, 1);
  for (int k = 0; k < 20; ++k) {
    const PointPrefix x = sampler.point(rng, 300);
    CHECK(x.length() == 300);
    CHECK(x.tail_ones());
    for (std::size_t i = 0; i < 300; ++i) CHECK(is_member(i, *x.get(i)));
  }
  for (const BranchIndex& b : branches_below(300)) {
    const auto c = constraints(b);
    const std::size_t n = static_cast<std::size_t>(*c.ones.back().small()) + 5;
    auto x = sampler.inside(rng, c, n);
    REQUIRE(x);
    CHECK(in_domain(*x, b) == Verdict::yes);
  }
  // a fixed prefix that contradicts the constraints is refused
  const auto c = constraints(BranchIndex({}, seq({1})));
  CHECK_FALSE(sampler.inside(rng, c, 10, seq({1, 1, 1})));
  CHECK(sampler.inside(rng, c, 10, seq({1, 1, 900})));
  CHECK_THROWS_AS(sampler.point(rng, 401), CapacityError);
}

TEST_CASE("departure suite passes on the example") {
  DepartureOptions o;
  o.depth = 3;
  o.horizon = 10000;
  o.samples = 25;
  const Report r = verify_departure(o);
  CHECK(r.ok());
  CHECK(r.failures() == 0);
  CHECK(r.inconclusives() == 0);
  for (const char* name : {"lex-increase", "stabilization", "alphabet-closure", "stability-bound", "nested-domains",
                           "disjointness", "density", "forest", "pairwise", "psi-extension"}) {
    CHECK_MESSAGE(tally(r, name).passed > 0, name);
  }
  const Json j = r.to_json();
  CHECK(j["findings"]["t_graph"][3]["edges"] == 6);
  CHECK(j["params"]["horizon"] == 10000);

  DepartureOptions zero;
  zero.depth = 0;
  zero.horizon = 100;
  zero.samples = 10;
  CHECK(verify_departure(zero).ok());

  DepartureOptions parts = zero;
  parts.depth = 2;
  parts.density = false;
  parts.relations = false;
  const Report only = verify_departure(parts);
  CHECK(only.ok());
  CHECK_THROWS_AS(tally(only, "density"), std::logic_error);
  CHECK_THROWS_AS(tally(only, "forest"), std::logic_error);
  CHECK(tally(only, "lex-increase").passed > 0);

  DepartureOptions deep;
  deep.depth = 5;
  CHECK_THROWS_AS(verify_departure(deep), CapacityError);
  deep.depth = 2;
  deep.horizon = 2'000'000;
  CHECK_THROWS_AS(verify_departure(deep), CapacityError);
}

TEST_CASE("departure suite catches injected faults") {
  DepartureOptions o;
  o.depth = 2;
  o.horizon = 1000;
  o.samples = 10;
  o.pairwise = false;

  o.mutation.rewrite_off_by_one = true;
  Report r = verify_departure(o);
  CHECK_FALSE(r.ok());
  CHECK(tally(r, "alphabet-closure").failed > 0);
  CHECK(has_counterexample(r, "alphabet-closure"));
  CHECK(r.to_json()["params"]["mutation"][0] == "rewrite-off-by-one");

  o.mutation = {};
  o.mutation.drop_non_ones = true;
  r = verify_departure(o);
  CHECK_FALSE(r.ok());
  CHECK(tally(r, "disjointness").failed > 0);
  CHECK(tally(r, "density").failed > 0);
  CHECK(has_counterexample(r, "disjointness"));
}

TEST_CASE("departure reports are byte-identical across runs") {
  DepartureOptions o;
  o.depth = 2;
  o.horizon = 2000;
  o.samples = 15;
  o.seed = 11;
  CHECK(verify_departure(o).dump() == verify_departure(o).dump());
  o.mutation.drop_non_ones = true;
  CHECK(verify_departure(o).dump() == verify_departure(o).dump());
}

TEST_CASE("extensions converge to the branch image without reaching it") {
  const PointPrefix x = PointPrefix::ones();
  const BranchIndex b({}, seq({0}));
  const BranchSearch fb = find_branch(seq({0}), x);
  REQUIRE(fb.verdict == Verdict::yes);
  CHECK(fb.t == seq({0, 0}));
  const BranchIndex ext(seq({0}), fb.t);
  CHECK(max_modified(ext) == Natural(30));
  const Disagreement d = first_disagreement(apply(ext, x), apply(b, x));
  CHECK(d.kind == Disagreement::Kind::differ);
  CHECK(d.index == 30);

  NoIsolatedOptions o;
  o.depth = 2;
  o.samples = 20;
  const Report r = verify_no_isolated(o);
  CHECK(r.ok());
  CHECK(tally(r, "convergence").passed > 0);
  CHECK(tally(r, "equicontinuity").passed > 0);
  CHECK(r.dump() == verify_no_isolated(o).dump());

  o.horizon = 40;
  const Report small = verify_no_isolated(o);
  CHECK(small.ok());
  CHECK(tally(small, "convergence").inconclusive > 0);

  o.horizon = 10000;
  o.mutation.rewrite_off_by_one = true;
  const Report bad = verify_no_isolated(o);
  CHECK_FALSE(bad.ok());
  CHECK(has_counterexample(bad, "equicontinuity"));
}

TEST_CASE("arrival scan") {
  // The two first-level branches have disjoint domains, so g0^{-1} g1 can
  // fix no point even though it is defined somewhere.
  const BranchIndex b0({}, seq({0})), b1({}, seq({1}));
  const PointPrefix x(seq({1, 1, 900}), true);
  REQUIRE(in_domain(x, b1) == Verdict::yes);
  CHECK(in_domain(x, b0) == Verdict::no);
  const PointPrefix back = inverse(b0, apply(b1, x));
  CHECK(first_disagreement(back, x).kind == Disagreement::Kind::differ);

  ArrivalOptions o;
  o.depth = 3;
  o.horizon = 100;
  o.max_chain = 2;
  const Report r = verify_arrival_no_fixed_composition(o);
  CHECK(r.ok());
  CHECK_FALSE(r.assertive());
  const Json j = r.to_json();
  CHECK(j["findings"]["chains"][0]["defined_words"] > 0);
  CHECK(j["findings"]["identity_hits"].empty());
  CHECK(r.dump() == verify_arrival_no_fixed_composition(o).dump());

  ArrivalOptions one;
  one.depth = 0;
  one.horizon = 3;  // only ((),(0)) qualifies, so every word repeats a term
  one.max_chain = 1;
  const Report vac = verify_arrival_no_fixed_composition(one);
  CHECK(vac.passes() == 0);
  CHECK(vac.failures() == 0);
}
