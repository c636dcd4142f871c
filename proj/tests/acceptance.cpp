// End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

#include "hurewicz/alphabet.hpp"
#include "hurewicz/cascade.hpp"
#include "hurewicz/good_sequence.hpp"
#include "hurewicz/prime_coding.hpp"
#include "hurewicz/verifier.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

using namespace hurewicz;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool ok = o.ok && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %d %s: %s (%.1f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              secs, limit_s, in_time ? "" : ", too slow");
  std::fflush(stdout);
}

const CheckTally* tally(const Report& r, const std::string& name) {
  for (const CheckTally& c : r.checks()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// every named check ran at least once and never failed
bool all_pass(const Report& r, std::initializer_list<const char*> names, std::string& detail) {
  bool ok = r.failures() == 0;
  for (const char* n : names) {
    const CheckTally* c = tally(r, n);
    const std::size_t passed = c ? c->passed : 0;
    const std::size_t failed = c ? c->failed : 0;
    detail += std::string(detail.empty() ? "" : ", ") + n + " " + std::to_string(passed) + "/" +
              std::to_string(passed + failed);
    ok = ok && c && c->passed > 0 && c->failed == 0;
  }
  if (r.failures()) detail += ", " + std::to_string(r.failures()) + " failures overall";
  return ok;
}

bool has_counterexample(const Report& r, const std::string& check) {
  const Json j = r.to_json();
  for (const auto& c : j["counterexamples"]) {
    if (c["check"] == check) return true;
  }
  return false;
}

mpz_class oracle_code(const std::vector<unsigned>& s) {
  if (s.empty()) return 0;
  mpz_class out = 1, pw;
  for (std::size_t i = 0; i < s.size(); ++i) {
    mpz_ui_pow_ui(pw.get_mpz_t(), nth_prime(i), s[i] + 1);
    out *= pw;
  }
  return out;
}

DepartureOptions axioms_run() {
  DepartureOptions o;
  o.depth = 0;
  o.horizon = 10000;
  o.samples = 1000;
  o.density = false;
  o.relations = false;
  return o;
}

DepartureOptions density_run() {
  DepartureOptions o;
  o.depth = 4;
  o.horizon = 10000;
  o.samples = 0;
  o.relations = false;
  return o;
}

DepartureOptions relations_run() {
  DepartureOptions o;
  o.depth = 4;
  o.horizon = 10000;
  o.samples = 0;
  o.density = false;
  return o;
}

CascadeOptions cascade_run() {
  CascadeOptions o;
  o.trials = 10000;
  return o;
}

}  // namespace

int main() {
  criterion(1, "coding", 5, [] {
    std::set<mpz_class> codes;
    std::size_t cases = 0, bad = 0;
    std::vector<unsigned> s;
    std::function<void()> walk = [&] {
      ++cases;
      FiniteSeq v;
      for (unsigned x : s) v.emplace_back(std::uint64_t{x});
      const Natural c = encode(v);
      if (c.exact() != oracle_code(s)) ++bad;
      if (!codes.insert(c.exact()).second) ++bad;
      const auto back = decode(c);
      if (!s.empty() && (!back || *back != v)) ++bad;
      if (s.size() == 4) return;
      for (unsigned x = 0; x < 8; ++x) {
        s.push_back(x);
        walk();
        s.pop_back();
      }
    };
    walk();
    return Outcome{cases == 4681 && bad == 0,
                   std::to_string(cases) + " sequences, " + std::to_string(codes.size()) + " distinct codes, " +
                       std::to_string(bad) + " mismatches"};
  });

  criterion(2, "alphabets", 10, [] {
    const auto as = alphabets(5);
    const std::size_t want[] = {2, 3, 7, 43, 1807};
    bool ok = as.size() == 5;
    std::string sizes;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < as.size(); ++i) {
      sizes += (i ? "," : "") + std::to_string(as[i]->size());
      ok = ok && as[i]->size() == want[i];
      for (const Natural& m : as[i]->members) {
        if (m.is_one()) continue;
        const auto u = decode(m);
        bool good = u && u->size() == i + 1 && u->back().is_one();
        for (std::size_t j = 0; good && j < i; ++j) good = as[j]->contains((*u)[j]);
        bad += !good;
      }
    }
    ok = ok && as[0]->members == FiniteSeq{Natural(1), Natural(4)};
    ok = ok && as[1]->members == FiniteSeq{Natural(1), Natural(36), Natural(288)};
    return Outcome{ok && bad == 0, "sizes " + sizes + ", " + std::to_string(bad) + " members not of the form J(u^1)"};
  });

  criterion(3, "departure axioms", 60, [] {
    const Report r = verify_departure(axioms_run());
    std::string d;
    bool ok = all_pass(r, {"domain", "lex-increase", "stabilization", "alphabet-closure", "stability-bound",
                           "nested-domains", "disjointness"},
                       d);
    const std::size_t branches = r.to_json()["findings"]["branches"];
    ok = ok && tally(r, "domain")->passed == branches * 1000;
    return Outcome{ok, std::to_string(branches) + " branches x 1000 points; " + d};
  });

  criterion(4, "density", 60, [] {
    const Report r = verify_departure(density_run());
    std::string d;
    const bool ok = all_pass(r, {"density"}, d);
    return Outcome{ok, "nodes of depth <= 4 against every s-level below 10^4; " + d};
  });

  criterion(5, "relation axioms", 300, [] {
    const Report r = verify_departure(relations_run());
    std::string d;
    bool ok = all_pass(r, {"forest", "loop-psi", "loop-powers-of-two", "antisymmetry", "psi-extension", "pairwise"}, d);
    const Json census = r.to_json()["findings"]["t_graph"];
    ok = ok && census.size() == 5 && census[3]["edges"] == 6;
    std::string edges;
    for (const auto& row : census) edges += (edges.empty() ? "" : ",") + row["edges"].dump();
    return Outcome{ok, "edges per depth 0..4: " + edges + "; " + d};
  });

  criterion(6, "good sequence", 120, [] {
    const Report r = verify_good_sequence(GoodSuiteOptions{});
    std::string d;
    const bool ok = all_pass(r, {"sigma-injective", "sigma-fixes-coprime", "convergence-shadow", "disagreement-witness"}, d);
    return Outcome{ok, d};
  });

  criterion(7, "cascade", 120, [] {
    const Report r = verify_cascade(cascade_run());
    std::string d;
    const bool ok = all_pass(r, {"generator-valid", "separation"}, d);
    return Outcome{ok, "10^4 cascades; " + d};
  });

  criterion(8, "mutation sensitivity", 120, [] {
    DepartureOptions dep;
    dep.depth = 2;
    dep.horizon = 1000;
    dep.samples = 20;
    dep.pairwise = false;
    dep.mutation.rewrite_off_by_one = true;
    const Report off = verify_departure(dep);
    dep.mutation = {};
    dep.mutation.drop_non_ones = true;
    const Report drop = verify_departure(dep);
    CascadeOptions cas;
    cas.trials = 200;
    cas.mutation.relax_epsilon = true;
    const Report relax = verify_cascade(cas);
    const bool a = !off.ok() && has_counterexample(off, "alphabet-closure");
    const bool b = !drop.ok() && has_counterexample(drop, "disjointness");
    const bool c = !relax.ok() && has_counterexample(relax, "strictness");
    return Outcome{a && b && c, std::string("off-by-one ") + (a ? "caught" : "missed") + " by alphabet-closure, " +
                                    "drop-non-ones " + (b ? "caught" : "missed") + " by disjointness, " +
                                    "relax-epsilon " + (c ? "caught" : "missed") + " by strictness"};
  });

  criterion(9, "determinism", 600, [] {
    std::vector<std::pair<std::string, std::function<std::string()>>> suites = {
        {"departure", [] { return verify_departure(axioms_run()).dump(); }},
        {"density", [] { return verify_departure(density_run()).dump(); }},
        {"relations", [] { return verify_departure(relations_run()).dump(); }},
        {"no-isolated", [] { return verify_no_isolated(NoIsolatedOptions{}).dump(); }},
        {"arrival-scan", [] { return verify_arrival_no_fixed_composition(ArrivalOptions{}).dump(); }},
        {"good-suite", [] { return verify_good_sequence(GoodSuiteOptions{}).dump(); }},
        {"cascade", [] { return verify_cascade(cascade_run()).dump(); }},
    };
    std::string differ;
    for (const auto& [name, run] : suites) {
      if (run() != run()) differ += " " + name;
    }
    return Outcome{differ.empty(), differ.empty() ? std::to_string(suites.size()) + " suites, two runs each, identical bytes"
                                                  : "differ:" + differ};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
