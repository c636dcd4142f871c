#include "hurewicz/verifier.hpp"

#include "hurewicz/prime_coding.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace hurewicz {

namespace {

constexpr std::size_t kMargin = 16;  // explicit coordinates kept past the last rewrite

std::string brief(const Natural& v) {
  if (v.is_symbolic()) {
    const std::size_t n = v.form_size();
    std::string out = "J[";
    for (std::size_t i = 0; i < n && i < 6; ++i) {
      if (i) out += ';';
      out += brief(v.form_at(i));
    }
    if (n > 6) out += ";...;" + brief(v.form_at(n - 1)) + "] (" + std::to_string(n) + " entries)";
    else out += "]";
    return out;
  }
  if (v.exact_bits() > 128) return "<" + std::to_string(v.exact_bits()) + "-bit code>";
  return v.to_string();
}

// Non-1 coordinates below n, which is what identifies a sampled point.
std::string describe(const PointPrefix& x, std::size_t n) {
  std::string out;
  std::size_t shown = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Natural* v = x.get(i);
    if (!v) {
      out += (out.empty() ? "" : " ") + std::string("...");
      break;
    }
    if (v->is_one()) continue;
    if (shown == 12) {
      out += " ...";
      break;
    }
    out += (out.empty() ? "" : " ") + ("x(" + std::to_string(i) + ")=" + brief(*v));
    ++shown;
  }
  return out.empty() ? "all ones" : out;
}

std::size_t coordinate(const Natural& q) { return static_cast<std::size_t>(*q.small()); }

bool has_one_at_power_of_two(const Node& s) {
  for (std::size_t q = 2; q < s.size(); q *= 2) {
    if (s[q].is_one()) return true;
  }
  return false;
}

std::optional<BranchIndex> parent_of(const BranchIndex& b) {
  if (b.s.empty()) return std::nullopt;
  const std::size_t k = b.s.size();
  return BranchIndex(FiniteSeq(b.s.begin(), b.s.begin() + static_cast<std::ptrdiff_t>(k - 1)),
                     FiniteSeq(b.t.begin(), b.t.begin() + static_cast<std::ptrdiff_t>(k)));
}

void declare_departure(Report& r) {
  r.declare("domain", "sampled point satisfies the branch constraints and f_{s,t} accepts it");
  r.declare("lex-increase", "x <_lex f_{s,t}(x)");
  r.declare("stabilization", "f_{s,t}(x)(q) = x(q) for every q > J(s^t)");
  r.declare("alphabet-closure", "f_{s,t}(x)(q) lies in A_q for every rewritten q");
  r.declare("inverse", "f_{s,t}^{-1}(f_{s,t}(x)) = x");
  r.declare("nested-domains", "D(s^n, t^m) is contained in D(s, t)");
  r.declare("stability-bound",
            "f_{s^n,t^m}(x) and f_{s,t}(x) first differ at an index >= J(s^n^t^m)");
  r.declare("disjointness", "x lies in no other domain D(s, t') with J(s^t') below the horizon");
  r.declare("find-branch", "the greedy branch search at x returns t");
}

void check_branch(const DepartureOptions& o, const PointSampler& sampler, const std::vector<BranchIndex>& branches,
                  const std::vector<CylinderConstraint>& cons, const std::vector<std::size_t>& siblings,
                  std::optional<std::size_t> parent, std::size_t i, Report& rep) {
  const BranchIndex& b = branches[i];
  const CylinderConstraint& c = cons[i];
  const std::size_t top = coordinate(c.ones.back());
  const std::size_t n = top + 1 + kMargin;
  auto rng = seeded_rng(o.seed, i, 1);
  const std::string name = b.to_string();
  for (std::size_t k = 0; k < o.samples; ++k) {
    auto sampled = sampler.inside(rng, c, n);
    if (!sampled) throw std::logic_error("sampler could not satisfy " + name);
    const PointPrefix& x = *sampled;
    auto ce = [&](Json extra = Json::object()) {
      Json j = Json::object();
      j["branch"] = name;
      j["point"] = describe(x, n);
      for (auto& [key, v] : extra.items()) j[key] = v;
      return j;
    };
    PointPrefix y;
    try {
      if (in_domain(x, c) != Verdict::yes) throw DomainError("constraints not met");
      y = apply(b, x, o.mutation);
      rep.pass("domain");
    } catch (const std::exception& e) {
      rep.fail("domain", ce({{"error", e.what()}}));
      continue;
    }

    const Disagreement d = first_disagreement(x, y);
    try {
      const bool up = d.kind == Disagreement::Kind::differ && *x.get(d.index) < *y.get(d.index);
      rep.expect("lex-increase", up, [&] {
        return ce({{"index", d.index}, {"kind", d.kind == Disagreement::Kind::equal ? "equal" : "other"}});
      });
    } catch (const RepresentationError&) {
      rep.inconclusive("lex-increase");
    }

    std::optional<std::size_t> moved;
    for (std::size_t q = top + 1; q < n && !moved; ++q) {
      if (!(*y.get(q) == *x.get(q))) moved = q;
    }
    rep.expect("stabilization", !moved && y.tail_ones() == x.tail_ones(),
               [&] { return ce({{"index", moved ? Json(*moved) : Json("tail")}}); });

    std::optional<std::size_t> outside;
    for (const Natural& q : c.ones) {
      const std::size_t k2 = coordinate(q);
      if (!is_member(k2, *y.get(k2))) {
        outside = k2;
        break;
      }
    }
    rep.expect("alphabet-closure", !outside, [&] {
      return ce({{"index", *outside}, {"value", brief(*y.get(*outside))}});
    });

    try {
      const PointPrefix back = inverse(b, y);
      const Disagreement dd = first_disagreement(back, x);
      rep.expect("inverse", dd.kind == Disagreement::Kind::equal, [&] { return ce({{"index", dd.index}}); });
    } catch (const DomainError& e) {
      rep.fail("inverse", ce({{"error", e.what()}}));
    }

    if (parent) {
      const BranchIndex& pb = branches[*parent];
      const bool inside = in_domain(x, cons[*parent]) == Verdict::yes;
      rep.expect("nested-domains", inside, [&] { return ce({{"parent", pb.to_string()}}); });
      if (inside) {
        const PointPrefix z = apply(pb, x, o.mutation);
        const Disagreement dz = first_disagreement(y, z);
        rep.expect("stability-bound", dz.kind == Disagreement::Kind::differ && dz.index >= top, [&] {
          return ce({{"parent", pb.to_string()}, {"first_difference", dz.index}, {"bound", top}});
        });
      }
    }

    for (std::size_t j : siblings) {
      if (j == i) continue;
      const Verdict v = in_domain(x, cons[j]);
      rep.expect("disjointness", v == Verdict::no, [&] {
        return ce({{"other", branches[j].to_string()}, {"verdict", to_string(v)}});
      });
    }

    const BranchSearch fb = find_branch(b.s, x);
    rep.expect("find-branch", fb.verdict == Verdict::yes && fb.t == b.t, [&] {
      return ce({{"verdict", to_string(fb.verdict)}, {"found", fb.verdict == Verdict::yes ? to_string(fb.t) : ""}});
    });
  }
}

void relation_checks(const DepartureOptions& o, Report& r) {
  r.declare("forest", "the T-graph on depth-p nodes has no cycle");
  r.declare("loop-psi", "s R s implies psi(s,s) = 0");
  r.declare("loop-powers-of-two", "s R s iff s(q) != 1 for every power of two 2 <= q < |s|");
  r.declare("antisymmetry", "s R t and t R s imply s = t");
  r.declare("psi-extension", "s^j R t^j implies s R t and psi(s^j,t^j) = psi(s,t)");
  if (o.pairwise) r.declare("pairwise", "rel_R on every ordered pair agrees with the T-graph, psi included");
  Json census = Json::array();
  for (std::size_t p = 0; p <= std::min<std::size_t>(o.depth, 4); ++p) {
    RelationGraph g = t_graph(p);
    const ForestReport fr = verify_forest(g);
    Json row = Json::object();
    row["p"] = p;
    row["nodes"] = fr.nodes;
    row["edges"] = fr.edges;
    row["loops"] = fr.loops;
    row["components"] = fr.components;
    census.push_back(std::move(row));
    r.expect("forest", fr.acyclic, [&] {
      Json cyc = Json::array();
      for (std::size_t u : fr.cycle) cyc.push_back(to_string(g.nodes[u]));
      return Json{{"p", p}, {"cycle", cyc}};
    });

    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> related;
    std::vector<bool> loop(g.nodes.size(), false);
    for (const auto& [u, rank] : g.loops) {
      loop[u] = true;
      related[{u, u}] = rank;
      r.expect("loop-psi", rank == 0, [&] { return Json{{"s", to_string(g.nodes[u])}, {"psi", rank}}; });
    }
    for (const RelationEdge& e : g.edges) related[{e.from, e.to}] = e.psi;
    for (std::size_t u = 0; u < g.nodes.size(); ++u) {
      r.expect("loop-powers-of-two", loop[u] == !has_one_at_power_of_two(g.nodes[u]),
               [&] { return Json{{"s", to_string(g.nodes[u])}, {"loop", bool(loop[u])}}; });
    }
    for (const RelationEdge& e : g.edges) {
      const bool ok = !related.contains({e.to, e.from}) && lex_compare(g.nodes[e.from], g.nodes[e.to]) < 0;
      r.expect("antisymmetry", ok,
               [&] { return Json{{"s", to_string(g.nodes[e.from])}, {"t", to_string(g.nodes[e.to])}}; });
    }

    if (p > 0) {
      for (const auto& [key, rank] : related) {
        const Node& s = g.nodes[key.first];
        const Node& t = g.nodes[key.second];
        if (!(s.back() == t.back())) continue;
        const Node ps(s.begin(), s.end() - 1), pt(t.begin(), t.end() - 1);
        const auto pr = rel_R(ps, pt);
        r.expect("psi-extension", pr.related && *pr.psi == rank, [&] {
          return Json{{"s", to_string(s)}, {"t", to_string(t)}, {"psi", rank},
                      {"parent_psi", pr.psi ? Json(*pr.psi) : Json(nullptr)}};
        });
      }
    }

    if (o.pairwise) {
      std::vector<Report> rows(g.nodes.size(), Report(r.suite()));
      parallel_for(g.nodes.size(), [&](std::size_t u) {
        Report& rep = rows[u];
        rep.declare("pairwise", "");
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
          const auto rr = rel_R(g.nodes[u], g.nodes[v]);
          auto it = related.find({u, v});
          const bool ok = rr.related == (it != related.end()) && (!rr.related || *rr.psi == it->second);
          rep.expect("pairwise", ok, [&] {
            return Json{{"s", to_string(g.nodes[u])}, {"t", to_string(g.nodes[v])}, {"rel_R", rr.related},
                        {"graph", it != related.end()}};
          });
        }
      });
      for (const Report& rep : rows) r.merge(rep);
    }
  }
  r.findings()["t_graph"] = std::move(census);
}

}  // namespace

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

Json mutation_json(const Mutation& m) {
  Json out = Json::array();
  if (m.rewrite_off_by_one) out.push_back("rewrite-off-by-one");
  if (m.drop_non_ones) out.push_back("drop-non-ones");
  if (m.relax_epsilon) out.push_back("relax-epsilon");
  return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PointSampler::PointSampler(std::uint64_t seed, std::size_t length, std::size_t bases) : length_(length) {
  auto rng = seeded_rng(seed, 0, 99);
  bases_.emplace_back(FiniteSeq(length, Natural(1)), true);
  for (std::size_t k = 1; k < std::max<std::size_t>(bases, 1); ++k) {
    FiniteSeq v(length);
    for (std::size_t i = 0; i < length; ++i) {
      v[i] = rng() % 2 ? Natural(1) : bases_[rng() % k].code_prefix_one(i);
    }
    bases_.emplace_back(std::move(v), true);
  }
}

Natural PointSampler::non_one(std::mt19937_64& rng, std::size_t i) const {
  if (i >= length_) throw CapacityError("sampler length " + std::to_string(length_) + " exceeded");
  return bases_[rng() % bases_.size()].code_prefix_one(i);
}

Natural PointSampler::member(std::mt19937_64& rng, std::size_t i) const {
  return rng() % 2 ? Natural(1) : non_one(rng, i);
}

PointPrefix PointSampler::point(std::mt19937_64& rng, std::size_t n) const {
  if (n > length_) throw CapacityError("sampler length " + std::to_string(length_) + " exceeded");
  FiniteSeq v = bases_[rng() % bases_.size()].take(n);
  // Fresh low coordinates and a few scattered ones keep samples apart.
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 48); ++i) v[i] = member(rng, i);
  for (int k = 0; k < 8 && n > 0; ++k) {
    const std::size_t i = rng() % n;
    v[i] = member(rng, i);
  }
  return PointPrefix(std::move(v), true);
}

std::optional<PointPrefix> PointSampler::inside(std::mt19937_64& rng, const CylinderConstraint& c, std::size_t n,
                                                const FiniteSeq& fixed) const {
  const PointPrefix base = point(rng, n);
  FiniteSeq v = *base.entries();
  std::copy(fixed.begin(), fixed.begin() + static_cast<std::ptrdiff_t>(std::min(fixed.size(), n)), v.begin());
  for (const Natural& q : c.ones) {
    const auto k = q.small();
    if (!k || *k >= n) return std::nullopt;
    if (*k < fixed.size() && !fixed[*k].is_one()) return std::nullopt;
    v[*k] = Natural(1);
  }
  for (const Natural& q : c.non_ones) {
    const auto k = q.small();
    if (!k || *k >= n) return std::nullopt;
    if (*k < fixed.size()) {
      if (fixed[*k].is_one()) return std::nullopt;
    } else if (v[*k].is_one()) {
      v[*k] = non_one(rng, *k);
    }
  }
  return PointPrefix(std::move(v), true);
}

Report verify_departure(const DepartureOptions& o) {
  const Limits limits;
  if (o.horizon > limits.max_horizon) {
    throw CapacityError("horizon " + std::to_string(o.horizon) + " exceeds the cap " +
                        std::to_string(limits.max_horizon));
  }
  std::vector<std::vector<Node>> nodes;
  for (std::size_t p = 0; o.density && p <= o.depth; ++p) nodes.push_back(enumerate_nodes(p, limits));

  Report r("departure");
  r.params()["depth"] = o.depth;
  r.params()["horizon"] = o.horizon;
  r.params()["samples"] = o.samples;
  r.params()["seed"] = o.seed;
  r.params()["mutation"] = mutation_json(o.mutation);
  r.params()["density"] = o.density;
  r.params()["relations"] = o.relations;
  r.params()["pairwise"] = o.pairwise;
  declare_departure(r);

  const std::vector<BranchIndex> branches = branches_below(o.horizon);
  std::vector<CylinderConstraint> cons;
  std::map<std::string, std::size_t> by_name;
  std::map<std::string, std::vector<std::size_t>> by_s;
  std::vector<std::string> s_order;
  std::size_t max_top = 0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    cons.push_back(constraints(branches[i], o.mutation));
    max_top = std::max(max_top, coordinate(cons.back().ones.back()));
    by_name.emplace(branches[i].to_string(), i);
    auto [it, fresh] = by_s.try_emplace(to_string(branches[i].s));
    if (fresh) s_order.push_back(it->first);
    it->second.push_back(i);
  }

  const PointSampler sampler(o.seed, max_top + 1 + kMargin);
  std::vector<Report> local(branches.size(), Report("departure"));
  parallel_for(branches.size(), [&](std::size_t i) {
    declare_departure(local[i]);
    std::optional<std::size_t> parent;
    if (auto pb = parent_of(branches[i])) parent = by_name.at(pb->to_string());
    check_branch(o, sampler, branches, cons, by_s.at(to_string(branches[i].s)), parent, i, local[i]);
  });
  for (const Report& rep : local) r.merge(rep);

  // Density: every node, completed by ones, sits in exactly one branch
  // domain for each s-level that has a branch below the horizon.
  if (o.density) r.declare("density", "u^1^w lies in D(s, t) for exactly one t, the one the greedy search finds");
  for (const auto& level : nodes) {
    if (!o.density) break;
    for (const Node& u : level) {
      const PointPrefix x(u, true);
      for (const std::string& key : s_order) {
        const auto& idx = by_s.at(key);
        const FiniteSeq& s = branches[idx.front()].s;
        const BranchSearch fb = find_branch(s, x);
        std::vector<std::size_t> hits;
        for (std::size_t j : idx) {
          if (in_domain(x, cons[j]) != Verdict::no) hits.push_back(j);
        }
        bool ok = fb.verdict == Verdict::yes;
        if (ok) {
          const BranchIndex found(s, fb.t);
          ok = in_domain(x, found, o.mutation) == Verdict::yes;
          auto it = by_name.find(found.to_string());
          if (it != by_name.end()) {
            ok = ok && hits.size() == 1 && hits.front() == it->second;
          } else {
            ok = ok && hits.empty();
          }
        }
        r.expect("density", ok, [&] {
          Json h = Json::array();
          for (std::size_t j : hits) h.push_back(branches[j].to_string());
          return Json{{"node", to_string(u)},
                      {"s", key},
                      {"found", fb.verdict == Verdict::yes ? to_string(fb.t) : to_string(fb.verdict)},
                      {"domains", h}};
        });
      }
    }
  }

  if (o.relations) relation_checks(o, r);
  r.findings()["branches"] = branches.size();
  r.findings()["s_levels"] = s_order.size();
  r.findings()["largest_rewrite"] = max_top;
  return r;
}

Report verify_no_isolated(const NoIsolatedOptions& o) {
  const Limits limits;
  if (o.horizon > limits.max_horizon) {
    throw CapacityError("horizon " + std::to_string(o.horizon) + " exceeds the cap " +
                        std::to_string(limits.max_horizon));
  }
  const std::vector<Node> nodes = enumerate_nodes(o.depth, limits);
  Report r("no-isolated");
  r.params()["depth"] = o.depth;
  r.params()["horizon"] = o.horizon;
  r.params()["samples"] = o.samples;
  r.params()["extensions"] = o.extensions;
  r.params()["precision"] = o.precision;
  r.params()["seed"] = o.seed;
  r.params()["mutation"] = mutation_json(o.mutation);
  r.declare("extension-branch", "the branch of s^n at x extends t");
  r.declare("convergence",
            "f_{s^n,t'}(x) agrees with f_{s,t}(x) below J(s^n^t') and differs from it somewhere");
  r.declare("equicontinuity",
            "below the precision window each output coordinate is x(q), or J(x|q ^ 1) at a 1 of x whose index codes an odd-length sequence");

  const std::vector<BranchIndex> branches = branches_below(o.horizon);
  std::vector<CylinderConstraint> cons;
  for (const BranchIndex& b : branches) cons.push_back(constraints(b, o.mutation));
  const std::size_t length = static_cast<std::size_t>(o.horizon) + kMargin;
  const PointSampler sampler(o.seed, std::max(length, o.depth));
  const Natural horizon(o.horizon);

  std::vector<Report> local(o.samples, Report("no-isolated"));
  std::vector<std::size_t> distinct(o.samples, 0), applicable(o.samples, 0);
  parallel_for(o.samples, [&](std::size_t k) {
    Report& rep = local[k];
    rep.declare("extension-branch", "");
    rep.declare("convergence", "");
    rep.declare("equicontinuity", "");
    auto rng = seeded_rng(o.seed, k, 2);
    const Node& u = nodes[k % nodes.size()];
    FiniteSeq v = k == 0 ? FiniteSeq(u) : *sampler.point(rng, length).entries();
    std::copy(u.begin(), u.end(), v.begin());
    const PointPrefix x(std::move(v), true);
    std::set<std::string> windows;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const BranchIndex& b = branches[i];
      if (in_domain(x, cons[i]) != Verdict::yes) continue;
      ++applicable[k];
      const PointPrefix y = apply(b, x, o.mutation);
      auto ce = [&](Json extra) {
        Json j{{"branch", b.to_string()}, {"point", describe(x, coordinate(cons[i].ones.back()) + 1)}};
        for (auto& [key, val] : extra.items()) j[key] = val;
        return j;
      };

      std::string window;
      std::optional<std::size_t> bad;
      for (std::size_t q = 0; q < o.precision; ++q) {
        const Natural& xq = *x.get(q);
        const Natural& yq = *y.get(q);
        window += brief(yq) + ",";
        if (yq == xq) continue;
        const auto dq = decode(Natural(q));
        const bool ok = xq.is_one() && dq && dq->size() % 2 == 1 && yq == x.code_prefix_one(q);
        if (!ok && !bad) bad = q;
      }
      windows.insert(window);
      rep.expect("equicontinuity", !bad, [&] { return ce({{"index", *bad}, {"value", brief(*y.get(*bad))}}); });

      for (std::uint64_t n = 0; n < o.extensions; ++n) {
        FiniteSeq s2 = b.s;
        s2.emplace_back(n);
        const BranchSearch fb = find_branch(s2, x);
        if (fb.verdict != Verdict::yes) {
          rep.inconclusive("convergence");
          continue;
        }
        const bool extends = std::equal(b.t.begin(), b.t.end(), fb.t.begin());
        rep.expect("extension-branch", extends, [&] { return ce({{"n", n}, {"found", to_string(fb.t)}}); });
        const BranchIndex b2(s2, fb.t);
        const Natural bound = max_modified(b2);
        if (!(bound < horizon)) {
          rep.inconclusive("convergence");
          continue;
        }
        const PointPrefix y2 = apply(b2, x, o.mutation);
        const Disagreement d = first_disagreement(y2, y);
        rep.expect("convergence", d.kind == Disagreement::Kind::differ && Natural(d.index) >= bound, [&] {
          return ce({{"extension", b2.to_string()},
                     {"bound", bound.to_string()},
                     {"first_difference", d.kind == Disagreement::Kind::differ ? Json(d.index) : Json(nullptr)}});
        });
      }
    }
    distinct[k] = windows.size();
  });
  for (const Report& rep : local) r.merge(rep);
  std::size_t widest = 0, total = 0;
  for (std::size_t k = 0; k < o.samples; ++k) {
    widest = std::max(widest, distinct[k]);
    total += applicable[k];
  }
  r.findings()["branch_applications"] = total;
  r.findings()["max_distinct_output_windows"] = widest;
  return r;
}

Report verify_arrival_no_fixed_composition(const ArrivalOptions& o) {
  const Limits limits;
  if (o.horizon > limits.max_horizon) {
    throw CapacityError("horizon " + std::to_string(o.horizon) + " exceeds the cap " +
                        std::to_string(limits.max_horizon));
  }
  if (o.max_chain > 4) throw CapacityError("max_chain above 4 is not supported");
  const std::vector<Node> nodes = enumerate_nodes(o.depth, limits);
  Report r("arrival-scan", false);
  r.params()["depth"] = o.depth;
  r.params()["horizon"] = o.horizon;
  r.params()["max_chain"] = o.max_chain;
  r.declare("not-identity",
            "an alternating composition without equal neighbours, defined at a candidate point, moves it");

  const std::vector<BranchIndex> branches = branches_below(o.horizon);
  std::vector<CylinderConstraint> cons;
  std::size_t max_top = 0;
  for (const BranchIndex& b : branches) {
    cons.push_back(constraints(b));
    max_top = std::max(max_top, coordinate(cons.back().ones.back()));
  }
  const std::size_t length = std::max(max_top + 1, o.depth);

  // Candidate points: each node, completed by ones and pushed into the
  // domain of the first map applied.
  auto candidate = [&](const Node& u, std::size_t d) -> std::optional<PointPrefix> {
    FiniteSeq v(u);
    v.resize(length, Natural(1));
    std::map<std::size_t, bool> want;  // coordinate -> must be 1
    for (const Natural& q : cons[d].ones) want[coordinate(q)] = true;
    for (const Natural& q : cons[d].non_ones) want[coordinate(q)] = false;
    for (const auto& [q, one] : want) {
      if (q < u.size()) {
        if (u[q].is_one() != one) return std::nullopt;
        continue;
      }
      if (one) {
        v[q] = Natural(1);
      } else {
        FiniteSeq prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(q));
        prefix.emplace_back(std::uint64_t{1});
        v[q] = encode(prefix);
      }
    }
    return PointPrefix(std::move(v), true);
  };

  Json per_chain = Json::array();
  Json hits = Json::array();
  for (std::size_t k = 1; k <= o.max_chain; ++k) {
    std::set<std::string> defined;
    std::size_t evaluations = 0;
    for (std::size_t d = 0; d < branches.size(); ++d) {
      for (const Node& u : nodes) {
        auto x0 = candidate(u, d);
        if (!x0) continue;
        const PointPrefix x = *x0;
        std::vector<std::size_t> word(2 * k);
        word[2 * k - 1] = d;
        // pos counts down from 2k-1; odd positions apply g, even ones g^{-1}
        std::function<void(std::size_t, const PointPrefix&)> walk = [&](std::size_t pos, const PointPrefix& z) {
          if (pos == 0) {
            ++evaluations;
            std::string key;
            for (std::size_t w : word) key += branches[w].to_string() + " ";
            key.pop_back();
            defined.insert(key);
            const bool fixed = first_disagreement(z, x).kind == Disagreement::Kind::equal;
            r.expect("not-identity", !fixed, [&] { return Json{{"word", key}, {"point", describe(x, length)}}; });
            if (fixed && hits.size() < 32) hits.push_back(Json{{"word", key}, {"point", describe(x, length)}});
            return;
          }
          const std::size_t next = pos - 1;
          for (std::size_t b = 0; b < branches.size(); ++b) {
            if (b == word[pos]) continue;
            word[next] = b;
            if (next % 2 == 1) {
              if (in_domain(z, cons[b]) != Verdict::yes) continue;
              walk(next, apply(branches[b], z));
            } else {
              try {
                walk(next, inverse(branches[b], z));
              } catch (const DomainError&) {
              }
            }
          }
        };
        if (in_domain(x, cons[d]) != Verdict::yes) continue;
        walk(2 * k - 1, apply(branches[d], x));
      }
    }
    Json row = Json::object();
    row["k"] = k;
    std::size_t words = branches.size();
    for (std::size_t i = 1; i < 2 * k; ++i) words *= branches.size() - 1;
    row["words"] = words;
    row["evaluations"] = evaluations;
    row["defined_words"] = defined.size();
    Json sample = Json::array();
    for (const std::string& w : defined) {
      if (sample.size() == 24) break;
      sample.push_back(w);
    }
    row["defined_sample"] = std::move(sample);
    per_chain.push_back(std::move(row));
  }
  r.findings()["branches"] = branches.size();
  r.findings()["chains"] = std::move(per_chain);
  r.findings()["identity_hits"] = std::move(hits);
  return r;
}

}  // namespace hurewicz
