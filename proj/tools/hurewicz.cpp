#include "hurewicz/alphabet.hpp"
#include "hurewicz/cascade.hpp"
#include "hurewicz/departure.hpp"
#include "hurewicz/good_sequence.hpp"
#include "hurewicz/prime_coding.hpp"
#include "hurewicz/relations.hpp"
#include "hurewicz/verifier.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <list>
#include <map>
#include <sstream>

using namespace hurewicz;

namespace {

struct Output {
  std::string format = "text";
  std::string path;
};

void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out.path);
  f << text;
}

std::string json_text(Json j) {
  Json doc = Json::object();
  doc["schema"] = kSchema;
  for (auto& [k, v] : j.items()) doc[k] = std::move(v);
  return doc.dump(2) + "\n";
}

// "1,1,900" -> (1,1,900); "" and "()" are the empty sequence.
FiniteSeq parse_seq(std::string text) {
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
  FiniteSeq out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(Natural::parse(item));
    } catch (const std::invalid_argument&) {
      throw UsageError("bad entry '" + item + "' in '" + text + "'");
    }
  }
  if (!text.empty() && text.back() == ',') throw UsageError("trailing comma in '" + text + "'");
  return out;
}

Node parse_node(const std::string& text) {
  Node s = parse_seq(text);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_member(i, s[i])) throw UsageError(s[i].to_string() + " is not in A_" + std::to_string(i));
  }
  return s;
}

PosSeq parse_positive(const std::string& text) {
  PosSeq out;
  for (const Natural& v : parse_seq(text)) {
    auto small = v.small();
    if (!small || *small == 0) throw UsageError("entries must be positive machine integers: " + text);
    out.push_back(*small);
  }
  return out;
}

// decimal with the factored form alongside
std::string code_text(const Natural& c) {
  const std::string plain = c.to_string();
  const auto f = factored(c);
  if (!f || *f == plain) return plain;
  return plain + " [" + *f + "]";
}

Json code_json(const Natural& c) {
  Json j = Json::object();
  j["value"] = c.to_string();
  if (auto f = factored(c)) j["factored"] = *f;
  return j;
}

// --- alphabets / nodes -----------------------------------------------------

int cmd_alphabets(std::size_t depth, const Output& out) {
  const auto as = alphabets(depth);
  if (out.format == "json") {
    Json levels = Json::array();
    for (const Alphabet* a : as) {
      Json members = Json::array();
      for (const Natural& m : a->members) {
        Json j = code_json(m);
        if (!m.is_one()) {
          FiniteSeq u = *decode(m);
          u.pop_back();
          j["u"] = to_string(u);
        }
        members.push_back(std::move(j));
      }
      levels.push_back(Json{{"level", a->level}, {"size", a->size()}, {"members", std::move(members)}});
    }
    emit(out, json_text(Json{{"alphabets", std::move(levels)}}));
    return 0;
  }
  std::ostringstream os;
  for (const Alphabet* a : as) {
    os << "A_" << a->level << " (" << a->size() << " members)\n";
    for (const Natural& m : a->members) {
      os << "  " << code_text(m);
      if (!m.is_one()) {
        FiniteSeq u = *decode(m);
        u.pop_back();
        os << "  u=" << to_string(u);
      }
      os << "\n";
    }
  }
  emit(out, os.str());
  return 0;
}

int cmd_nodes(std::size_t length, const Output& out) {
  const auto nodes = enumerate_nodes(length);
  if (out.format == "json") {
    Json list = Json::array();
    for (const Node& s : nodes) list.push_back(to_string(s));
    emit(out, json_text(Json{{"length", length}, {"count", nodes.size()}, {"nodes", std::move(list)}}));
    return 0;
  }
  std::ostringstream os;
  for (const Node& s : nodes) os << to_string(s) << "\n";
  emit(out, os.str());
  return 0;
}

// --- branches ----------------------------------------------------------------

PointPrefix parse_point(const std::string& text) { return PointPrefix(parse_node(text), true); }

int cmd_constraints(const BranchIndex& b, const Output& out) {
  const CylinderConstraint c = constraints(b);
  if (out.format == "json") {
    Json ones = Json::array(), non_ones = Json::array();
    for (const Natural& v : c.ones) ones.push_back(code_json(v));
    for (const Natural& v : c.non_ones) non_ones.push_back(code_json(v));
    emit(out, json_text(Json{{"branch", b.to_string()},
                             {"ones", std::move(ones)},
                             {"non_ones", std::move(non_ones)},
                             {"max_modified", code_json(max_modified(b))}}));
    return 0;
  }
  std::ostringstream os;
  os << "branch " << b.to_string() << "\n";
  os << "must be 1 (rewritten):\n";
  for (const Natural& v : c.ones) os << "  " << code_text(v) << "\n";
  os << "must not be 1:\n";
  for (const Natural& v : c.non_ones) os << "  " << code_text(v) << "\n";
  os << "last modified coordinate: " << code_text(max_modified(b)) << "\n";
  emit(out, os.str());
  return 0;
}

int cmd_apply(const BranchIndex& b, const PointPrefix& x, const Output& out) {
  const PointPrefix y = apply(b, x);
  Json changed = Json::array();
  std::ostringstream os;
  os << "branch " << b.to_string() << " at " << x.to_string() << " then 1s\n";
  const std::size_t n = std::max(x.length(), y.length());
  for (std::size_t i = 0; i < n; ++i) {
    const Natural* a = x.get(i);
    const Natural* c = y.get(i);
    if (*a == *c) continue;
    changed.push_back(Json{{"index", i}, {"from", code_json(*a)}, {"to", code_json(*c)}});
    os << "  x(" << i << "): " << code_text(*a) << " -> " << code_text(*c) << "\n";
  }
  const Disagreement d = first_disagreement(x, y);
  os << "first disagreement at " << d.index << "\n";
  if (out.format == "json") {
    emit(out, json_text(Json{{"branch", b.to_string()},
                             {"point", to_string(x.take(x.length()))},
                             {"changed", std::move(changed)},
                             {"first_disagreement", d.index}}));
  } else {
    emit(out, os.str());
  }
  return 0;
}

int cmd_find(const FiniteSeq& s, const PointPrefix& x, const Output& out) {
  const BranchSearch r = find_branch(s, x);
  if (out.format == "json") {
    Json j{{"s", to_string(s)}, {"point", to_string(x.take(x.length()))}, {"verdict", to_string(r.verdict)}};
    if (r.verdict == Verdict::yes) j["t"] = to_string(r.t);
    emit(out, json_text(std::move(j)));
    return 0;
  }
  switch (r.verdict) {
    case Verdict::yes:
      emit(out, "t = " + to_string(r.t) + "\n");
      break;
    case Verdict::no:
      emit(out, "no branch of " + to_string(s) + " contains the point\n");
      break;
    default:
      emit(out, "undetermined (needs " + std::to_string(r.required) + " coordinates)\n");
  }
  return 0;
}

// --- relations -----------------------------------------------------------------

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

int cmd_relations(std::size_t length, const Output& out) {
  const RelationGraph g = t_graph(length);
  std::map<std::size_t, std::uint64_t> loops(g.loops.begin(), g.loops.end());
  if (out.format == "json") {
    Json nodes = Json::array(), edges = Json::array(), lp = Json::array();
    for (const Node& s : g.nodes) nodes.push_back(to_string(s));
    for (const RelationEdge& e : g.edges)
      edges.push_back(Json{{"from", to_string(g.nodes[e.from])}, {"to", to_string(g.nodes[e.to])}, {"psi", e.psi}});
    for (const auto& [i, p] : g.loops) lp.push_back(Json{{"node", to_string(g.nodes[i])}, {"psi", p}});
    emit(out, json_text(Json{{"length", length}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"loops", std::move(lp)}}));
    return 0;
  }
  std::ostringstream os;
  if (out.format == "dot") {
    os << "graph T" << length << " {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      os << "  n" << i << " [label=\"" << dot_escape(to_string(g.nodes[i]));
      auto it = loops.find(i);
      if (it != loops.end()) os << "\\nloop psi=" << it->second << "\", peripheries=2";
      else os << "\"";
      os << "];\n";
    }
    for (const RelationEdge& e : g.edges) os << "  n" << e.from << " -- n" << e.to << " [label=\"psi=" << e.psi << "\"];\n";
    os << "}\n";
  } else {
    os << g.nodes.size() << " nodes, " << g.edges.size() << " edges, " << g.loops.size() << " loops\n";
    for (const RelationEdge& e : g.edges)
      os << to_string(g.nodes[e.from]) << " R " << to_string(g.nodes[e.to]) << "  psi=" << e.psi << "\n";
    for (const auto& [i, p] : g.loops) os << to_string(g.nodes[i]) << " R itself  psi=" << p << "\n";
  }
  emit(out, os.str());
  return 0;
}

int cmd_psi(const Node& s, const Node& t, const Output& out) {
  if (s.size() != t.size()) throw UsageError("nodes of different lengths: " + to_string(s) + " and " + to_string(t));
  const RelationResult r = rel_R(s, t);
  if (out.format == "json") {
    Json j{{"s", to_string(s)}, {"t", to_string(t)}, {"related", r.related}};
    j["psi"] = r.psi ? Json(*r.psi) : Json(nullptr);
    j["witness"] = r.witness ? Json(r.witness->to_string()) : Json(nullptr);
    emit(out, json_text(std::move(j)));
    return 0;
  }
  if (!r.related) {
    emit(out, "none\n");
    return 0;
  }
  emit(out, std::to_string(*r.psi) + " witness " + r.witness->to_string() + "\n");
  return 0;
}

int cmd_chain(const Node& s, const Node& t, const Output& out) {
  if (s.size() != t.size()) throw UsageError("nodes of different lengths: " + to_string(s) + " and " + to_string(t));
  const RelationGraph g = t_graph(s.size());
  const auto chain = t_chain(s, t, g);
  if (out.format == "json") {
    Json j{{"s", to_string(s)}, {"t", to_string(t)}};
    if (chain) {
      Json c = Json::array();
      for (const Node& v : *chain) c.push_back(to_string(v));
      j["chain"] = std::move(c);
    } else {
      j["chain"] = nullptr;
    }
    emit(out, json_text(std::move(j)));
    return 0;
  }
  if (!chain) {
    emit(out, "none\n");
    return 0;
  }
  std::string line;
  for (std::size_t i = 0; i < chain->size(); ++i) line += (i ? " T " : "") + to_string((*chain)[i]);
  emit(out, line + "\n");
  return 0;
}

// --- good sequence -------------------------------------------------------------------

int cmd_sigma(const PosSeq& s, const std::string& k_text, const Output& out) {
  mpz_class k;
  if (k.set_str(k_text, 10) != 0 || k < 0) throw UsageError("bad index " + k_text);
  const IndexMap map(s);
  const mpz_class v = map(k);
  if (out.format == "json") {
    emit(out, json_text(Json{{"s", to_string(s)}, {"k", k.get_str()}, {"sigma", v.get_str()}, {"level", map.level(k)}}));
  } else {
    emit(out, v.get_str() + "\n");
  }
  return 0;
}

std::string bits_text(const BitPrefix& x) { return x.length() ? x.to_string() : "(empty)"; }

int cmd_witness(const PosSeq& s, const PosSeq& t, const std::string& u_text, const Output& out) {
  const BitPrefix u = BitPrefix::parse(u_text);
  const DisagreementWitness w = disagreement_witness(s, t, u);
  const auto hs = h_eval(s, w.x, w.k), ht = h_eval(t, w.x, w.k);
  if (out.format == "json") {
    emit(out, json_text(Json{{"s", to_string(s)},
                             {"t", to_string(t)},
                             {"u", u.to_string()},
                             {"x", w.x.to_string()},
                             {"k", w.k.get_str()},
                             {"n", w.n},
                             {"source_s", w.source_s.get_str()},
                             {"source_t", w.source_t.get_str()},
                             {"prefix_case", w.prefix_case},
                             {"h_s", hs ? Json(*hs) : Json(nullptr)},
                             {"h_t", ht ? Json(*ht) : Json(nullptr)}}));
    return 0;
  }
  std::ostringstream os;
  os << "k = " << w.k.get_str() << " (n = " << w.n << (w.prefix_case ? ", prefix case" : "") << ")\n";
  os << "h_s reads x(" << w.source_s.get_str() << ") = " << (hs ? (*hs ? 1 : 0) : -1) << "\n";
  os << "h_t reads x(" << w.source_t.get_str() << ") = " << (ht ? (*ht ? 1 : 0) : -1) << "\n";
  os << "x = " << bits_text(w.x) << " then 0s\n";
  emit(out, os.str());
  return 0;
}

// --- verify ----------------------------------------------------------------------------

Mutation parse_mutations(const std::vector<std::string>& names) {
  Mutation m;
  for (const std::string& n : names) {
    if (n == "off-by-one") m.rewrite_off_by_one = true;
    else if (n == "drop-non-ones") m.drop_non_ones = true;
    else if (n == "relax-epsilon") m.relax_epsilon = true;
  }
  return m;
}

int finish_report(const Report& r, const Output& out) {
  if (out.format == "text") {
    std::ostringstream os;
    for (const CheckTally& c : r.checks())
      os << c.name << ": " << c.passed << " passed, " << c.failed << " failed, " << c.inconclusive << " inconclusive\n";
    emit(out, os.str());
  } else {
    emit(out, r.dump());
  }
  std::cerr << r.suite() << ": " << (r.ok() ? "pass" : "FAIL") << " (" << r.passes() << " passed, " << r.failures()
            << " failed, " << r.inconclusives() << " inconclusive";
  if (!r.assertive()) std::cerr << ", exploratory";
  std::cerr << ")\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explore and verify the prime-coded partial homeomorphisms on sequence spaces."};
  app.require_subcommand(1);
  std::function<int()> run;

  // every subcommand owns its settings so defaults do not leak between them
  struct Args {
    Output out;
    std::size_t depth = 0, length = 0;
    std::uint64_t horizon = 0, seed = 0, trials = 0;
    std::string a1, a2, a3;
    std::vector<std::string> mutate;
  };
  std::list<Args> store;
  auto args = [&](CLI::App* cmd, std::vector<std::string> formats) -> Args& {
    Args& a = store.emplace_back();
    a.out.format = formats.front();
    cmd->add_option("--format", a.out.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    cmd->add_option("--out", a.out.path, "Write to this file instead of stdout");
    return a;
  };

  auto* alph = app.add_subcommand("alphabets", "List the alphabets A_0 .. A_{depth-1}");
  Args& al = args(alph, {"text", "json"});
  al.depth = 2;
  alph->add_option("--depth", al.depth, "Number of levels")->capture_default_str();
  alph->callback([&] { run = [&] { return cmd_alphabets(al.depth, al.out); }; });

  auto* nodes = app.add_subcommand("nodes", "List the nodes of a given depth");
  Args& nd = args(nodes, {"text", "json"});
  nd.length = 2;
  nodes->add_option("--length", nd.length, "Node depth")->capture_default_str();
  nodes->callback([&] { run = [&] { return cmd_nodes(nd.length, nd.out); }; });

  auto* branch = app.add_subcommand("branch", "Inspect the branch maps f_{s,t}");
  branch->require_subcommand(1);
  auto* bc = branch->add_subcommand("constraints", "Domain of f_{s,t}");
  Args& c = args(bc, {"text", "json"});
  bc->add_option("s", c.a1, "s, e.g. 0,1 (empty: \"\")")->required();
  bc->add_option("t", c.a2, "t with |t| = |s| + 1")->required();
  bc->callback([&] { run = [&] { return cmd_constraints(BranchIndex(parse_seq(c.a1), parse_seq(c.a2)), c.out); }; });
  auto* ba = branch->add_subcommand("apply", "f_{s,t}(x) for x = given entries then 1s");
  Args& ap = args(ba, {"text", "json"});
  ba->add_option("s", ap.a1)->required();
  ba->add_option("t", ap.a2)->required();
  ba->add_option("x", ap.a3, "Point entries, followed by 1 forever")->required();
  ba->callback([&] {
    run = [&] { return cmd_apply(BranchIndex(parse_seq(ap.a1), parse_seq(ap.a2)), parse_point(ap.a3), ap.out); };
  });
  auto* bf = branch->add_subcommand("find", "The branch t of s whose domain contains x");
  Args& fd = args(bf, {"text", "json"});
  bf->add_option("s", fd.a1)->required();
  bf->add_option("x", fd.a2)->required();
  bf->callback([&] { run = [&] { return cmd_find(parse_seq(fd.a1), parse_point(fd.a2), fd.out); }; });

  auto* rel = app.add_subcommand("relations", "The T graph on nodes of a given depth");
  Args& rl = args(rel, {"text", "dot", "json"});
  rl.length = 2;
  rel->add_option("--length", rl.length, "Node depth")->capture_default_str();
  rel->callback([&] { run = [&] { return cmd_relations(rl.length, rl.out); }; });

  auto* ps = app.add_subcommand("psi", "psi(s, t) and a witnessing branch");
  Args& pa = args(ps, {"text", "json"});
  ps->add_option("s", pa.a1)->required();
  ps->add_option("t", pa.a2)->required();
  ps->callback([&] { run = [&] { return cmd_psi(parse_node(pa.a1), parse_node(pa.a2), pa.out); }; });

  auto* ch = app.add_subcommand("chain", "The repetition-free T-chain between two nodes");
  Args& ca = args(ch, {"text", "json"});
  ch->add_option("s", ca.a1)->required();
  ch->add_option("t", ca.a2)->required();
  ch->callback([&] { run = [&] { return cmd_chain(parse_node(ca.a1), parse_node(ca.a2), ca.out); }; });

  auto* sg = app.add_subcommand("sigma", "The source index sigma_s(k) of h_s");
  Args& sa = args(sg, {"text", "json"});
  sg->add_option("s", sa.a1, "Positive entries, e.g. 1,2")->required();
  sg->add_option("k", sa.a2, "Decimal index")->required();
  sg->callback([&] { run = [&] { return cmd_sigma(parse_positive(sa.a1), sa.a2, sa.out); }; });

  auto* wt = app.add_subcommand("witness", "A point extending u where h_s and h_t differ");
  Args& wa = args(wt, {"text", "json"});
  wt->add_option("s", wa.a1)->required();
  wt->add_option("t", wa.a2)->required();
  wt->add_option("--prefix", wa.a3, "Bits u the point must extend, e.g. 0110");
  wt->callback([&] { run = [&] { return cmd_witness(parse_positive(wa.a1), parse_positive(wa.a2), wa.a3, wa.out); }; });

  auto* verify = app.add_subcommand("verify", "Run a verification suite and write its report");
  verify->require_subcommand(1);
  const std::vector<std::string> mutation_names{"off-by-one", "drop-non-ones", "relax-epsilon"};
  auto suite = [&](const std::string& name, const std::string& help) -> std::pair<CLI::App*, Args*> {
    auto* cmd = verify->add_subcommand(name, help);
    Args& a = args(cmd, {"json", "text"});
    cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    cmd->add_option("--mutate", a.mutate, "Inject a fault")->check(CLI::IsMember(mutation_names));
    return {cmd, &a};
  };

  auto [vd, d] = suite("departure", "Branch axioms, density and relations");
  d->depth = 3;
  d->horizon = 10000;
  d->trials = 1000;
  vd->add_option("--depth", d->depth, "Node depth for density and relations")->capture_default_str();
  vd->add_option("--horizon", d->horizon, "Branches with J(s^t) below this")->capture_default_str();
  vd->add_option("--trials", d->trials, "Sampled points per branch")->capture_default_str();
  vd->callback([&, d = d] {
    run = [&, d] {
      DepartureOptions o;
      o.depth = d->depth;
      o.horizon = d->horizon;
      o.samples = d->trials;
      o.seed = d->seed;
      o.mutation = parse_mutations(d->mutate);
      return finish_report(verify_departure(o), d->out);
    };
  });

  auto [vn, n] = suite("no-isolated", "Extensions converge to each branch image");
  n->depth = 2;
  n->horizon = 10000;
  n->trials = 20;
  vn->add_option("--depth", n->depth, "Longest s")->capture_default_str();
  vn->add_option("--horizon", n->horizon, "Largest J(s^n^t') examined")->capture_default_str();
  vn->add_option("--trials", n->trials, "Sampled points")->capture_default_str();
  vn->callback([&, n = n] {
    run = [&, n] {
      NoIsolatedOptions o;
      o.depth = n->depth;
      o.horizon = n->horizon;
      o.samples = n->trials;
      o.seed = n->seed;
      o.mutation = parse_mutations(n->mutate);
      return finish_report(verify_no_isolated(o), n->out);
    };
  });

  auto [va, a] = suite("arrival-scan", "Look for compositions fixing a point (exploratory)");
  a->depth = 3;
  a->horizon = 100;
  a->length = 2;
  va->add_option("--depth", a->depth, "Longest s")->capture_default_str();
  va->add_option("--horizon", a->horizon, "Branches with J(s^t) below this")->capture_default_str();
  va->add_option("--length", a->length, "Longest chain k")->capture_default_str();
  va->callback([&, a = a] {
    run = [&, a] {
      ArrivalOptions o;
      o.depth = a->depth;
      o.horizon = a->horizon;
      o.max_chain = a->length;
      return finish_report(verify_arrival_no_fixed_composition(o), a->out);
    };
  });

  GoodSuiteOptions good;
  auto [vg, g] = suite("good-suite", "Index maps sigma_s, convergence and disagreement witnesses");
  vg->add_option("--max-s-len", good.max_s_len, "Longest s")->capture_default_str();
  vg->add_option("--horizon", good.horizon, "Indices k below this")->capture_default_str();
  vg->add_option("--max-entry", good.max_entry, "Largest entry of s")->capture_default_str();
  vg->callback([&, g = g] { run = [&, g] { return finish_report(verify_good_sequence(good), g->out); }; });

  auto [vc, cs] = suite("cascade", "Child-distance bounds imply the separation inequality");
  cs->trials = 10000;
  vc->add_option("--trials", cs->trials, "Number of random cascades")->capture_default_str();
  vc->callback([&, cs = cs] {
    run = [&, cs] {
      CascadeOptions o;
      o.trials = cs->trials;
      o.seed = cs->seed;
      o.mutation = parse_mutations(cs->mutate);
      return finish_report(verify_cascade(o), cs->out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const std::invalid_argument& e) {  // UsageError and parse failures
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::length_error& e) {  // CapacityError
    std::cerr << "capacity: " << e.what() << "\n";
  } catch (const HorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {  // DomainError, RepresentationError
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
