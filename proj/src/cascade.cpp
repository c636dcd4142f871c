#include "hurewicz/cascade.hpp"

#include "hurewicz/verifier.hpp"

#include <algorithm>
#include <random>

namespace hurewicz {

std::string to_string(const TreeNode& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ">";
}

CascadeSample::CascadeSample(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second) throw UsageError("duplicate node " + to_string(nodes_[i]));
  }
  children_.resize(nodes_.size());
  parent_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) continue;
    const TreeNode up(nodes_[i].begin(), nodes_[i].end() - 1);
    auto it = index_.find(up);
    if (it == index_.end()) throw UsageError("node set is not prefix-closed at " + to_string(nodes_[i]));
    parent_[i] = it->second;
    children_[it->second].push_back(i);
  }
  for (auto& c : children_) {
    std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) { return nodes_[a].back() < nodes_[b].back(); });
  }
  const std::size_t n = nodes_.size();
  table_.resize(n * (n + 1) / 2);
  present_.assign(table_.size(), false);
  for (std::size_t i = 0; i < n; ++i) present_[slot(i, i)] = true;
}

std::optional<std::size_t> CascadeSample::index(const TreeNode& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CascadeSample::parent(std::size_t i) const { return parent_.at(i); }

std::size_t CascadeSample::slot(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const std::size_t n = nodes_.size();
  return a * n - a * (a - 1) / 2 + (b - a);
}

void CascadeSample::set_at(std::size_t a, std::size_t b, const mpq_class& d) {
  if (a >= size() || b >= size()) throw UsageError("node index out of range");
  if (sgn(d) < 0) throw UsageError("negative distance");
  if (a == b && sgn(d) != 0) throw UsageError("nonzero self-distance at " + to_string(nodes_[a]));
  const std::size_t k = slot(a, b);
  table_[k] = d;
  present_[k] = true;
}

void CascadeSample::set(const TreeNode& a, const TreeNode& b, const mpq_class& d) {
  const auto i = index(a), j = index(b);
  if (!i) throw UsageError("unknown node " + to_string(a));
  if (!j) throw UsageError("unknown node " + to_string(b));
  set_at(*i, *j, d);
}

const mpq_class* CascadeSample::find(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) return nullptr;
  const std::size_t k = slot(a, b);
  return present_[k] ? &table_[k] : nullptr;
}

const mpq_class& CascadeSample::d_at(std::size_t a, std::size_t b) const {
  const mpq_class* v = find(a, b);
  if (!v) {
    const std::string na = a < size() ? to_string(nodes_[a]) : "?";
    const std::string nb = b < size() ? to_string(nodes_[b]) : "?";
    throw DomainError("no distance stored for " + na + " and " + nb);
  }
  return *v;
}

const mpq_class& CascadeSample::d(const TreeNode& a, const TreeNode& b) const {
  const auto i = index(a), j = index(b);
  if (!i) throw DomainError("unknown node " + to_string(a));
  if (!j) throw DomainError("unknown node " + to_string(b));
  return d_at(*i, *j);
}

std::optional<std::array<std::size_t, 3>> CascadeSample::triangle_violation() const {
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const mpq_class* ab = find(a, b);
      if (!ab) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const mpq_class* ac = find(a, c);
        const mpq_class* cb = find(c, b);
        if (ac && cb && *ab > *ac + *cb) return std::array<std::size_t, 3>{a, b, c};
      }
    }
  }
  return std::nullopt;
}

Json CascadeSample::to_json() const {
  Json nodes = Json::array();
  for (const TreeNode& s : nodes_) nodes.push_back(to_string(s));
  Json table = Json::array();
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = a + 1; b < size(); ++b) {
      if (const mpq_class* v = find(a, b)) table.push_back(Json{to_string(nodes_[a]), to_string(nodes_[b]), v->get_str()});
    }
  }
  Json out = Json::object();
  out["nodes"] = std::move(nodes);
  out["distances"] = std::move(table);
  return out;
}

namespace {

mpq_class pow2_inv(std::uint64_t k) {
  mpq_class out = 1;
  mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), k);
  return out;
}

// epsilon for the child at index c; nullopt when an entry is missing.
std::optional<mpq_class> epsilon_at(const CascadeSample& sample, std::size_t c) {
  const auto p = sample.parent(c);
  if (!p) throw UsageError("the root has no epsilon");
  const TreeNode& sk = sample.node(c);
  const std::size_t len = sk.size() - 1;  // |s|
  mpq_class best = pow2_inv(sk.back());
  // ancestors s|0 .. s|len of the child: walk up from the parent
  std::vector<std::size_t> chain;  // chain[i] = index of s|i
  chain.resize(len + 1);
  std::size_t at = *p;
  for (std::size_t i = len + 1; i-- > 0;) {
    chain[i] = at;
    if (i) at = *sample.parent(at);
  }
  for (std::size_t i = 0; i < len; ++i) {
    const mpq_class* v = sample.find(chain[i + 1], chain[i]);
    if (!v) return std::nullopt;
    const mpq_class q = *v / 4;
    if (q < best) best = q;
  }
  std::size_t seen = 0;
  for (std::size_t sib : sample.children(*p)) {
    const std::uint32_t j = sample.node(sib).back();
    if (j >= sk.back()) break;
    ++seen;
    const mpq_class* v = sample.find(sib, *p);
    if (!v) return std::nullopt;
    const mpq_class q = *v / 4;
    if (q < best) best = q;
  }
  if (seen != sk.back()) return std::nullopt;  // some s^j, j < k, is not in the sample
  return best;
}

}  // namespace

mpq_class epsilon(const CascadeSample& sample, const TreeNode& sk) {
  if (sk.empty()) throw UsageError("the root has no epsilon");
  const auto c = sample.index(sk);
  if (!c) throw DomainError("unknown node " + to_string(sk));
  const auto e = epsilon_at(sample, *c);
  if (!e) throw DomainError("epsilon of " + to_string(sk) + " needs a missing distance or sibling");
  return *e;
}

Json ConditionViolation::to_json() const {
  Json j = Json::object();
  j["node"] = to_string(node);
  j["clause"] = clause;
  if (clause == "distinct") j["ancestor"] = to_string(other);
  j["distance"] = distance.get_str();
  if (clause == "bound") j["epsilon"] = epsilon.get_str();
  return j;
}

std::optional<ConditionViolation> find_condition_violation(const CascadeSample& sample, bool relax) {
  for (std::size_t c = 0; c < sample.size(); ++c) {
    const auto p = sample.parent(c);
    if (!p) continue;
    ConditionViolation v;
    v.node = sample.node(c);
    const auto e = epsilon_at(sample, c);
    const mpq_class* dp = sample.find(c, *p);
    if (!e || !dp) {
      v.clause = "missing";
      return v;
    }
    const bool within = relax ? *dp <= *e : *dp < *e;
    if (!within) {
      v.clause = "bound";
      v.distance = *dp;
      v.epsilon = *e;
      return v;
    }
    for (std::optional<std::size_t> a = p; a; a = sample.parent(*a)) {
      const mpq_class* da = sample.find(c, *a);
      if (!da) {
        v.clause = "missing";
        v.other = sample.node(*a);
        return v;
      }
      if (sgn(*da) == 0) {
        v.clause = "distinct";
        v.other = sample.node(*a);
        v.distance = *da;
        return v;
      }
    }
  }
  return std::nullopt;
}

bool check_cascade_conditions(const CascadeSample& sample, bool relax) {
  return !find_condition_violation(sample, relax);
}

bool check_separation(const CascadeSample& sample, const TreeNode& s, const TreeNode& t, std::size_t i) {
  if (i >= s.size() || i >= t.size()) throw UsageError("index past the end of s or t");
  if (!std::equal(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i), t.begin()))
    throw UsageError(to_string(s) + " and " + to_string(t) + " differ before " + std::to_string(i));
  if (s[i] >= t[i]) throw UsageError("need s(i) < t(i)");
  const TreeNode base(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
  const TreeNode step(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  return 3 * sample.d(s, t) >= sample.d(step, base);
}

CascadeSample gen_cascade(std::uint64_t seed, std::size_t depth, std::size_t branching, CascadePlacement placement) {
  if (depth > 6 || branching > 8) throw CapacityError("cascade depth above 6 or branching above 8");
  std::vector<TreeNode> nodes{TreeNode{}};
  for (std::size_t at = 0; at < nodes.size(); ++at) {
    if (nodes[at].size() == depth) continue;
    for (std::uint32_t k = 0; k < branching; ++k) {
      TreeNode c = nodes[at];
      c.push_back(k);
      nodes.push_back(std::move(c));
    }
  }
  CascadeSample sample(nodes);

  auto rng = seeded_rng(seed, depth * 16 + branching, placement == CascadePlacement::inside ? 7 : 8);
  std::uniform_int_distribution<int> fraction(1, 63), split(0, 16), sign(0, 1);
  std::vector<std::pair<mpq_class, mpq_class>> at(nodes.size());
  // nodes are in breadth-first order, so parents, ancestors and earlier
  // siblings are placed before each child; epsilon only reads parent edges
  for (std::size_t c = 1; c < nodes.size(); ++c) {
    const std::size_t p = *sample.parent(c);
    const mpq_class e = *epsilon_at(sample, c);
    const bool edge = placement == CascadePlacement::boundary && (sample.node(c).back() % 2 == 0 || sign(rng));
    mpq_class r = edge ? e : e * fraction(rng) / 64;
    const mpq_class w(split(rng), 16);
    mpq_class dx = r * w, dy = r - dx;
    if (sign(rng)) dx = -dx;
    if (sign(rng)) dy = -dy;
    at[c] = {at[p].first + dx, at[p].second + dy};
    sample.set_at(p, c, r);
  }

  // All coordinates are dyadic: scale them to integers over 2^shift and
  // take the pairwise distances there.
  std::size_t shift = 0;
  for (const auto& [x, y] : at) {
    for (const mpq_class* v : {&x, &y}) {
      const mpz_class& den = v->get_den();
      if (mpz_popcount(den.get_mpz_t()) != 1) throw std::logic_error("non-dyadic cascade coordinate");
      shift = std::max(shift, mpz_sizeinbase(den.get_mpz_t(), 2) - 1);
    }
  }
  std::vector<mpz_class> xs(at.size()), ys(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (auto [src, dst] : {std::pair{&at[i].first, &xs[i]}, std::pair{&at[i].second, &ys[i]}}) {
      const std::size_t own = mpz_sizeinbase(src->get_den().get_mpz_t(), 2) - 1;
      mpz_mul_2exp(dst->get_mpz_t(), src->get_num().get_mpz_t(), shift - own);
    }
  }
  mpz_class dist, t;
  mpq_class q;
  for (std::size_t c = 1; c < at.size(); ++c) {
    for (std::size_t o = 0; o < c; ++o) {
      mpz_sub(dist.get_mpz_t(), xs[o].get_mpz_t(), xs[c].get_mpz_t());
      mpz_abs(dist.get_mpz_t(), dist.get_mpz_t());
      mpz_sub(t.get_mpz_t(), ys[o].get_mpz_t(), ys[c].get_mpz_t());
      mpz_abs(t.get_mpz_t(), t.get_mpz_t());
      dist += t;
      std::size_t drop = shift;
      if (sgn(dist) != 0) drop = std::min<std::size_t>(shift, mpz_scan1(dist.get_mpz_t(), 0));
      mpz_tdiv_q_2exp(q.get_num_mpz_t(), dist.get_mpz_t(), drop);
      q.get_den() = 1;
      if (sgn(dist) != 0) mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), shift - drop);
      sample.set_at(o, c, q);
    }
  }
  return sample;
}

namespace {

struct TrialResult {
  Report report{"cascade"};
  std::size_t nodes = 0, triples = 0;
  bool conditions = false;
  mpq_class tightest = -1;  // min d(l_s, l_t) / d(l_{s|i+1}, l_{s|i}) over the triples
};

void declare_all(Report& r) {
  r.declare("generator-valid", "every generated cascade satisfies the child-distance bound and distinctness");
  r.declare("separation", "d(l_s, l_t) >= d(l_{s|i+1}, l_{s|i}) / 3 whenever s|i = t|i and s(i) < t(i)");
  r.declare("strictness", "a child at distance exactly epsilon from its parent is rejected");
}

// every node of the subtree rooted at i, including i
void subtree(const CascadeSample& sample, std::size_t i, std::vector<std::size_t>& out) {
  out.push_back(i);
  for (std::size_t c : sample.children(i)) subtree(sample, c, out);
}

TrialResult run_trial(std::uint64_t seed, bool relax) {
  TrialResult out;
  declare_all(out.report);
  Report& r = out.report;
  const std::size_t depth = seed % 5, branching = 1 + (seed / 5) % 4;
  const CascadeSample sample = gen_cascade(seed, depth, branching);
  out.nodes = sample.size();
  const auto bad = find_condition_violation(sample, relax);
  out.conditions = !bad;
  r.expect("generator-valid", !bad, [&] {
    Json j = bad->to_json();
    j["seed"] = seed;
    return j;
  });
  if (bad) return out;

  // triples (s, t, i): u = s|i, s below the child u^a, t below u^b, a < b
  std::size_t passed = 0;
  std::vector<std::size_t> left, right;
  for (std::size_t u = 0; u < sample.size(); ++u) {
    const auto& kids = sample.children(u);
    for (std::size_t a = 0; a < kids.size(); ++a) {
      left.clear();
      subtree(sample, kids[a], left);
      const mpq_class& gap = sample.d_at(kids[a], u);
      const mpq_class third = gap / 3;
      const mpq_class* closest = nullptr;
      for (std::size_t b = a + 1; b < kids.size(); ++b) {
        right.clear();
        subtree(sample, kids[b], right);
        for (std::size_t s : left) {
          for (std::size_t t : right) {
            const mpq_class& dst = sample.d_at(s, t);
            ++out.triples;
            if (dst >= third) {
              ++passed;
              if (!closest || dst < *closest) closest = &dst;
              continue;
            }
            r.fail("separation", Json{{"seed", seed},
                                      {"s", to_string(sample.node(s))},
                                      {"t", to_string(sample.node(t))},
                                      {"i", sample.node(u).size()},
                                      {"d_st", dst.get_str()},
                                      {"gap", gap.get_str()}});
          }
        }
      }
      if (closest) {
        const mpq_class ratio = *closest / gap;
        if (out.tightest < 0 || ratio < out.tightest) out.tightest = ratio;
      }
    }
  }
  r.pass("separation", passed);
  return out;
}

}  // namespace

Report verify_cascade(const CascadeOptions& o) {
  if (o.trials > 1'000'000) throw CapacityError("more than 10^6 cascade trials");
  Report r("cascade");
  r.params()["trials"] = o.trials;
  r.params()["seed"] = o.seed;
  r.params()["probes"] = o.probes;
  r.params()["mutation"] = mutation_json(o.mutation);
  declare_all(r);
  const bool relax = o.mutation.relax_epsilon;

  std::vector<TrialResult> results(o.trials);
  parallel_for(o.trials, [&](std::size_t n) { results[n] = run_trial(o.seed + n, relax); });
  std::size_t nodes = 0, triples = 0, valid = 0;
  mpq_class tightest = -1;
  for (const TrialResult& t : results) {
    r.merge(t.report);
    nodes += t.nodes;
    triples += t.triples;
    valid += t.conditions;
    if (t.tightest >= 0 && (tightest < 0 || t.tightest < tightest)) tightest = t.tightest;
  }

  // boundary cascades must be rejected by the strict bound
  std::size_t probed = 0;
  for (std::size_t p = 0; p < o.probes; ++p) {
    const std::uint64_t seed = o.seed + p;
    const CascadeSample sample = gen_cascade(seed, 1 + p % 4, 1 + (p / 4) % 4, CascadePlacement::boundary);
    const auto strict = find_condition_violation(sample, false);
    if (!strict || strict->clause != "bound") throw std::logic_error("boundary cascade without a boundary child");
    ++probed;
    r.expect("strictness", !check_cascade_conditions(sample, relax), [&] {
      Json j = strict->to_json();
      j["seed"] = seed;
      j["depth"] = 1 + p % 4;
      j["branching"] = 1 + (p / 4) % 4;
      return j;
    });
  }

  r.findings()["cascades"] = o.trials;
  r.findings()["cascades_meeting_conditions"] = valid;
  r.findings()["nodes"] = nodes;
  r.findings()["triples"] = triples;
  r.findings()["tightest_ratio"] = tightest < 0 ? Json(nullptr) : Json(tightest.get_str());
  r.findings()["boundary_probes"] = probed;
  return r;
}

}  // namespace hurewicz
