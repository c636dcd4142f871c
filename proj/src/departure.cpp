#include "hurewicz/departure.hpp"

#include "hurewicz/prime_coding.hpp"

#include <algorithm>
#include <functional>

namespace hurewicz {

namespace {

constexpr std::uint64_t kRankBound = std::uint64_t{1} << 62;

FiniteSeq concat(const FiniteSeq& a, std::size_t na, const FiniteSeq& b, std::size_t nb) {
  FiniteSeq out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(na));
  out.insert(out.end(), b.begin(), b.begin() + static_cast<std::ptrdiff_t>(nb));
  return out;
}

struct DomainCheck {
  Verdict verdict = Verdict::yes;
  std::size_t required = 0;
};

std::size_t required_for(const Natural& index) {
  auto v = index.small();
  return v && *v < SIZE_MAX ? static_cast<std::size_t>(*v) + 1 : SIZE_MAX;
}

DomainCheck check_domain(const PointPrefix& x, const CylinderConstraint& c) {
  DomainCheck out;
  auto note_unknown = [&](const Natural& q) {
    if (out.verdict == Verdict::yes) {
      out.verdict = Verdict::unknown;
      out.required = required_for(q);
    } else {
      out.required = std::max(out.required, required_for(q));
    }
  };
  for (const Natural& q : c.ones) {
    const Natural* v = x.get(q);
    if (!v) {
      note_unknown(q);
    } else if (!v->is_one()) {
      return {Verdict::no, 0};
    }
  }
  for (const Natural& q : c.non_ones) {
    const Natural* v = x.get(q);
    if (!v) {
      note_unknown(q);
    } else if (v->is_one()) {
      return {Verdict::no, 0};
    }
  }
  return out;
}

// Points can be huge once rendered; errors only name their size.
std::string label(const PointPrefix& x) {
  return "point with " + std::to_string(x.length()) + " explicit coordinates" + (x.tail_ones() ? " and a 1-tail" : "");
}

std::size_t as_coordinate(const Natural& q, const Limits& limits) {
  auto v = q.small();
  if (!v || *v >= limits.max_horizon) {
    throw CapacityError("coordinate " + (v ? std::to_string(*v) : q.to_string()) + " is beyond the horizon cap " +
                        std::to_string(limits.max_horizon));
  }
  return static_cast<std::size_t>(*v);
}

// Every J-code below bound (optionally of one fixed length), unsorted.
void collect_codes(std::uint64_t bound, std::optional<std::size_t> length,
                   const std::function<void(std::uint64_t, const std::vector<std::uint64_t>&)>& visit) {
  if (bound == 0) return;
  if (!length || *length == 0) {
    visit(0, {});
    if (length) return;
  }
  std::vector<std::uint64_t> exps;
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t product) {
    const std::uint64_t q = nth_prime(i);
    std::uint64_t value = product;
    for (std::uint64_t k = 0;; ++k) {
      if (value > (bound - 1) / q) return;
      value *= q;  // q^(k+1)
      exps.push_back(k);
      if (!length || exps.size() == *length) visit(value, exps);
      if (!length || exps.size() < *length) rec(i + 1, value);
      exps.pop_back();
    }
  };
  rec(0, 1);
}

FiniteSeq from_exps(const std::vector<std::uint64_t>& exps) {
  FiniteSeq out;
  for (auto v : exps) out.emplace_back(v);
  return out;
}

// The n-th entry (by code) among codes of the given length restriction.
FiniteSeq nth_by_code(std::uint64_t n, std::optional<std::size_t> length) {
  std::uint64_t bound = 64;
  while (true) {
    std::vector<std::pair<std::uint64_t, FiniteSeq>> found;
    collect_codes(bound, length, [&](std::uint64_t c, const std::vector<std::uint64_t>& exps) {
      found.emplace_back(c, from_exps(exps));
    });
    if (found.size() > n) {
      std::nth_element(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(n), found.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      return found[n].second;
    }
    if (bound >= kRankBound) throw CapacityError("enumeration index " + std::to_string(n) + " is out of range");
    bound = std::min(kRankBound, bound * 4);
  }
}

std::uint64_t code_u64(const FiniteSeq& s) {
  Natural c = encode(s);
  auto v = c.small();
  if (!v || *v >= kRankBound) throw CapacityError("J-code of " + to_string(s) + " is too large to rank");
  return *v;
}

}  // namespace

BranchIndex::BranchIndex(FiniteSeq s_, FiniteSeq t_) : s(std::move(s_)), t(std::move(t_)) {
  if (t.size() != s.size() + 1) {
    throw UsageError("branch index needs |t| = |s|+1, got |s|=" + std::to_string(s.size()) +
                     " and |t|=" + std::to_string(t.size()));
  }
}

std::string BranchIndex::to_string() const { return "(" + hurewicz::to_string(s) + "," + hurewicz::to_string(t) + ")"; }

CylinderConstraint constraints(const BranchIndex& b, const Mutation& mut) {
  CylinderConstraint c;
  for (std::size_t j = 0; j <= b.s.size(); ++j) {
    c.ones.push_back(encode(concat(b.s, j, b.t, j + 1)));
    if (mut.drop_non_ones) continue;
    auto tj = b.t[j].small();
    if (!tj || *tj > Limits{}.max_horizon) {
      throw CapacityError("branch entry t(" + std::to_string(j) + ") = " + b.t[j].to_string() + " is too large");
    }
    FiniteSeq stem = concat(b.s, j, b.t, j);
    stem.emplace_back(std::uint64_t{0});
    for (std::uint64_t p = 0; p < *tj; ++p) {
      stem.back() = Natural(p);
      c.non_ones.push_back(encode(stem));
    }
  }
  return c;
}

Natural max_modified(const BranchIndex& b) { return encode(concat(b.s, b.s.size(), b.t, b.t.size())); }

Verdict in_domain(const PointPrefix& x, const BranchIndex& b, const Mutation& mut) {
  return check_domain(x, constraints(b, mut)).verdict;
}

Verdict in_domain(const PointPrefix& x, const CylinderConstraint& c) { return check_domain(x, c).verdict; }

PointPrefix apply(const BranchIndex& b, const PointPrefix& x, const Mutation& mut) {
  const CylinderConstraint c = constraints(b, mut);
  const DomainCheck dc = check_domain(x, c);
  if (dc.verdict == Verdict::no) throw DomainError(label(x) + " is outside the domain of " + b.to_string());
  if (dc.verdict == Verdict::unknown) {
    throw HorizonError(label(x) + " does not decide the domain of " + b.to_string(), dc.required);
  }
  const Limits limits;
  const std::size_t top = as_coordinate(c.ones.back(), limits);
  FiniteSeq y = x.take(std::max(x.length(), top + 1));
  const Natural last(mut.rewrite_off_by_one ? 0 : 1);
  for (const Natural& q : c.ones) {
    const std::size_t k = as_coordinate(q, limits);
    y[k] = x.code_prefix_then(k, last);
  }
  return PointPrefix(std::move(y), x.tail_ones());
}

PointPrefix inverse(const BranchIndex& b, const PointPrefix& y) {
  const CylinderConstraint c = constraints(b);
  const Limits limits;
  const std::size_t top = as_coordinate(c.ones.back(), limits);
  if (!y.readable(top)) throw HorizonError(label(y) + " is too short to invert " + b.to_string(), top + 1);
  FiniteSeq x = y.take(std::max(y.length(), top + 1));
  for (const Natural& q : c.ones) x[as_coordinate(q, limits)] = Natural(1);
  PointPrefix px(std::move(x), y.tail_ones());
  for (const Natural& q : c.ones) {
    const std::size_t k = as_coordinate(q, limits);
    if (!(*y.get(k) == px.code_prefix_one(k))) {
      throw DomainError(label(y) + " is not in the image of " + b.to_string() + " (coordinate " +
                        std::to_string(k) + ")");
    }
  }
  const DomainCheck dc = check_domain(px, c);
  if (dc.verdict == Verdict::no) throw DomainError(label(y) + " is not in the image of " + b.to_string());
  if (dc.verdict == Verdict::unknown) {
    throw HorizonError(label(y) + " does not decide the image of " + b.to_string(), dc.required);
  }
  return px;
}

BranchSearch find_branch(const FiniteSeq& s, const PointPrefix& x) {
  BranchSearch out;
  FiniteSeq t;
  for (std::size_t j = 0; j <= s.size(); ++j) {
    FiniteSeq stem = concat(s, j, t, j);
    stem.emplace_back(std::uint64_t{0});
    for (std::uint64_t p = 0;; ++p) {
      stem.back() = Natural(p);
      const Natural q = encode(stem);
      const Natural* v = x.get(q);
      if (!v) {
        out.required = required_for(q);
        return out;
      }
      if (v->is_one()) {
        t.emplace_back(p);
        break;
      }
    }
  }
  out.verdict = Verdict::yes;
  out.t = std::move(t);
  return out;
}

std::uint64_t count_codes_below(std::uint64_t bound, std::optional<std::size_t> length) {
  std::uint64_t n = 0;
  collect_codes(bound, length, [&](std::uint64_t, const std::vector<std::uint64_t>&) { ++n; });
  return n;
}

FiniteSeq e(std::uint64_t n) { return nth_by_code(n, std::nullopt); }

std::uint64_t e_inv(const FiniteSeq& s) { return count_codes_below(code_u64(s)); }

BranchIndex psi_branch(std::uint64_t n, std::uint64_t p) {
  FiniteSeq s = e(n);
  const std::size_t len = s.size() + 1;
  return BranchIndex(std::move(s), nth_by_code(p, len));
}

std::pair<std::uint64_t, std::uint64_t> psi_branch_inv(const BranchIndex& b) {
  return {e_inv(b.s), count_codes_below(code_u64(b.t), b.t.size())};
}

GluedResult apply_fn(std::uint64_t n, const PointPrefix& x, const Mutation& mut) {
  GluedResult out;
  FiniteSeq s = e(n);
  BranchSearch found = find_branch(s, x);
  if (found.verdict != Verdict::yes) {
    out.verdict = found.verdict;
    out.required = found.required;
    return out;
  }
  BranchIndex b(std::move(s), std::move(found.t));
  out.image = apply(b, x, mut);
  out.branch = std::move(b);
  out.verdict = Verdict::yes;
  return out;
}

std::vector<BranchIndex> branches_below(std::uint64_t bound) {
  std::vector<std::pair<std::uint64_t, BranchIndex>> found;
  collect_codes(bound, std::nullopt, [&](std::uint64_t c, const std::vector<std::uint64_t>& exps) {
    if (exps.size() % 2 == 0) return;
    const std::size_t n = exps.size() / 2;
    FiniteSeq s, t;
    for (std::size_t i = 0; i < exps.size(); ++i) (i < n ? s : t).emplace_back(exps[i]);
    found.emplace_back(c, BranchIndex(std::move(s), std::move(t)));
  });
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<BranchIndex> out;
  out.reserve(found.size());
  for (auto& [c, b] : found) out.push_back(std::move(b));
  return out;
}

}  // namespace hurewicz
