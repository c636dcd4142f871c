#include "hurewicz/alphabet.hpp"

#include "detail.hpp"
#include "hurewicz/prime_coding.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>

namespace hurewicz {

namespace {

class AlphabetCache {
 public:
  const Alphabet& level(std::size_t i) {
    std::lock_guard lock(mutex_);
    while (built_.size() <= i) build_next();
    return built_[i];
  }

 private:
  void build_next() {
    const std::size_t i = built_.size();
    Alphabet a;
    a.level = i;
    a.members.emplace_back(1);
    // Odometer over A_0 x ... x A_{i-1}.
    std::vector<std::size_t> digit(i, 0);
    while (true) {
      FiniteSeq u;
      u.reserve(i + 1);
      for (std::size_t k = 0; k < i; ++k) u.push_back(built_[k].members[digit[k]]);
      u.emplace_back(1);
      a.members.push_back(encode(u));
      std::size_t k = i;
      while (k > 0 && ++digit[k - 1] == built_[k - 1].members.size()) digit[--k] = 0;
      if (k == 0) break;
    }
    std::sort(a.members.begin(), a.members.end());
    for (std::size_t k = 0; k < a.members.size(); ++k) a.index.emplace(a.members[k], k);
    built_.push_back(std::move(a));
  }

  std::mutex mutex_;
  std::deque<Alphabet> built_;
};

AlphabetCache& cache() {
  static AlphabetCache c;
  return c;
}

// Memo for the structural membership test. Exact values determine their
// own level (decode length minus one), so one flag per value suffices;
// shared bases remember how far they have been checked.
class MembershipMemo {
 public:
  bool member(std::size_t level, const Natural& v) {
    std::lock_guard lock(mutex_);
    return check(level, v);
  }

 private:
  struct BaseState {
    std::weak_ptr<const FiniteSeq> keep;
    std::size_t verified = 0;
    std::size_t first_bad = SIZE_MAX;
  };

  bool check(std::size_t level, const Natural& v) {
    if (v.is_one()) return true;
    if (v.is_zero()) return false;
    if (v.is_exact()) {
      auto it = exact_.find(v);
      if (it == exact_.end()) {
        long found = -1;
        if (auto u = detail::decode_exact(v.exact()); u && u->back().is_one()) {
          bool ok = true;
          for (std::size_t k = 0; ok && k + 1 < u->size(); ++k) ok = check(k, (*u)[k]);
          if (ok) found = static_cast<long>(u->size()) - 1;
        }
        it = exact_.emplace(v, found).first;
      }
      return it->second == static_cast<long>(level);
    }
    if (v.form_size() != level + 1 || !v.form_at(level).is_one()) return false;
    const std::size_t prefix = std::min(v.form_prefix(), level);
    if (prefix > 0 && !prefix_ok(v.form_base(), prefix)) return false;
    for (std::size_t k = prefix; k < level; ++k) {
      if (!check(k, v.form_at(k))) return false;
    }
    return true;
  }

  bool prefix_ok(const SharedSeq& base, std::size_t n) {
    // References into an unordered_map survive the inserts made by check().
    if (bases_.size() >= sweep_at_) {
      std::erase_if(bases_, [](const auto& kv) { return kv.second.keep.expired(); });
      sweep_at_ = std::max<std::size_t>(1024, 2 * bases_.size());
    }
    BaseState& st = bases_[base.get()];
    if (st.keep.owner_before(base) || base.owner_before(st.keep) || st.keep.expired()) {
      // a fresh sequence, possibly at the address of a released one
      st = BaseState{base};
    }
    while (st.verified < n && st.first_bad == SIZE_MAX) {
      if (check(st.verified, (*base)[st.verified])) {
        ++st.verified;
      } else {
        st.first_bad = st.verified;
      }
    }
    return n <= st.first_bad;
  }

  std::recursive_mutex mutex_;
  std::unordered_map<Natural, long, NaturalHash> exact_;
  std::unordered_map<const FiniteSeq*, BaseState> bases_;
  std::size_t sweep_at_ = 1024;
};

MembershipMemo& memo() {
  static MembershipMemo m;
  return m;
}

const Natural& one() {
  static const Natural v(1);
  return v;
}

}  // namespace

std::vector<const Alphabet*> alphabets(std::size_t depth, const Limits& limits) {
  if (depth > limits.max_depth) {
    throw CapacityError("alphabet depth " + std::to_string(depth) + " exceeds the cap " +
                        std::to_string(limits.max_depth));
  }
  std::vector<const Alphabet*> out;
  for (std::size_t i = 0; i < depth; ++i) out.push_back(&cache().level(i));
  return out;
}

std::vector<Node> enumerate_nodes(std::size_t p, const Limits& limits) {
  const auto alpha = alphabets(p, limits);
  std::size_t count = 1;
  for (const Alphabet* a : alpha) {
    if (count > limits.max_nodes / a->size()) {
      throw CapacityError("depth-" + std::to_string(p) + " node set exceeds the cap of " +
                          std::to_string(limits.max_nodes) + " nodes");
    }
    count *= a->size();
  }
  std::vector<Node> out;
  out.reserve(count);
  std::vector<std::size_t> digit(p, 0);
  while (true) {
    Node n;
    n.reserve(p);
    for (std::size_t k = 0; k < p; ++k) n.push_back(alpha[k]->members[digit[k]]);
    out.push_back(std::move(n));
    std::size_t k = p;
    while (k > 0 && ++digit[k - 1] == alpha[k - 1]->size()) digit[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::strong_ordering lex_compare(const Node& x, const Node& y) {
  if (x.size() != y.size()) {
    throw UsageError("lex_compare: lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                     " differ");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == y[i]) continue;
    return x[i] <=> y[i];
  }
  return std::strong_ordering::equal;
}

bool is_member(std::size_t level, const Natural& v) { return memo().member(level, v); }

const Natural* PointPrefix::get(std::size_t i) const {
  if (i < length()) return &(*entries_)[i];
  return tail_ones_ ? &one() : nullptr;
}

const Natural* PointPrefix::get(const Natural& i) const {
  if (auto v = i.small(); v && *v < length()) return &(*entries_)[*v];
  return tail_ones_ ? &one() : nullptr;
}

Natural PointPrefix::code_prefix_then(std::size_t q, const Natural& last) const {
  if (q <= length()) return encode_prefix(entries_, q, FiniteSeq{last});
  if (!tail_ones_) throw HorizonError("prefix too short to encode x|" + std::to_string(q), q);
  FiniteSeq suffix(q - length(), Natural(1));
  suffix.push_back(last);
  return encode_prefix(entries_, length(), std::move(suffix));
}

FiniteSeq PointPrefix::take(std::size_t n) const {
  if (n > length() && !tail_ones_) throw HorizonError("prefix too short", n);
  FiniteSeq out(entries_->begin(), entries_->begin() + static_cast<std::ptrdiff_t>(std::min(n, length())));
  out.resize(n, Natural(1));
  return out;
}

PointPrefix PointPrefix::extended(std::size_t n) const {
  if (n <= length()) return *this;
  if (!tail_ones_) throw HorizonError("cannot extend a bare prefix", n);
  return PointPrefix(take(n), true);
}

std::string PointPrefix::to_string() const {
  std::string out = hurewicz::to_string(*entries_);
  if (tail_ones_) out += "+1^w";
  return out;
}

Disagreement first_disagreement(const PointPrefix& x, const PointPrefix& y) {
  const std::size_t n = std::max(x.length(), y.length());
  std::size_t start = 0;
  if (x.entries() == y.entries()) start = x.length();
  for (std::size_t i = start; i < n; ++i) {
    const Natural* a = x.get(i);
    const Natural* b = y.get(i);
    if (!a || !b) return {Disagreement::Kind::unknown, i};
    if (!(*a == *b)) return {Disagreement::Kind::differ, i};
  }
  if (x.tail_ones() && y.tail_ones()) return {Disagreement::Kind::equal, 0};
  return {Disagreement::Kind::unknown, n};
}

}  // namespace hurewicz
