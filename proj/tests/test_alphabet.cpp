#include "hurewicz/alphabet.hpp"
#include "hurewicz/prime_coding.hpp"

#include "doctest.h"

#include <chrono>
#include <set>

using namespace hurewicz;

TEST_CASE("first two alphabets") {
  auto a = alphabets(2);
  REQUIRE(a.size() == 2);
  CHECK(a[0]->members == seq({1, 4}));
  CHECK(a[1]->members == seq({1, 36, 288}));
  CHECK(alphabets(0).empty());
  CHECK_THROWS_AS(alphabets(6), CapacityError);
}

TEST_CASE("alphabet sizes follow 1 + product of earlier sizes") {
  const auto start = std::chrono::steady_clock::now();
  auto a = alphabets(5);
  std::size_t product = 1;
  const std::size_t expected[] = {2, 3, 7, 43, 1807};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a[i]->size() == 1 + product);
    CHECK(a[i]->size() == expected[i]);
    product *= a[i]->size();
  }
  MESSAGE("alphabets(5) built in "
          << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s");
}

TEST_CASE("non-1 members decode to u^1 over a valid node") {
  auto a = alphabets(5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a[i]->members.front() == Natural(1));
    for (const Natural& m : a[i]->members) {
      if (m.is_one()) continue;
      auto u = decode(m);
      REQUIRE(u);
      REQUIRE(u->size() == i + 1);
      CHECK(u->back() == Natural(1));
      for (std::size_t k = 0; k < i; ++k) CHECK(a[k]->contains((*u)[k]));
    }
  }
}

TEST_CASE("structural membership agrees with the built alphabets") {
  auto a = alphabets(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (const Natural& m : a[i]->members) {
      CHECK(is_member(i, m));
      if (i + 1 < 4 && !m.is_one()) CHECK_FALSE(is_member(i + 1, m));
    }
  }
  // Codes of the right shape but with a bad entry, or without the final 1.
  CHECK_FALSE(is_member(1, encode(seq({2, 1}))));
  CHECK_FALSE(is_member(1, encode(seq({4, 0}))));
  CHECK_FALSE(is_member(0, Natural(2)));
  CHECK_FALSE(is_member(0, Natural(0)));
  CHECK_FALSE(is_member(0, Natural(10)));
  // Exhaustive small check at level 1: values below 1000.
  std::size_t count = 0;
  for (std::uint64_t v = 0; v < 1000; ++v) count += is_member(1, Natural(v));
  CHECK(count == 3);
}

TEST_CASE("membership at large levels through shared prefixes") {
  // x = 1^n, then J(x|q ^ 1) lies in A_q for every q.
  PointPrefix ones = PointPrefix::ones().extended(5000);
  CHECK(is_member(4999, ones.code_prefix_one(4999)));
  CHECK(is_member(3000, ones.code_prefix_one(3000)));
  CHECK_FALSE(is_member(3001, ones.code_prefix_one(3000)));
  // A point whose coordinate 7 is not in A_7 poisons every longer prefix.
  FiniteSeq bad = ones.take(5000);
  bad[7] = Natural(5);
  PointPrefix x(bad, true);
  CHECK(is_member(7, x.code_prefix_one(7)));
  CHECK_FALSE(is_member(8, x.code_prefix_one(8)));
  CHECK_FALSE(is_member(4000, x.code_prefix_one(4000)));
  // Nested: coordinate q of y is J(x'|q ^ 1) for a valid x'.
  FiniteSeq y = ones.take(200);
  for (std::size_t q = 0; q < 200; q += 3) y[q] = ones.code_prefix_one(q);
  PointPrefix py(y, true);
  CHECK(is_member(199, py.code_prefix_one(199)));
  CHECK(is_member(350, py.code_prefix_one(350)));
}

TEST_CASE("enumerate_nodes counts and order") {
  auto n0 = enumerate_nodes(0);
  REQUIRE(n0.size() == 1);
  CHECK(n0[0].empty());
  CHECK(enumerate_nodes(1).size() == 2);
  CHECK(enumerate_nodes(2).size() == 6);
  CHECK(enumerate_nodes(3).size() == 42);
  auto n4 = enumerate_nodes(4);
  CHECK(n4.size() == 1806);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < n4.size(); ++i) {
    CHECK(seen.insert(to_string(n4[i])).second);
    if (i > 0) CHECK(lex_compare(n4[i - 1], n4[i]) < 0);
  }
  CHECK_THROWS_AS(enumerate_nodes(5), CapacityError);
  CHECK_THROWS_AS(enumerate_nodes(6), CapacityError);
}

TEST_CASE("lex_compare") {
  CHECK(lex_compare(seq({1, 1, 1}), seq({1, 1, 1})) == 0);
  CHECK(lex_compare(seq({1, 1, 1}), seq({1, 1, 900})) < 0);
  CHECK(lex_compare(seq({4, 1, 1}), seq({1, 288, 1})) > 0);
  CHECK_THROWS_AS((void)lex_compare(seq({1}), seq({1, 1})), UsageError);
}

TEST_CASE("first_disagreement") {
  const PointPrefix a(seq({1, 1, 1}), true);
  const PointPrefix b(seq({1, 1, 900}), true);
  auto same = first_disagreement(a, a);
  CHECK(same.kind == Disagreement::Kind::equal);
  auto d = first_disagreement(a, b);
  CHECK(d.kind == Disagreement::Kind::differ);
  CHECK(d.index == 2);
  auto bare = first_disagreement(PointPrefix(seq({1, 1, 1}), false), PointPrefix(seq({1, 1, 1}), false));
  CHECK(bare.kind == Disagreement::Kind::unknown);
  CHECK(bare.index == 3);
  // The tail convention makes (1,1,1)+1^w and 1^w the same point.
  CHECK(first_disagreement(a, PointPrefix::ones()).kind == Disagreement::Kind::equal);
  auto late = first_disagreement(PointPrefix(seq({1, 1, 1, 4}), true), PointPrefix::ones());
  CHECK(late.kind == Disagreement::Kind::differ);
  CHECK(late.index == 3);
}

TEST_CASE("point prefixes") {
  const PointPrefix x = PointPrefix::ones();
  CHECK(x.code_prefix_one(2) == Natural(900));
  CHECK(x.code_prefix_one(0) == Natural(4));
  const PointPrefix bare(seq({1}), false);
  CHECK(bare.get(1) == nullptr);
  CHECK_THROWS_AS(bare.code_prefix_one(2), HorizonError);
  CHECK(bare.code_prefix_one(1) == Natural(36));
  CHECK(x.to_string() == "()+1^w");
}
