// Copyright 2026 The ptcert authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "ptcert/group.hpp"
#include "support.hpp"

using namespace ptcert;
using namespace ptcert::testing;

TEST_CASE("cyclic table multiplication and inverses") {
  const auto z3 = Group::make(make_cyclic_spec(3));
  const GroupElement s = z3->element_from_string("s1");
  const GroupElement s2 = z3->element_from_string("s2");
  CHECK(z3->multiply(s, s2) == z3->identity());
  CHECK(z3->inverse(s) == s2);
  CHECK(z3->multiply(s, s) == s2);
  CHECK(z3->inverse(z3->inverse(s)) == s);
}

TEST_CASE("free reduction") {
  const auto f2 = Group::make(make_free_spec(2));
  const GroupElement ab = f2->element_from_string("a*b");
  const GroupElement b1a = f2->element_from_string("b^-1*a");
  CHECK(f2->element_string(f2->multiply(ab, b1a)) == "a*a");
  CHECK(f2->multiply(ab, f2->inverse(ab)) == f2->identity());
  CHECK(f2->element_from_string("a*a^-1") == f2->identity());
}

TEST_CASE("integer matrix products grow exactly") {
  const auto sl2 = Group::make(make_sl2_spec());
  const GroupElement u = sl2->element_from_string("[[\"1\",\"1\"],[\"0\",\"1\"]]");
  const GroupElement u2 = sl2->multiply(u, u);
  CHECK(sl2->element_string(u2) == "[[\"1\",\"2\"],[\"0\",\"1\"]]");
  CHECK(sl2->multiply(u2, sl2->inverse(u2)) == sl2->identity());

  // Entries keep growing without overflow.
  GroupElement power = u;
  for (int i = 0; i < 70; ++i) power = sl2->multiply(power, power);
  CHECK(power.data[1] == (Int(1) << 70));
}

TEST_CASE("permutation family composes and inverts") {
  const auto s3 = Group::make(make_s3_perm_spec());
  const GroupElement t = s3->element_from_string("[1,0,2]");
  const GroupElement c = s3->element_from_string("[1,2,0]");
  CHECK(s3->multiply(t, t) == s3->identity());
  CHECK(s3->multiply(c, s3->multiply(c, c)) == s3->identity());
  CHECK(s3->inverse(c) == s3->multiply(c, c));
}

TEST_CASE("word length") {
  const auto z3 = Group::make(make_cyclic_spec(3));
  CHECK(word_length(*z3, z3->generators(), z3->identity(), 5) == 0);
  CHECK(word_length(*z3, z3->generators(), z3->element_from_string("s2"), 5) == 1);

  const auto f2 = Group::make(make_free_spec(2));
  CHECK(word_length(*f2, f2->generators(), f2->element_from_string("a*b*a*b"), 6) == 4);

  // s2 alone generates only the even part of Z/4.
  const auto z4 = Group::make(make_cyclic_spec(4));
  const std::vector<GroupElement> evens{z4->element_from_string("s2")};
  CHECK(word_length(*z4, evens, z4->element_from_string("s2"), 8) == 1);
  CHECK_THROWS_AS(word_length(*z4, evens, z4->element_from_string("s1"), 8),
                  NotReachableError);
}

TEST_CASE("ball enumeration sizes") {
  const auto z3 = Group::make(make_cyclic_spec(3));
  CHECK(enumerate_ball(*z3, z3->generators(), 1).size() == 3);

  const auto z2 = Group::make(make_cyclic_spec(2));
  CHECK(enumerate_ball(*z2, z2->generators(), 1).size() == 2);

  // Independent oracle: all freely reduced words of length <= 2.
  const auto f2 = Group::make(make_free_spec(2));
  std::set<std::string> brute;
  const std::vector<GroupElement> gens = f2->generators();
  brute.insert(f2->element_string(f2->identity()));
  for (const auto& a : gens) {
    brute.insert(f2->element_string(a));
    for (const auto& b : gens) brute.insert(f2->element_string(f2->multiply(a, b)));
  }
  CHECK(brute.size() == 17);

  const Ball ball2 = enumerate_ball(*f2, gens, 2);
  CHECK(ball2.size() == 17);
  std::set<std::string> enumerated;
  for (const auto& g : ball2.elements) enumerated.insert(f2->element_string(g));
  CHECK(enumerated == brute);
}

TEST_CASE("ball ordering is deterministic and nested") {
  const auto f2 = Group::make(make_free_spec(2));
  const Ball b2 = enumerate_ball(*f2, f2->generators(), 2);
  const Ball b3 = enumerate_ball(*f2, f2->generators(), 3);
  REQUIRE(b3.size() > b2.size());
  for (long i = 0; i < b2.size(); ++i) {
    CHECK(b2.elements[i] == b3.elements[i]);
  }
  CHECK(b2.elements[0] == f2->identity());
  for (long i = 1; i < b2.size(); ++i) {
    CHECK(b2.lengths[i - 1] <= b2.lengths[i]);
    if (b2.lengths[i - 1] == b2.lengths[i]) {
      CHECK(compare_elements(b2.elements[i - 1], b2.elements[i]) < 0);
    }
  }
  const Ball again = enumerate_ball(*f2, f2->generators(), 2);
  CHECK(ball_ordering_digest(*f2, again) == ball_ordering_digest(*f2, b2));
}

TEST_CASE("finite balls saturate and stay constant") {
  const auto z3 = Group::make(make_cyclic_spec(3));
  const Ball b5 = enumerate_ball(*z3, z3->generators(), 5);
  CHECK(b5.size() == 3);
  CHECK(b5.saturated);
  const Ball b9 = enumerate_ball(*z3, z3->generators(), 9);
  CHECK(b9.elements == b5.elements);
}

TEST_CASE("balls are inverse closed") {
  for (const auto& spec : {make_free_spec(2), make_s3_table_spec()}) {
    const auto group = Group::make(spec);
    const Ball ball = enumerate_ball(*group, group->generators(), 2);
    for (const auto& g : ball.elements) {
      CHECK(ball.find(group->inverse(g)) >= 0);
    }
  }
}

TEST_CASE("associativity spot check on small balls") {
  for (const auto& spec : {make_free_spec(2), make_s3_table_spec(), make_sl2_spec()}) {
    const auto group = Group::make(spec);
    const Ball ball = enumerate_ball(*group, group->generators(), 1);
    for (const auto& a : ball.elements) {
      for (const auto& b : ball.elements) {
        for (const auto& c : ball.elements) {
          CHECK(group->multiply(group->multiply(a, b), c) ==
                group->multiply(a, group->multiply(b, c)));
        }
      }
    }
  }
}

TEST_CASE("pair table partitions index pairs and lands in the double ball") {
  const auto f2 = Group::make(make_free_spec(2));
  const Ball ball = enumerate_ball(*f2, f2->generators(), 1);
  REQUIRE(ball.pairs.has_value());
  const PairTable& pt = *ball.pairs;

  // Every product is in the radius-2 ball, and they jointly cover it.
  const Ball twice = enumerate_ball(*f2, f2->generators(), 2,
                                    {.build_pair_table = false});
  CHECK(pt.products.size() == 17);
  for (const auto& p : pt.products) CHECK(twice.find(p) >= 0);

  std::vector<long> pair_count(pt.products.size(), 0);
  for (long i = 0; i < ball.size(); ++i) {
    for (long j = 0; j < ball.size(); ++j) {
      const long id = pt.pair_product(i, j);
      CHECK(pt.products[id] ==
            f2->multiply(f2->inverse(ball.elements[i]), ball.elements[j]));
      ++pair_count[id];
    }
  }
  long total = 0;
  for (long c : pair_count) {
    CHECK(c > 0);
    total += c;
  }
  CHECK(total == ball.size() * ball.size());
}

TEST_CASE("ball cap raises a resource error naming the cap") {
  const auto f2 = Group::make(make_free_spec(2));
  CHECK_THROWS_WITH_AS(enumerate_ball(*f2, f2->generators(), 4, {.max_elements = 10}),
                       doctest::Contains("10"), ResourceError);
}

TEST_CASE("spec validation rejects broken tables") {
  GroupSpec bad = make_cyclic_spec(3);
  bad.table[1][1] = 1;  // no longer a Latin square
  CHECK_THROWS_AS(Group{bad}, ValidationError);

  GroupSpec id_gen = make_cyclic_spec(3);
  id_gen.generator_indices.push_back(0);
  CHECK_THROWS_AS(Group{id_gen}, ValidationError);

  GroupSpec singular = make_sl2_spec();
  singular.matrix_generators[0].second = {Int(2), Int(0), Int(0), Int(2)};
  CHECK_THROWS_AS(Group{singular}, ValidationError);
}

TEST_CASE("non-associative Latin square with identity is rejected") {
  // A loop of order 5 that is not a group.
  GroupSpec spec;
  spec.family = GroupFamily::FiniteTable;
  spec.table = {{0, 1, 2, 3, 4},
                {1, 0, 3, 4, 2},
                {2, 4, 0, 1, 3},
                {3, 2, 4, 0, 1},
                {4, 3, 1, 2, 0}};
  for (long i = 0; i < 5; ++i) spec.element_names.push_back("g" + std::to_string(i));
  spec.generator_indices = {1, 2, 3, 4};
  CHECK_THROWS_WITH_AS(Group{spec}, doctest::Contains("associative"), ValidationError);
}

TEST_CASE("element strings round trip over a ball") {
  for (const auto& spec : {make_free_spec(2), make_s3_perm_spec(), make_sl2_spec(),
                           make_cyclic_spec(4)}) {
    const auto group = Group::make(spec);
    const Ball ball = enumerate_ball(*group, group->generators(), 2,
                                     {.build_pair_table = false});
    for (const auto& g : ball.elements) {
      CHECK(group->element_from_string(group->element_string(g)) == g);
    }
  }
}

TEST_CASE("cross-family misuse is detected") {
  const auto z3 = Group::make(make_cyclic_spec(3));
  const auto s3 = Group::make(make_s3_perm_spec());
  CHECK_THROWS_AS(z3->multiply(z3->identity(), s3->identity()), UsageError);
  const auto f1 = Group::make(make_free_spec(1));
  const auto f2 = Group::make(make_free_spec(2));
  CHECK_THROWS_AS(f1->multiply(f1->identity(), f2->element_from_string("b")),
                  UsageError);
}

TEST_CASE("spec digest is canonical") {
  const GroupSpec a = make_cyclic_spec(3);
  GroupSpec b = make_cyclic_spec(3);
  // Generator order and duplication do not matter for finite tables.
  b.generator_indices = {2, 1, 2};
  CHECK(a.digest() == b.digest());
  CHECK(a.digest() != make_cyclic_spec(4).digest());
  CHECK(a.digest() == GroupSpec::from_json(a.canonical_json()).digest());
}
