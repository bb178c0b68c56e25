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

#pragma once

#include <random>
#include <string>
#include <vector>

#include "ptcert/algebra.hpp"
#include "ptcert/group.hpp"

namespace ptcert::testing {

// Cyclic group Z/n as a finite table with names e, s, s2, ...
inline GroupSpec make_cyclic_spec(long n, bool full_generators = false) {
  GroupSpec spec;
  spec.family = GroupFamily::FiniteTable;
  spec.table.assign(n, std::vector<long>(n));
  for (long a = 0; a < n; ++a) {
    for (long b = 0; b < n; ++b) spec.table[a][b] = (a + b) % n;
  }
  spec.element_names.push_back("e");
  for (long i = 1; i < n; ++i) spec.element_names.push_back("s" + std::to_string(i));
  if (full_generators) {
    for (long i = 1; i < n; ++i) spec.generator_indices.push_back(i);
  } else {
    spec.generator_indices.push_back(1 % n);
    spec.generator_indices.push_back(n - 1);
  }
  return spec;
}

// Converts a finite group reachable from its generators into an explicit
// multiplication table spec (used to build "S3 as a table").
inline GroupSpec to_table_spec(const Group& group, bool full_generators,
                               const std::string& prefix = "g") {
  const Ball all = enumerate_ball(group, group.generators(), 10000,
                                  {.max_elements = 10000, .build_pair_table = false});
  if (!all.saturated) throw ResourceError("group is not finite");
  const long n = all.size();
  GroupSpec spec;
  spec.family = GroupFamily::FiniteTable;
  spec.table.assign(n, std::vector<long>(n));
  for (long a = 0; a < n; ++a) {
    for (long b = 0; b < n; ++b) {
      spec.table[a][b] = all.find(group.multiply(all.elements[a], all.elements[b]));
    }
  }
  for (long i = 0; i < n; ++i) spec.element_names.push_back(prefix + std::to_string(i));
  if (full_generators) {
    for (long i = 0; i < n; ++i) {
      if (i != all.find(group.identity())) spec.generator_indices.push_back(i);
    }
  } else {
    for (const auto& g : group.generators()) {
      spec.generator_indices.push_back(all.find(g));
    }
  }
  return spec;
}

inline GroupSpec make_s3_perm_spec() {
  GroupSpec spec;
  spec.family = GroupFamily::Permutation;
  spec.degree = 3;
  spec.perm_generators.emplace_back("t", std::vector<long>{1, 0, 2});
  spec.perm_generators.emplace_back("c", std::vector<long>{1, 2, 0});
  return spec;
}

inline GroupSpec make_s3_table_spec(bool full_generators = false) {
  const Group perm_group(make_s3_perm_spec());
  return to_table_spec(perm_group, full_generators);
}

inline GroupSpec make_free_spec(long rank) {
  GroupSpec spec;
  spec.family = GroupFamily::Free;
  for (long i = 0; i < rank; ++i) {
    spec.letters.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  return spec;
}

inline GroupSpec make_sl2_spec() {
  GroupSpec spec;
  spec.family = GroupFamily::IntegerMatrix;
  spec.dimension = 2;
  spec.matrix_generators.emplace_back("u", std::vector<Int>{1, 1, 0, 1});
  spec.matrix_generators.emplace_back("l", std::vector<Int>{1, 0, 1, 1});
  return spec;
}

inline Rational random_rational(std::mt19937_64& rng, long max_abs_num = 6,
                                long max_den = 4) {
  std::uniform_int_distribution<long> num(-max_abs_num, max_abs_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng)) / Rational(den(rng));
}

// Random element of the radius-r ball.
inline GroupElement random_ball_element(std::mt19937_64& rng, const Ball& ball) {
  std::uniform_int_distribution<long> pick(0, ball.size() - 1);
  return ball.elements[pick(rng)];
}

// Random hermitian element supported in the given ball: zeta + zeta*.
inline ElementQ random_hermitian(std::mt19937_64& rng, const GroupPtr& group,
                                 const Ball& ball, long terms = 3) {
  ElementQ zeta = ElementQ::zero(group);
  for (long t = 0; t < terms; ++t) {
    zeta.add_coeff(random_ball_element(rng, ball), random_rational(rng));
  }
  return zeta + zeta.star();
}

}  // namespace ptcert::testing
