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

#include <Eigen/Dense>

#include <vector>

#include "ptcert/algebra.hpp"
#include "ptcert/sos.hpp"

namespace ptcert {

// Left-translation action of a finite group on functions on itself. Contains
// every irreducible, so positivity questions about Q[Gamma] elements reduce
// to it at desk scale. Ground truth for tests and acceptance criteria only.
struct RegularRep {
  GroupPtr group;
  std::vector<GroupElement> elements;  // the whole group, ball order
  ElementMap<long> index;
  MatrixQ laplacian;  // pi(Delta_mu), exact
};

// Enumerates the full group by ball saturation (ResourceError beyond
// group_cap) and checks that supp(mu) generates it.
RegularRep regular_representation(const GroupPtr& group, const Measure& mu,
                                  long group_cap = 512);

// pi(xi) as an exact matrix; symmetric iff xi is hermitian.
MatrixQ rep_matrix(const RegularRep& rep, const ElementQ& xi);

struct GapBracket {
  Rational lower;    // pi(Delta) - lower*(I - P0) is PSD, proved exactly
  Rational upper;    // pi(Delta) - upper*(I - P0) is not PSD, proved exactly
  double estimate;   // float eigenvalue, advisory
};

// Smallest eigenvalue of pi(Delta) on the complement of constants, bracketed
// by exact PSD tests of rational shifts. P0 is the projection onto constants.
GapBracket spectral_gap_exact(const GroupPtr& group, const Measure& mu,
                              long group_cap = 512,
                              const Rational& width = Rational(1, 128));

// Desk-scale shadow of the Positivstellensatz equivalence: exact regular-
// representation positivity of xi versus existence of a full-ball Gram
// certificate for xi + eps*1 (no ideal constraint). Returns true when the two
// verdicts agree; disagreement inside the eps margin band also counts as
// agreement, since either answer is consistent there.
bool positivstellensatz_check(const GroupPtr& group, const ElementQ& xi,
                              const Rational& eps, const SolveOptions& solve = {},
                              long group_cap = 512);

}  // namespace ptcert
