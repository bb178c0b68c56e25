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

#include "ptcert/oracle.hpp"

#include <Eigen/Eigenvalues>

#include "ptcert/ldlt.hpp"

namespace ptcert {

namespace {

// Enumerate the whole group: finite_table groups directly from the table,
// other families by saturating a ball over the spec generators.
std::vector<GroupElement> full_group(const GroupPtr& group, long group_cap) {
  if (const auto n = group->table_size()) {
    if (*n > group_cap) {
      throw ResourceError("group order " + std::to_string(*n) + " exceeds cap " +
                          std::to_string(group_cap));
    }
    std::vector<GroupElement> out;
    out.reserve(*n);
    for (long i = 0; i < *n; ++i) out.push_back(GroupElement{{Int(i)}});
    return out;
  }
  const Ball ball = enumerate_ball(*group, group->generators(), group_cap,
                                   {.max_elements = group_cap, .build_pair_table = false});
  if (!ball.saturated) {
    throw ResourceError("group did not saturate within the cap of " +
                        std::to_string(group_cap) + " elements; is it finite?");
  }
  return ball.elements;
}

MatrixQ projection_onto_constants(long n) {
  MatrixQ p(n, n);
  const Rational v = Rational(1) / Rational(n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) p(i, j) = v;
  }
  return p;
}

}  // namespace

RegularRep regular_representation(const GroupPtr& group, const Measure& mu,
                                  long group_cap) {
  RegularRep rep;
  rep.group = group;
  rep.elements = full_group(group, group_cap);
  for (std::size_t i = 0; i < rep.elements.size(); ++i) {
    rep.index.emplace(rep.elements[i], static_cast<long>(i));
  }

  // supp(mu) must reach the whole group.
  const Ball reach = enumerate_ball(*group, mu.support(),
                                    static_cast<long>(rep.elements.size()),
                                    {.max_elements = group_cap + 1,
                                     .build_pair_table = false});
  if (reach.size() != static_cast<long>(rep.elements.size())) {
    throw ValidationError("support of mu generates only " + std::to_string(reach.size()) +
                          " of " + std::to_string(rep.elements.size()) + " elements");
  }

  ElementQ delta = laplacian(mu);
  rep.laplacian = rep_matrix(rep, delta);
  const long n = static_cast<long>(rep.elements.size());
  for (long i = 0; i < n; ++i) {
    Rational row_sum(0);
    for (long j = 0; j < n; ++j) {
      row_sum += rep.laplacian(i, j);
      if (rep.laplacian(i, j) != rep.laplacian(j, i)) {
        throw InternalError("pi(Delta) is not symmetric");
      }
    }
    if (row_sum != 0) throw InternalError("pi(Delta) does not annihilate constants");
  }
  return rep;
}

MatrixQ rep_matrix(const RegularRep& rep, const ElementQ& xi) {
  const long n = static_cast<long>(rep.elements.size());
  MatrixQ out = MatrixQ::Zero(n, n);
  for (const auto& [x, c] : xi.coeffs()) {
    // pi(x) delta_h = delta_{x h}: column j has its entry in row index(x h_j).
    for (long j = 0; j < n; ++j) {
      const long i = rep.index.at(rep.group->multiply(x, rep.elements[j]));
      out(i, j) += c;
    }
  }
  return out;
}

GapBracket spectral_gap_exact(const GroupPtr& group, const Measure& mu,
                              long group_cap, const Rational& width) {
  if (width <= 0) throw UsageError("bracket width must be positive");
  const RegularRep rep = regular_representation(group, mu, group_cap);
  const long n = static_cast<long>(rep.elements.size());
  if (n < 2) throw ValidationError("trivial group has no spectral gap to bracket");

  const MatrixQ complement = [&] {
    MatrixQ m = -projection_onto_constants(n);
    for (long i = 0; i < n; ++i) m(i, i) += 1;
    return m;
  }();
  auto shifted_psd = [&](const Rational& t) {
    return is_psd<Rational>(rep.laplacian - (complement * t).eval());
  };

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix_to_double(rep.laplacian));
  GapBracket bracket;
  bracket.estimate = eig.eigenvalues()(1);

  Rational lo(0), hi = Rational(5, 2);
  if (!shifted_psd(lo)) throw InternalError("pi(Delta) is not PSD");
  if (shifted_psd(hi)) throw InternalError("spectral bound 2 violated");

  // Tighten from the float estimate first, then bisect exactly.
  const Rational est = rational_from_double_exact(bracket.estimate);
  const Rational lo_guess = best_rational_approx(est - width / 4, Int(1) << 24);
  const Rational hi_guess = best_rational_approx(est + width / 4, Int(1) << 24);
  if (lo_guess > lo && lo_guess < hi && shifted_psd(lo_guess)) lo = lo_guess;
  if (hi_guess > lo && hi_guess < hi && !shifted_psd(hi_guess)) hi = hi_guess;
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    if (shifted_psd(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  bracket.lower = lo;
  bracket.upper = hi;
  return bracket;
}

bool positivstellensatz_check(const GroupPtr& group, const ElementQ& xi,
                              const Rational& eps, const SolveOptions& solve,
                              long group_cap) {
  if (eps <= 0) throw UsageError("eps must be positive");
  if (!xi.is_hermitian()) throw UsageError("xi must be hermitian");

  // Exact side: pi(xi) >= 0 in the regular representation. A mu is only
  // needed to build the rep; any valid one works, so use the uniform one.
  const Measure mu = Measure::uniform(group);
  const RegularRep rep = regular_representation(group, mu, group_cap);
  const MatrixQ pi_xi = rep_matrix(rep, xi);
  const bool exact_positive = is_psd<Rational>(pi_xi);

  // Numeric side: full-ball Gram certificate for xi + eps*1, no ideal
  // constraint (witnesses range over the whole algebra).
  Ball ball = enumerate_ball(*group, group->generators(),
                             static_cast<long>(rep.elements.size()),
                             {.max_elements = group_cap, .build_pair_table = true});
  if (!ball.saturated) {
    throw ResourceError("group did not saturate; Positivstellensatz check needs a finite group");
  }
  auto geometry = build_geometry(group, std::move(ball));
  ElementQ target = xi + ElementQ::unit(group) * eps;
  const SolveResult result =
      solve_feasibility(build_problem_for_target(geometry, std::move(target), false), solve);

  if (exact_positive == result.feasible) return true;

  // Margin band: pi(xi) not PSD but pi(xi) + eps*I is. Either verdict is
  // consistent with the equivalence there.
  if (!exact_positive && result.feasible) {
    MatrixQ shifted = pi_xi;
    for (long i = 0; i < shifted.rows(); ++i) shifted(i, i) += eps;
    return is_psd<Rational>(shifted);
  }
  return false;
}

}  // namespace ptcert
