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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptcert/algebra.hpp"
#include "ptcert/group.hpp"

namespace ptcert {

// Pair-product structure of a ball, shared by every Gram problem over it.
// For each group element g reachable as elements[i]^-1 * elements[j], the
// class lists all ordered index pairs (i, j) producing it; each pair belongs
// to exactly one class. Classes are merged over {g, g^-1} (matching the
// symmetry of the Gram matrix) for the solver's affine projection.
struct GramGeometry {
  GroupPtr group;
  Ball ball;
  long n = 0;

  // Per distinct pair product (ordered classes, canonical order).
  std::vector<GroupElement> keys;
  std::vector<std::vector<std::pair<long, long>>> key_pairs;
  ElementMap<long> key_index;

  // Merged classes used by the solver.
  std::vector<std::vector<std::pair<long, long>>> merged_pairs;
  std::vector<long> merged_of_key;

  struct AffineOperator;
  // Cached projection machinery, one per ideal-constraint flag.
  mutable std::shared_ptr<AffineOperator> affine_with_ideal;
  mutable std::shared_ptr<AffineOperator> affine_plain;
};

std::shared_ptr<GramGeometry> build_geometry(GroupPtr group, Ball ball);

// The feasibility problem: find Q symmetric PSD with, for every group
// element g, sum over the class of g of Q_ij equal to target(g), plus
// (optionally) Q * 1 = 0 so witness vectors land in the augmentation ideal.
struct GramProblem {
  std::shared_ptr<GramGeometry> geometry;
  ElementQ target;
  bool ideal_constraint = true;
  std::optional<Rational> kappa;
  std::vector<Rational> rhs;  // per ordered key
};

// Target Delta^2 - kappa * Delta. Throws InfeasibleError (naming the missing
// elements) when the target support is not covered by the pair products.
GramProblem build_problem(std::shared_ptr<GramGeometry> geometry,
                          const Measure& mu, const Rational& kappa);

// Arbitrary-target variant (used by the Positivstellensatz desk check, which
// drops the ideal constraint).
GramProblem build_problem_for_target(std::shared_ptr<GramGeometry> geometry,
                                     ElementQ target, bool ideal_constraint);

struct SolveOptions {
  double tol = 1e-9;
  long max_iterations = 200000;
  // Declare a stall when the best affine residual fails to improve by
  // stall_improvement (relative) over stall_window iterations.
  long stall_window = 4000;
  double stall_improvement = 1e-3;
};

struct SolveStats {
  long iterations = 0;
  double affine_residual = 0;
  double rowsum_residual = 0;
  double min_eigenvalue = 0;
  bool feasible = false;
  std::string stop_reason;
};

struct SolveResult {
  bool feasible = false;
  Eigen::MatrixXd gram;  // symmetric, n x n
  SolveStats stats;
};

// Alternating projections between the affine subspace (closed-form projection
// through precomputed constraint normal equations) and the PSD cone
// (eigenvalue clipping). Deterministic for fixed inputs; the iteration count
// is recorded in the stats.
SolveResult solve_feasibility(const GramProblem& problem,
                              const SolveOptions& options = {});

struct MaximizeOptions {
  SolveOptions solve;
  Rational resolution = Rational(1, 128);  // bisection stops at this width
};

struct MaximizeResult {
  Rational kappa_best;
  Eigen::MatrixXd gram;
  SolveStats stats;
  long solves = 0;
};

// Bisection for the largest feasible kappa in [0, 2]. The upper endpoint is
// valid because mu is a probability measure: ||sum mu(x) x|| <= 1, so the
// spectrum of Delta lies in [0, 2]; the endpoint is tried explicitly first.
MaximizeResult maximize_kappa(std::shared_ptr<GramGeometry> geometry,
                              const Measure& mu,
                              const MaximizeOptions& options = {},
                              const std::function<void(const std::string&)>& log = {});

// Exact round trip: sum_ij Q_ij * (basis[i]^-1 basis[j]) as an algebra
// element. Reconstructs the target for any Q meeting the affine constraints.
ElementQ gram_image(const GroupPtr& group, const std::vector<GroupElement>& basis,
                    const MatrixQ& q);

// Debug/interchange dump: one record per constraint key with its pair list
// and exact target coefficient.
nlohmann::json problem_dump(const GramProblem& problem);

}  // namespace ptcert
