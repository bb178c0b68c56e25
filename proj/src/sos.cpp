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

#include "ptcert/sos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ptcert {

// Sparse rows of the constraint system over n x n matrices, plus the
// factorized normal equations for the orthogonal projection onto the affine
// subspace. The class rows are mutually orthogonal; the row-sum rows overlap
// them, and one global dependency exists, so the least-squares solve goes
// through a rank-revealing decomposition.
struct GramGeometry::AffineOperator {
  long n = 0;
  long num_constraints = 0;
  // Per constraint: list of (flat position i*n+j, value).
  std::vector<std::vector<std::pair<long, double>>> rows;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> normal;
  std::vector<long> class_constraint;  // merged class -> constraint row

  double constraint_value(const std::vector<std::pair<long, double>>& row,
                          const Eigen::MatrixXd& q) const {
    double sum = 0;
    const double* data = q.data();
    for (const auto& [pos, val] : row) sum += val * data[pos];
    return sum;
  }
};

namespace {

std::shared_ptr<GramGeometry::AffineOperator> build_affine(const GramGeometry& geom,
                                                           bool ideal) {
  auto op = std::make_shared<GramGeometry::AffineOperator>();
  const long n = geom.n;
  op->n = n;
  // Eigen matrices are column-major; flat position of (i, j) is i + j*n.
  auto flat = [n](long i, long j) { return i + j * n; };

  for (std::size_t c = 0; c < geom.merged_pairs.size(); ++c) {
    std::vector<std::pair<long, double>> row;
    row.reserve(geom.merged_pairs[c].size());
    for (const auto& [i, j] : geom.merged_pairs[c]) {
      row.emplace_back(flat(i, j), 1.0);
    }
    op->class_constraint.push_back(static_cast<long>(op->rows.size()));
    op->rows.push_back(std::move(row));
  }
  if (ideal) {
    for (long i = 0; i < n; ++i) {
      std::vector<std::pair<long, double>> row;
      row.reserve(2 * n);
      for (long j = 0; j < n; ++j) {
        if (j == i) {
          row.emplace_back(flat(i, i), 1.0);
        } else {
          row.emplace_back(flat(i, j), 0.5);
          row.emplace_back(flat(j, i), 0.5);
        }
      }
      op->rows.push_back(std::move(row));
    }
  }
  op->num_constraints = static_cast<long>(op->rows.size());

  // Gram matrix of the constraint rows.
  const long m = op->num_constraints;
  std::vector<std::vector<std::pair<long, double>>> by_position(n * n);
  for (long k = 0; k < m; ++k) {
    for (const auto& [pos, val] : op->rows[k]) {
      by_position[pos].emplace_back(k, val);
    }
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (const auto& contributors : by_position) {
    for (const auto& [k1, v1] : contributors) {
      for (const auto& [k2, v2] : contributors) {
        gram(k1, k2) += v1 * v2;
      }
    }
  }
  op->normal.compute(gram);
  return op;
}

const GramGeometry::AffineOperator& affine_operator(const GramGeometry& geom,
                                                    bool ideal) {
  auto& slot = ideal ? geom.affine_with_ideal : geom.affine_plain;
  if (!slot) slot = build_affine(geom, ideal);
  return *slot;
}

}  // namespace

std::shared_ptr<GramGeometry> build_geometry(GroupPtr group, Ball ball) {
  if (!ball.pairs) {
    ball = enumerate_ball(*group, ball.gens, ball.radius,
                          {.max_elements = std::max<long>(ball.size(), 1),
                           .build_pair_table = true});
  }
  auto geom = std::make_shared<GramGeometry>();
  geom->group = std::move(group);
  geom->ball = std::move(ball);
  geom->n = geom->ball.size();

  const PairTable& pt = *geom->ball.pairs;
  geom->keys = pt.products;
  geom->key_index = pt.product_index;
  geom->key_pairs.assign(geom->keys.size(), {});
  for (long i = 0; i < geom->n; ++i) {
    for (long j = 0; j < geom->n; ++j) {
      geom->key_pairs[pt.pair_product(i, j)].emplace_back(i, j);
    }
  }

  geom->merged_of_key.assign(geom->keys.size(), -1);
  for (std::size_t k = 0; k < geom->keys.size(); ++k) {
    if (geom->merged_of_key[k] >= 0) continue;
    const GroupElement inv = geom->group->inverse(geom->keys[k]);
    const long partner = geom->key_index.at(inv);  // classes are inverse-closed
    const long cls = static_cast<long>(geom->merged_pairs.size());
    geom->merged_of_key[k] = cls;
    std::vector<std::pair<long, long>> pairs = geom->key_pairs[k];
    if (partner != static_cast<long>(k)) {
      geom->merged_of_key[partner] = cls;
      pairs.insert(pairs.end(), geom->key_pairs[partner].begin(),
                   geom->key_pairs[partner].end());
    }
    geom->merged_pairs.push_back(std::move(pairs));
  }
  return geom;
}

GramProblem build_problem(std::shared_ptr<GramGeometry> geometry,
                          const Measure& mu, const Rational& kappa) {
  const GroupPtr& group = geometry->group;
  const ElementQ delta = laplacian(mu);
  ElementQ target = delta * delta - delta * kappa;
  GramProblem problem = build_problem_for_target(std::move(geometry),
                                                 std::move(target), true);
  problem.kappa = kappa;
  return problem;
}

GramProblem build_problem_for_target(std::shared_ptr<GramGeometry> geometry,
                                     ElementQ target, bool ideal_constraint) {
  std::vector<std::string> missing;
  for (const auto& [x, c] : target.coeffs()) {
    if (!geometry->key_index.count(x)) {
      missing.push_back(geometry->group->element_string(x));
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "target support not covered by ball pair products; missing:";
    for (const auto& s : missing) msg << " " << s;
    msg << " (remedy: enlarge the ball radius)";
    throw InfeasibleError(msg.str());
  }

  std::vector<Rational> rhs(geometry->keys.size(), Rational(0));
  for (const auto& [x, c] : target.coeffs()) {
    rhs[geometry->key_index.at(x)] = c;
  }
  return GramProblem{std::move(geometry), std::move(target), ideal_constraint,
                     std::nullopt, std::move(rhs)};
}

SolveResult solve_feasibility(const GramProblem& problem, const SolveOptions& options) {
  if (options.tol <= 0) throw UsageError("solver tolerance must be positive");
  const GramGeometry& geom = *problem.geometry;
  const long n = geom.n;
  const auto& affine = affine_operator(geom, problem.ideal_constraint);

  // Merged-class right-hand sides. For a class {g, g^-1} with g != g^-1 the
  // row sums both ordered classes, so the rhs doubles (the target is
  // hermitian whenever the problem is solvable; non-hermitian targets are
  // structurally infeasible and the residual check will say so).
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(affine.num_constraints);
  {
    std::vector<bool> seen(geom.merged_pairs.size(), false);
    for (std::size_t k = 0; k < geom.keys.size(); ++k) {
      const long cls = geom.merged_of_key[k];
      rhs(affine.class_constraint[cls]) += rational_to_double(problem.rhs[k]);
      seen[cls] = true;
    }
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd residual(affine.num_constraints);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

  SolveResult result;
  result.stats.stop_reason = "max iterations reached";
  double best = std::numeric_limits<double>::infinity();
  long since_best = 0;

  auto affine_project = [&](Eigen::MatrixXd& m) {
    for (long k = 0; k < affine.num_constraints; ++k) {
      residual(k) = affine.constraint_value(affine.rows[k], m) - rhs(k);
    }
    const Eigen::VectorXd y = affine.normal.solve(residual);
    double* data = m.data();
    for (long k = 0; k < affine.num_constraints; ++k) {
      const double yk = y(k);
      if (yk == 0) continue;
      for (const auto& [pos, val] : affine.rows[k]) data[pos] -= yk * val;
    }
  };

  auto max_violation = [&](const Eigen::MatrixXd& m) {
    double worst = 0;
    for (long k = 0; k < affine.num_constraints; ++k) {
      worst = std::max(worst,
                       std::abs(affine.constraint_value(affine.rows[k], m) - rhs(k)));
    }
    return worst;
  };

  for (long it = 1; it <= options.max_iterations; ++it) {
    result.stats.iterations = it;
    affine_project(q);
    eig.compute(q);
    if (eig.info() != Eigen::Success) {
      throw NumericError("eigenvalue decomposition failed in solver");
    }
    Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    q = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    q = ((q + q.transpose()) / 2).eval();
    if (!q.allFinite()) throw NumericError("solver iterate is not finite");

    const double viol = max_violation(q);
    if (viol <= options.tol) {
      result.stats.feasible = true;
      result.stats.stop_reason = "converged";
      break;
    }
    if (viol < best * (1.0 - options.stall_improvement)) {
      best = viol;
      since_best = 0;
    } else if (++since_best >= options.stall_window) {
      result.stats.stop_reason = "stalled (no progress for " +
                                 std::to_string(options.stall_window) + " iterations)";
      break;
    }
  }

  result.stats.affine_residual = max_violation(q);
  result.stats.rowsum_residual = (q * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff();
  eig.compute(q);
  result.stats.min_eigenvalue = eig.eigenvalues().minCoeff();
  result.feasible = result.stats.feasible &&
                    result.stats.min_eigenvalue >= -options.tol &&
                    (!problem.ideal_constraint ||
                     result.stats.rowsum_residual <= options.tol);
  result.gram = std::move(q);
  return result;
}

MaximizeResult maximize_kappa(std::shared_ptr<GramGeometry> geometry,
                              const Measure& mu, const MaximizeOptions& options,
                              const std::function<void(const std::string&)>& log) {
  if (options.resolution <= 0) throw UsageError("bisection resolution must be positive");
  auto report = [&](const Rational& kappa, const SolveResult& r) {
    if (!log) return;
    std::ostringstream line;
    line << "bisection: kappa = " << rational_to_string(kappa) << " -> "
         << (r.feasible ? "feasible" : "infeasible") << " (iterations "
         << r.stats.iterations << ", affine residual " << r.stats.affine_residual
         << ")";
    log(line.str());
  };

  MaximizeResult out;
  auto solve_at = [&](const Rational& kappa) {
    SolveResult r = solve_feasibility(build_problem(geometry, mu, kappa), options.solve);
    ++out.solves;
    report(kappa, r);
    return r;
  };

  // Spectrum of Delta lies in [0, 2]; try the endpoint before bisecting.
  SolveResult top = solve_at(Rational(2));
  if (top.feasible) {
    out.kappa_best = 2;
    out.gram = std::move(top.gram);
    out.stats = top.stats;
    return out;
  }

  // kappa = 0 is feasible without solving: Delta^2 = Delta* Delta and Delta
  // lies in the ideal, so the outer product of Delta's coefficient vector is
  // an exact anchor. (Numerically this instance is tangent to the PSD cone,
  // where alternating projections crawl.)
  const ElementQ delta = laplacian(mu);
  {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(geometry->n);
    for (const auto& [x, c] : delta.coeffs()) {
      const long idx = geometry->ball.find(x);
      if (idx < 0) {
        throw InfeasibleError("Delta support outside the ball; enlarge the radius");
      }
      coeffs(idx) = rational_to_double(c);
    }
    out.gram = coeffs * coeffs.transpose();
    out.stats.feasible = true;
    out.stats.stop_reason = "exact anchor at kappa = 0";
  }

  Rational lo(0), hi(2);
  out.kappa_best = lo;
  while (hi - lo > options.resolution) {
    const Rational mid = (lo + hi) / 2;
    SolveResult r = solve_at(mid);
    if (r.feasible) {
      lo = mid;
      out.kappa_best = mid;
      out.gram = std::move(r.gram);
      out.stats = r.stats;
    } else {
      hi = mid;
    }
  }
  return out;
}

ElementQ gram_image(const GroupPtr& group, const std::vector<GroupElement>& basis,
                    const MatrixQ& q) {
  const long n = static_cast<long>(basis.size());
  if (q.rows() != n || q.cols() != n) {
    throw UsageError("gram_image: matrix size does not match basis");
  }
  ElementQ out = ElementQ::zero(group);
  for (long i = 0; i < n; ++i) {
    const GroupElement inv_i = group->inverse(basis[i]);
    for (long j = 0; j < n; ++j) {
      if (q(i, j) == 0) continue;
      out.add_coeff(group->multiply(inv_i, basis[j]), q(i, j));
    }
  }
  return out;
}

nlohmann::json problem_dump(const GramProblem& problem) {
  const GramGeometry& geom = *problem.geometry;
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t k = 0; k < geom.keys.size(); ++k) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [i, j] : geom.key_pairs[k]) pairs.push_back({i, j});
    records.push_back({{"element", geom.group->element_string(geom.keys[k])},
                       {"pairs", pairs},
                       {"target", rational_to_string(problem.rhs[k])}});
  }
  return nlohmann::json{{"ball_radius", geom.ball.radius},
                        {"size", geom.n},
                        {"ideal_constraint", problem.ideal_constraint},
                        {"constraints", records}};
}

}  // namespace ptcert
