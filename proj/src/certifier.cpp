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

#include "ptcert/certifier.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "ptcert/ldlt.hpp"
#include "ptcert/version.hpp"

namespace ptcert {

namespace {

// Witnesses from an exact factorization: weight d_k, vector = column k read
// through the ball indexing. Q 1 = 0 forces every kept column to have zero
// coefficient sum, which is checked.
std::vector<Witness> witnesses_from_factorization(const LdltResult<Rational>& fact,
                                                  const std::vector<GroupElement>& basis,
                                                  const GroupPtr& group) {
  std::vector<Witness> out;
  for (long k = 0; k < fact.rank; ++k) {
    ElementQ vec = ElementQ::zero(group);
    for (long i = 0; i < fact.n; ++i) {
      if (fact.factors(i, k) != 0) vec.add_coeff(basis[i], fact.factors(i, k));
    }
    if (vec.is_zero()) continue;
    out.push_back(Witness{fact.pivots[k], std::move(vec)});
  }
  return out;
}

void check_ideal_membership(const std::vector<Witness>& witnesses) {
  for (const auto& w : witnesses) {
    if (w.vector.augmentation() != 0) {
      throw InternalError("factorization produced a witness outside the augmentation ideal");
    }
  }
}

MatrixQ identity_minus_average(long n) {
  MatrixQ j(n, n);
  const Rational off = Rational(-1) / Rational(n);
  const Rational diag = Rational(1) + off;
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) j(r, c) = (r == c) ? diag : off;
  }
  return j;
}

// Exact orthogonal projection of a symmetric rational matrix onto {Q 1 = 0},
// via two rank-one corrections.
void project_rowsums_exact(MatrixQ& m) {
  const long n = m.rows();
  VectorQ u(n);
  for (long i = 0; i < n; ++i) {
    Rational sum(0);
    for (long j = 0; j < n; ++j) sum += m(i, j);
    u(i) = sum;
  }
  Rational total(0);
  for (long i = 0; i < n; ++i) total += u(i);
  const Rational s = total / Rational(2 * n);
  VectorQ v(n);
  for (long i = 0; i < n; ++i) v(i) = (u(i) - s) / Rational(n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) m(i, j) -= v(i) + v(j);
  }
}

}  // namespace

FactorOutcome rationalize_and_factor(const Eigen::MatrixXd& gram, const Ball& ball,
                                     const GroupPtr& group, const FactorOptions& options) {
  const long n = ball.size();
  if (gram.rows() != n || gram.cols() != n) {
    throw UsageError("gram matrix size does not match the ball");
  }
  if (!gram.allFinite()) throw NumericError("gram matrix has non-finite entries");
  if (options.denom_cap < 1) throw UsageError("denom_cap must be >= 1");

  FactorOutcome out;
  out.gram.resize(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = i; j < n; ++j) {
      const double sym = (gram(i, j) + gram(j, i)) / 2;
      const Rational r = round_to_denominator_cap(sym, options.denom_cap);
      out.gram(i, j) = r;
      out.gram(j, i) = r;
    }
  }
  project_rowsums_exact(out.gram);

  LdltResult<Rational> fact = ldlt_factor(out.gram);
  if (!fact.psd) {
    // Rounding can push the matrix slightly below the cone. Shift by the
    // smallest power of two the float spectrum says is enough; the identity
    // is restricted to the constraint subspace so Q 1 = 0 survives.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix_to_double(out.gram));
    const double lambda_min = eig.eigenvalues().minCoeff();
    int exponent = -40;
    if (lambda_min < 0) {
      exponent = std::max(exponent,
                          static_cast<int>(std::ceil(std::log2(-2.0 * lambda_min))));
    }
    Rational tau(1);
    if (exponent >= 0) {
      Int p(1);
      p <<= exponent;
      tau = Rational(p);
    } else {
      Int p(1);
      p <<= -exponent;
      tau = Rational(1) / Rational(p);
    }
    out.gram += (identity_minus_average(n) * tau).eval();
    out.shift = tau;
    out.repaired = true;
    fact = ldlt_factor(out.gram);
    if (!fact.psd) {
      throw InfeasibleError(
          "pivot repair failed (" + fact.failure +
          "): matrix too indefinite after rounding; decrease the solver "
          "tolerance or increase denom-cap");
    }
  }
  out.witnesses = witnesses_from_factorization(fact, ball.elements, group);
  check_ideal_membership(out.witnesses);
  return out;
}

FactorOutcome factor_exact(const MatrixQ& gram, const std::vector<GroupElement>& basis,
                           const GroupPtr& group) {
  const long n = gram.rows();
  if (static_cast<long>(basis.size()) != n) {
    throw UsageError("gram matrix size does not match the basis");
  }
  for (long i = 0; i < n; ++i) {
    Rational sum(0);
    for (long j = 0; j < n; ++j) sum += gram(i, j);
    if (sum != 0) throw UsageError("exact gram matrix must have zero row sums");
  }
  LdltResult<Rational> fact = ldlt_factor(gram);
  if (!fact.psd) {
    throw InfeasibleError("exact gram matrix is not PSD (" + fact.failure + ")");
  }
  FactorOutcome out;
  out.gram = gram;
  out.witnesses = witnesses_from_factorization(fact, basis, group);
  check_ideal_membership(out.witnesses);
  return out;
}

ElementQ compute_residual(const Measure& mu, const Rational& kappa_input,
                          const std::vector<Witness>& witnesses) {
  for (const auto& w : witnesses) {
    if (w.vector.augmentation() != 0) {
      throw MalformedError("witness vector is outside the augmentation ideal");
    }
    if (w.weight <= 0) throw MalformedError("witness weight must be positive");
  }
  const ElementQ delta = laplacian(mu);
  ElementQ eta = delta * delta - delta * kappa_input;
  for (const auto& w : witnesses) {
    eta -= (w.vector.star() * w.vector) * w.weight;
  }
  if (!eta.is_hermitian() || eta.augmentation() != 0) {
    throw InternalError("residual is not hermitian with augmentation zero");
  }
  return eta;
}

std::vector<ResidualTerm> decompose_residual(const ElementQ& eta) {
  const GroupPtr& group = eta.group();
  if (!eta.is_hermitian()) throw UsageError("residual must be hermitian");
  if (eta.augmentation() != 0) {
    throw UsageError("residual must have augmentation zero");
  }
  std::vector<ResidualTerm> terms;
  Rational identity_forced(0);
  for (const auto& [x, c] : eta.coeffs()) {
    if (group->is_identity(x)) continue;
    const GroupElement inv = group->inverse(x);
    const int cmp = compare_elements(x, inv);
    if (cmp > 0) continue;  // the partner handles this pair
    // x + x^-1 - 2 reads 2x - 2 when x is an involution.
    const Rational a = (cmp == 0) ? c / 2 : c;
    terms.push_back({x, a});
    identity_forced -= 2 * a;
  }
  if (eta.coeff(group->identity()) != identity_forced) {
    throw InternalError("residual identity coefficient inconsistent with augmentation");
  }
  return terms;
}

Rational residual_bound(const ElementQ& eta, const OrderUnitTable& table) {
  Rational bound(0);
  for (const auto& term : decompose_residual(eta)) {
    bound += abs(term.a) * table.c(term.rep);
  }
  return bound;
}

std::vector<SquareTerm> absorption_expansion(const ElementQ& eta,
                                             const OrderUnitTable& table, int sign) {
  if (sign != 1 && sign != -1) throw UsageError("sign must be +-1");
  std::vector<SquareTerm> expansion;
  const ElementQ one = ElementQ::unit(eta.group());
  for (const auto& term : decompose_residual(eta)) {
    const Rational b = sign > 0 ? term.a : Rational(-term.a);
    const OrderUnitCoefficient& coeff = table.at(term.rep);
    if (b >= 0) {
      // b * [c * Delta - (1-x)*(1-x)]: the stored expansion, rescaled.
      for (const auto& sq : coeff.expansion) {
        expansion.push_back({sq.weight * b, sq.vec});
      }
    } else {
      // |b| * c * Delta + |b| * (1-x)*(1-x): both sides are already squares.
      const Rational mag = -b;
      for (const auto& sq : table.delta_expansion()) {
        expansion.push_back({sq.weight * mag * coeff.c, sq.vec});
      }
      expansion.push_back({mag, one - ElementQ::basis(eta.group(), term.rep)});
    }
  }
  return expansion;
}

namespace {

CertifyOutcome finish_certification(const GroupPtr& group, const Measure& mu,
                                    const Ball& ball, const Rational& kappa_input,
                                    FactorOutcome factored,
                                    const nlohmann::json& solver_metadata,
                                    const CertifyOptions& options) {
  CertifyOutcome outcome;
  const ElementQ eta = compute_residual(mu, kappa_input, factored.witnesses);
  outcome.eta_one_norm = eta.one_norm();

  Rational bound(0);
  if (!eta.is_zero()) {
    OrderUnitTable table(group, mu, 2 * ball.radius, options.ball_cap);
    bound = residual_bound(eta, table);
    if (options.check_absorption) {
      const ElementQ expanded = expand_squares(group, absorption_expansion(eta, table, 1));
      if (expanded != table.delta() * bound + eta) {
        throw InternalError("absorption expansion failed to reproduce B*Delta + eta");
      }
    }
  }
  outcome.residual_bound_value = bound;
  outcome.kappa_certified = kappa_input - bound;
  outcome.accepted = outcome.kappa_certified > 0;

  if (!outcome.accepted) {
    std::ostringstream msg;
    msg << "rejected: kappa_certified = " << rational_to_string(outcome.kappa_certified)
        << " <= 0 (residual bound B = " << rational_to_string(bound)
        << ", |eta|_1 = " << rational_to_string(outcome.eta_one_norm)
        << "); tighten the solver tolerance or increase denom-cap";
    outcome.message = msg.str();
    return outcome;
  }

  Certificate cert;
  cert.group_digest = group->digest();
  for (const auto& [x, w] : mu.weights()) {
    cert.mu_weights.emplace_back(group->element_string(x), w);
  }
  cert.ball_radius = ball.radius;
  cert.ball_ordering_digest = ball_ordering_digest(*group, ball);
  cert.kappa_input = kappa_input;
  for (const auto& w : factored.witnesses) {
    CertificateWitness cw;
    cw.weight = w.weight;
    // Vector entries in ball-index order.
    for (const auto& x : ball.elements) {
      const Rational c = w.vector.coeff(x);
      if (c != 0) cw.vector.emplace_back(group->element_string(x), c);
    }
    cert.witnesses.push_back(std::move(cw));
  }
  cert.residual_bound = bound;
  cert.kappa_certified = outcome.kappa_certified;

  nlohmann::json meta = solver_metadata.is_null() ? nlohmann::json::object()
                                                  : solver_metadata;
  meta["tool"] = std::string("ptcert ") + kPtcertVersion;
  meta["denom_cap"] = options.denom_cap.str();
  if (factored.repaired) meta["pivot_repair_shift"] = rational_to_string(factored.shift);
  meta["generation"] = ball.saturated
                           ? "verified (ball saturates)"
                           : ("assumed beyond radius " + std::to_string(ball.radius));
  cert.metadata = std::move(meta);
  outcome.certificate = std::move(cert);
  outcome.message = "accepted";
  return outcome;
}

}  // namespace

CertifyOutcome certify(const GroupPtr& group, const Measure& mu, const Ball& ball,
                       const Rational& kappa_input, const Eigen::MatrixXd& gram,
                       const nlohmann::json& solver_metadata,
                       const CertifyOptions& options) {
  FactorOutcome factored =
      rationalize_and_factor(gram, ball, group, {.denom_cap = options.denom_cap});
  return finish_certification(group, mu, ball, kappa_input, std::move(factored),
                              solver_metadata, options);
}

CertifyOutcome certify_exact(const GroupPtr& group, const Measure& mu,
                             const Ball& ball, const Rational& kappa_input,
                             const std::vector<Witness>& witnesses,
                             const nlohmann::json& solver_metadata,
                             const CertifyOptions& options) {
  FactorOutcome factored;
  factored.witnesses = witnesses;
  return finish_certification(group, mu, ball, kappa_input, std::move(factored),
                              solver_metadata, options);
}

VerifyReport verify(const Certificate& cert, const GroupSpec& spec,
                    const VerifyOptions& options) {
  VerifyReport report;
  auto reject = [&](int code, const std::string& why) {
    report.accepted = false;
    report.exit_code = code;
    report.failure = why;
    return report;
  };
  auto pass = [&](const std::string& what) { report.passed.push_back(what); };

  if (cert.version != kCertificateVersion) {
    return reject(2, "unsupported certificate version '" + cert.version + "'");
  }
  pass("version");

  GroupPtr group;
  try {
    group = Group::make(spec);
  } catch (const Error& e) {
    return reject(2, std::string("group spec invalid: ") + e.what());
  }
  if (group->digest() != cert.group_digest) {
    return reject(1, "group digest mismatch (certificate is for a different group)");
  }
  pass("group digest");

  // Measure: parse and re-validate every invariant.
  Measure* mu_ptr = nullptr;
  std::optional<Measure> mu;
  try {
    ElementMap<Rational> weights;
    for (const auto& [key, w] : cert.mu_weights) {
      const GroupElement x = group->element_from_string(key);
      if (!weights.emplace(x, w).second) {
        return reject(2, "duplicate measure weight for '" + key + "'");
      }
    }
    mu.emplace(group, std::move(weights));
    mu_ptr = &*mu;
  } catch (const MalformedError& e) {
    return reject(2, std::string("measure: ") + e.what());
  } catch (const ValidationError& e) {
    return reject(1, std::string("measure invalid: ") + e.what());
  }
  pass("measure");

  Ball ball;
  try {
    ball = enumerate_ball(*group, mu_ptr->support(), cert.ball_radius,
                          {.max_elements = options.ball_cap, .build_pair_table = false});
  } catch (const ResourceError& e) {
    return reject(2, std::string("ball enumeration: ") + e.what());
  }
  if (ball_ordering_digest(*group, ball) != cert.ball_ordering_digest) {
    return reject(1, "ball ordering digest mismatch");
  }
  pass("ball ordering");

  std::vector<Witness> witnesses;
  for (std::size_t i = 0; i < cert.witnesses.size(); ++i) {
    const auto& cw = cert.witnesses[i];
    const std::string label = "witness " + std::to_string(i);
    if (cw.weight <= 0) return reject(1, label + ": weight must be positive");
    ElementQ vec = ElementQ::zero(group);
    for (const auto& [key, c] : cw.vector) {
      GroupElement x;
      try {
        x = group->element_from_string(key);
      } catch (const MalformedError& e) {
        return reject(2, label + ": " + e.what());
      }
      if (ball.find(x) < 0) {
        return reject(1, label + ": support outside the declared ball ('" + key + "')");
      }
      if (vec.coeff(x) != 0) return reject(2, label + ": duplicate entry '" + key + "'");
      if (c == 0) return reject(2, label + ": explicit zero coefficient");
      vec.set_coeff(x, c);
    }
    if (vec.is_zero()) return reject(1, label + ": zero vector");
    if (vec.augmentation() != 0) {
      return reject(1, label + ": not in the augmentation ideal (coefficient sum " +
                           rational_to_string(vec.augmentation()) + ")");
    }
    witnesses.push_back({cw.weight, std::move(vec)});
  }
  pass("witness ideal membership and support");

  if (cert.residual_bound < 0) return reject(1, "negative residual bound");
  if (cert.kappa_certified != cert.kappa_input - cert.residual_bound) {
    return reject(1, "kappa_certified != kappa_input - residual_bound");
  }
  if (cert.kappa_certified <= 0) return reject(1, "kappa_certified is not positive");
  pass("kappa consistency");

  ElementQ eta = ElementQ::zero(group);
  try {
    eta = compute_residual(*mu_ptr, cert.kappa_input, witnesses);
  } catch (const Error& e) {
    return reject(1, std::string("residual: ") + e.what());
  }

  Rational fresh_bound(0);
  if (!eta.is_zero()) {
    try {
      OrderUnitTable table(group, *mu_ptr, 2 * cert.ball_radius, options.ball_cap);
      fresh_bound = residual_bound(eta, table);
    } catch (const NotReachableError& e) {
      return reject(1, std::string("residual bound: ") + e.what());
    } catch (const ResourceError& e) {
      return reject(2, std::string("residual bound: ") + e.what());
    }
  }
  report.recomputed_bound = fresh_bound;
  pass("residual recomputed");

  if (fresh_bound > cert.residual_bound) {
    return reject(1, "recomputed residual bound " + rational_to_string(fresh_bound) +
                         " exceeds the declared bound " +
                         rational_to_string(cert.residual_bound));
  }
  if (cert.kappa_input - fresh_bound < cert.kappa_certified) {
    return reject(1, "certified kappa not covered by the recomputed bound");
  }
  pass("residual bound");

  report.accepted = true;
  report.exit_code = 0;
  report.failure.clear();
  return report;
}

}  // namespace ptcert
