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

#include <string>
#include <vector>

#include "ptcert/algebra.hpp"
#include "ptcert/certificate.hpp"
#include "ptcert/order_unit.hpp"

namespace ptcert {

struct Witness {
  Rational weight;   // positive
  ElementQ vector;   // in Q[Gamma] with augmentation 0
};

struct FactorOptions {
  Int denom_cap = Int(1000000);
};

struct FactorOutcome {
  std::vector<Witness> witnesses;
  MatrixQ gram;        // the exact matrix that was factored
  Rational shift = 0;  // tau, if tau * (I - J/n) was added to repair pivots
  bool repaired = false;
};

// Numeric Gram matrix -> exact witnesses:
//  1. symmetrize and round every entry to a rational with denominator
//     <= denom_cap (continued-fraction best approximation);
//  2. project exactly onto {Q 1 = 0} (two rank-one corrections);
//  3. exact pivoted LDL^T; on a negative pivot, add the smallest power-of-two
//     multiple of I - J/n that the float spectrum suggests and retry once
//     (the shift lands in the residual, which the absorption bound pays for);
//  4. positive pivots become weights, their columns become vectors.
FactorOutcome rationalize_and_factor(const Eigen::MatrixXd& gram, const Ball& ball,
                                     const GroupPtr& group,
                                     const FactorOptions& options = {});

// Already-rational Gram matrix (no rounding, no repair). Requires exact row
// sums zero and exact PSD; used by the link-graph route.
FactorOutcome factor_exact(const MatrixQ& gram,
                           const std::vector<GroupElement>& basis,
                           const GroupPtr& group);

// eta = Delta^2 - kappa_input * Delta - sum_i r_i xi_i* xi_i, exactly.
// Throws MalformedError if some witness is outside the augmentation ideal;
// the result is hermitian with augmentation zero.
ElementQ compute_residual(const Measure& mu, const Rational& kappa_input,
                          const std::vector<Witness>& witnesses);

// eta written over the spanning set of I[Gamma]^her:
//   eta = sum over pairs {x, x^-1} of a * (x + x^-1 - 2),
// one representative per pair (canonical minimum), x != identity. The
// identity coefficient is forced by augmentation zero and checked.
struct ResidualTerm {
  GroupElement rep;
  Rational a;
};
std::vector<ResidualTerm> decompose_residual(const ElementQ& eta);

// B = sum |a| * c(rep). Soundness: B * Delta + sign * eta has the explicit
// hermitian-square expansion produced by absorption_expansion below.
Rational residual_bound(const ElementQ& eta, const OrderUnitTable& table);
std::vector<SquareTerm> absorption_expansion(const ElementQ& eta,
                                             const OrderUnitTable& table,
                                             int sign = 1);

struct CertifyOptions {
  Int denom_cap = Int(1000000);
  long ball_cap = 20000;
  // Re-expand B*Delta + eta as squares and compare coefficientwise before
  // accepting. Cheap at desk scale.
  bool check_absorption = true;
};

struct CertifyOutcome {
  bool accepted = false;
  Certificate certificate;  // meaningful when accepted
  Rational residual_bound_value;
  Rational eta_one_norm;
  Rational kappa_certified;
  std::string message;
};

// rationalize_and_factor -> compute_residual -> residual_bound, then
// kappa_certified = kappa_input - B, accepted iff positive.
CertifyOutcome certify(const GroupPtr& group, const Measure& mu, const Ball& ball,
                       const Rational& kappa_input, const Eigen::MatrixXd& gram,
                       const nlohmann::json& solver_metadata,
                       const CertifyOptions& options = {});

// Packages exact witnesses (the link-graph route, handcrafted certificates)
// without any rounding; residual handling is identical to certify.
CertifyOutcome certify_exact(const GroupPtr& group, const Measure& mu,
                             const Ball& ball, const Rational& kappa_input,
                             const std::vector<Witness>& witnesses,
                             const nlohmann::json& solver_metadata,
                             const CertifyOptions& options = {});

struct VerifyOptions {
  long ball_cap = 20000;
};

struct VerifyReport {
  bool accepted = false;
  int exit_code = 1;  // 0 accept, 1 reject, 2 malformed
  std::string failure;
  std::vector<std::string> passed;
  Rational recomputed_bound;
};

// Recomputes everything it can from (certificate, spec) in exact arithmetic:
// measure validity, ball ordering, witness ideal membership and support, the
// residual, a fresh order-unit bound B'. Accepts iff B' <= B and
// kappa_input - B' >= kappa_certified > 0 with kappa_certified = kappa_input - B.
// Pure function of its inputs.
VerifyReport verify(const Certificate& cert, const GroupSpec& spec,
                    const VerifyOptions& options = {});

}  // namespace ptcert
