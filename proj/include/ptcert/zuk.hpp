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

#include <optional>
#include <utility>
#include <vector>

#include "ptcert/algebra.hpp"
#include "ptcert/certifier.hpp"

namespace ptcert {

// Graph on a symmetric generating set S (identity excluded): ordered edges
// (x, y) whenever x^-1 y lies in S, degrees, and the induced probability
// measure mu(x) = deg(x) / |E|.
struct LinkGraph {
  GroupPtr group;
  std::vector<GroupElement> vertices;  // S, canonically sorted
  std::vector<std::pair<long, long>> edges;  // ordered pairs of vertex indices
  std::vector<long> degree;
  long edge_count = 0;
  bool connected = false;
  std::optional<Measure> mu;  // defined when every degree is positive

  const Measure& measure() const {
    if (!mu) throw ValidationError("link graph has an isolated vertex; no measure");
    return *mu;
  }
};

// Validates that S is symmetric and avoids the identity.
LinkGraph build_link(const GroupPtr& group, const std::vector<GroupElement>& s);

// The bilinear-form matrix of the link Laplacian on the mu-weighted space:
// diagonal mu(x), off-diagonal -1/|E| on edges. Applied to the constant
// vector it gives zero, and it is entrywise symmetric.
MatrixQ link_laplacian(const LinkGraph& link);

struct LinkSpectralGap {
  double lambda_numeric = 0;  // advisory float value
  Rational lambda_hat;        // certifiable rational lower bound candidate
};

// Smallest nonzero eigenvalue of the Laplacian, computed on the
// D^{1/2}-conjugated symmetric matrix. lambda_hat is the largest continued-
// fraction candidate below the float value that passes the exact PSD check;
// the PSD check is the certified statement, the float is advisory only.
LinkSpectralGap link_spectral_gap(const LinkGraph& link, const Int& denom_cap = Int(1000000));

// The exact Gram matrix lambda_hat^-1 * Lambda + P - I over S, with
// P_{x,y} = mu(x) mu(y) and I_{x,y} = delta_{x,y} mu(x).
MatrixQ zuk_gram_matrix(const LinkGraph& link, const Rational& lambda_hat);

struct ZukOutcome {
  Rational lambda_hat;
  Rational kappa_input;  // 2 - 1/lambda_hat
  MatrixQ gram;
  CertifyOutcome certified;
};

// End to end: forms the exact Gram matrix, proves it PSD by exact LDL^T
// (which certifies lambda >= lambda_hat), checks the algebraic identity
//   sum_{x,y} Q_{x,y} x^-1 y == Delta^2 - (2 - 1/lambda_hat) Delta
// coefficientwise, and factors Q into an exact certificate with zero
// residual. Requires lambda_hat > 1/2. When no lambda_hat override is given,
// candidates from link_spectral_gap are tried largest first.
ZukOutcome zuk_certificate(const LinkGraph& link,
                           std::optional<Rational> lambda_hat_override = std::nullopt,
                           const CertifyOptions& options = {});

}  // namespace ptcert
