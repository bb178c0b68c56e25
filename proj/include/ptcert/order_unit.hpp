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

#include <memory>
#include <vector>

#include "ptcert/algebra.hpp"

namespace ptcert {

// One hermitian-square summand: weight * vec* vec with weight >= 0 and vec in
// the augmentation ideal.
struct SquareTerm {
  Rational weight;
  ElementQ vec;
};

// Evaluates sum_k weight_k * vec_k* vec_k exactly.
ElementQ expand_squares(const GroupPtr& group, const std::vector<SquareTerm>& terms);

// For a group element x, a positive rational c with
//     c * Delta - (1-x)*(1-x)  =  sum_k w_k v_k* v_k      (exactly)
// together with that expansion. Built from the base case c(s) = 2/mu(s) on
// the support of mu and the doubling step c(yz) = 2c(y) + 2c(z) along a
// shortest-word split, which contributes the explicit square
// (1 - 2y + yz)*(1 - 2y + yz).
struct OrderUnitCoefficient {
  GroupElement x;
  Rational c;
  std::vector<SquareTerm> expansion;
};

// Coefficients for every element of the radius-r ball with respect to
// supp(mu). Each stored expansion is re-expanded and checked exactly during
// construction. Deterministic: splits follow the ball's stored shortest
// words, cut at the midpoint.
class OrderUnitTable {
 public:
  OrderUnitTable(GroupPtr group, Measure mu, long radius, long max_elements = 20000);

  const GroupPtr& group() const { return group_; }
  const Measure& mu() const { return mu_; }
  const Ball& ball() const { return ball_; }
  const ElementQ& delta() const { return delta_; }

  bool contains(const GroupElement& x) const { return ball_.find(x) >= 0; }
  // Throws NotReachableError for elements outside the ball (the remedy is a
  // larger coefficient table).
  const OrderUnitCoefficient& at(const GroupElement& x) const;
  Rational c(const GroupElement& x) const { return at(x).c; }

  // Delta itself as a sum of hermitian squares: (mu(t)/2) * (1-t)*(1-t).
  const std::vector<SquareTerm>& delta_expansion() const { return delta_expansion_; }

 private:
  GroupPtr group_;
  Measure mu_;
  Ball ball_;
  ElementQ delta_;
  std::vector<SquareTerm> delta_expansion_;
  std::vector<OrderUnitCoefficient> coeffs_;  // by ball index
};

}  // namespace ptcert
