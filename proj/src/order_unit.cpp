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

#include "ptcert/order_unit.hpp"

namespace ptcert {

ElementQ expand_squares(const GroupPtr& group, const std::vector<SquareTerm>& terms) {
  ElementQ sum = ElementQ::zero(group);
  for (const auto& term : terms) {
    sum += (term.vec.star() * term.vec) * term.weight;
  }
  return sum;
}

OrderUnitTable::OrderUnitTable(GroupPtr group, Measure mu, long radius,
                               long max_elements)
    : group_(std::move(group)),
      mu_(std::move(mu)),
      ball_(enumerate_ball(*group_, mu_.support(), radius,
                           {.max_elements = max_elements, .build_pair_table = false})),
      delta_(laplacian(mu_)) {
  const ElementQ one = ElementQ::unit(group_);
  for (const auto& [t, w] : mu_.weights()) {
    delta_expansion_.push_back({w / 2, one - ElementQ::basis(group_, t)});
  }

  // A partial product of a stored shortest word; every prefix/suffix product
  // of a geodesic is again in the ball, at its exact length.
  auto word_product = [&](const std::vector<long>& word, long from, long to) {
    GroupElement p = group_->identity();
    for (long i = from; i < to; ++i) p = group_->multiply(p, ball_.gens[word[i]]);
    return p;
  };

  coeffs_.reserve(ball_.size());
  for (long idx = 0; idx < ball_.size(); ++idx) {
    const GroupElement& x = ball_.elements[idx];
    OrderUnitCoefficient entry;
    entry.x = x;
    const long len = ball_.lengths[idx];
    if (len == 0) {
      entry.c = 0;
    } else if (len == 1) {
      // 2*Delta = sum_t mu(t) (1-t)*(1-t), so (2/mu(s))*Delta dominates
      // (1-s)*(1-s) with the remaining terms as the explicit expansion.
      const Rational ws = mu_.weight(x);
      if (ws == 0) {
        throw NotReachableError("ball generator " + group_->element_string(x) +
                                " is outside supp(mu)");
      }
      entry.c = Rational(2) / ws;
      for (const auto& [t, wt] : mu_.weights()) {
        if (t == x) continue;
        entry.expansion.push_back({wt / ws, one - ElementQ::basis(group_, t)});
      }
    } else {
      // Split the stored geodesic at the midpoint: x = y z with both factors
      // strictly shorter, and
      //   (1-x)*(1-x) = 2(1-y)*(1-y) + 2(1-z)*(1-z) - w*w,  w = 1 - 2y + x.
      const std::vector<long>& word = ball_.words[idx];
      const long cut = len / 2;
      const GroupElement y = word_product(word, 0, cut);
      const GroupElement z = word_product(word, cut, len);
      const long yi = ball_.find(y);
      const long zi = ball_.find(z);
      if (yi < 0 || zi < 0 || yi >= idx || zi >= idx) {
        throw InternalError("order-unit split fell outside the processed ball");
      }
      entry.c = 2 * coeffs_[yi].c + 2 * coeffs_[zi].c;
      for (const auto& part : {yi, zi}) {
        for (const auto& term : coeffs_[part].expansion) {
          entry.expansion.push_back({term.weight * 2, term.vec});
        }
      }
      ElementQ w = one - ElementQ::basis(group_, y, Rational(2)) +
                   ElementQ::basis(group_, x);
      entry.expansion.push_back({Rational(1), std::move(w)});
    }

    // Exact re-expansion check: c*Delta - (1-x)*(1-x) == sum of the squares.
    const ElementQ lever = one - ElementQ::basis(group_, x);
    const ElementQ claimed = delta_ * entry.c - lever.star() * lever;
    if (expand_squares(group_, entry.expansion) != claimed) {
      throw InternalError("order-unit expansion failed to verify for " +
                          group_->element_string(x));
    }
    coeffs_.push_back(std::move(entry));
  }
}

const OrderUnitCoefficient& OrderUnitTable::at(const GroupElement& x) const {
  const long idx = ball_.find(x);
  if (idx < 0) {
    throw NotReachableError("no order-unit coefficient for " +
                            group_->element_string(x) +
                            " (enlarge the coefficient table radius)");
  }
  return coeffs_[idx];
}

}  // namespace ptcert
