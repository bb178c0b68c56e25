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
#include <sstream>
#include <string>
#include <utility>

#include "ptcert/errors.hpp"
#include "ptcert/group.hpp"
#include "ptcert/scalars.hpp"

namespace ptcert {

// A finitely supported function Gamma -> Scalar, written as a formal sum of
// group elements. Scalar is Rational on the certification path and double on
// the solver path; only the exact instantiation is legal in verification.
//
// Zero coefficients are never stored and all keys are canonical, so equality
// of values is equality of the maps. Immutable in spirit: operations return
// new values.
template <typename Scalar>
class AlgebraElement {
 public:
  explicit AlgebraElement(GroupPtr group) : group_(std::move(group)) {
    if (!group_) throw UsageError("algebra element needs a group");
  }

  static AlgebraElement zero(GroupPtr group) { return AlgebraElement(std::move(group)); }

  static AlgebraElement unit(GroupPtr group) {
    AlgebraElement out(std::move(group));
    out.set_coeff(out.group_->identity(), Scalar(1));
    return out;
  }

  static AlgebraElement basis(GroupPtr group, const GroupElement& x,
                              const Scalar& c = Scalar(1)) {
    AlgebraElement out(std::move(group));
    out.set_coeff(x, c);
    return out;
  }

  const GroupPtr& group() const { return group_; }
  const ElementMap<Scalar>& coeffs() const { return coeff_; }

  Scalar coeff(const GroupElement& x) const {
    const auto it = coeff_.find(x);
    return it == coeff_.end() ? Scalar(0) : it->second;
  }

  void set_coeff(const GroupElement& x, const Scalar& value) {
    if (value == Scalar(0)) {
      coeff_.erase(x);
    } else {
      coeff_[x] = value;
    }
  }

  void add_coeff(const GroupElement& x, const Scalar& value) {
    const auto it = coeff_.find(x);
    if (it == coeff_.end()) {
      if (value != Scalar(0)) coeff_.emplace(x, value);
      return;
    }
    it->second += value;
    if (it->second == Scalar(0)) coeff_.erase(it);
  }

  bool is_zero() const { return coeff_.empty(); }
  long support_size() const { return static_cast<long>(coeff_.size()); }

  bool operator==(const AlgebraElement& other) const {
    return group_->digest() == other.group_->digest() && coeff_ == other.coeff_;
  }
  bool operator!=(const AlgebraElement& other) const { return !(*this == other); }

  AlgebraElement& operator+=(const AlgebraElement& other) {
    check_same_group(other);
    for (const auto& [x, c] : other.coeff_) add_coeff(x, c);
    return *this;
  }

  AlgebraElement& operator-=(const AlgebraElement& other) {
    check_same_group(other);
    for (const auto& [x, c] : other.coeff_) add_coeff(x, Scalar(-c));
    return *this;
  }

  AlgebraElement& operator*=(const Scalar& s) {
    if (s == Scalar(0)) {
      coeff_.clear();
    } else {
      for (auto& [x, c] : coeff_) c *= s;
    }
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    a += b;
    return a;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    a -= b;
    return a;
  }
  friend AlgebraElement operator*(AlgebraElement a, const Scalar& s) {
    a *= s;
    return a;
  }
  friend AlgebraElement operator*(const Scalar& s, AlgebraElement a) {
    a *= s;
    return a;
  }
  friend AlgebraElement operator-(AlgebraElement a) {
    for (auto& [x, c] : a.coeff_) c = -c;
    return a;
  }

  // Convolution: coefficient of g is sum over x of this(x) * other(x^-1 g).
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    a.check_same_group(b);
    AlgebraElement out(a.group_);
    for (const auto& [x, cx] : a.coeff_) {
      for (const auto& [y, cy] : b.coeff_) {
        out.add_coeff(a.group_->multiply(x, y), cx * cy);
      }
    }
    return out;
  }

  // The star involution: coefficient at x becomes the coefficient at x^-1.
  AlgebraElement star() const {
    AlgebraElement out(group_);
    for (const auto& [x, c] : coeff_) out.coeff_.emplace(group_->inverse(x), c);
    return out;
  }

  // Sum of all coefficients; zero exactly when the element lies in the
  // augmentation ideal.
  Scalar augmentation() const {
    Scalar sum(0);
    for (const auto& [x, c] : coeff_) sum += c;
    return sum;
  }

  bool is_hermitian() const { return *this == star(); }

  Scalar one_norm() const {
    Scalar sum(0);
    for (const auto& [x, c] : coeff_) sum += (c < Scalar(0) ? Scalar(-c) : c);
    return sum;
  }

  std::string to_string() const {
    if (coeff_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [x, c] : coeff_) {
      if (!first) out << " + ";
      first = false;
      out << "(" << scalar_string(c) << ")*" << group_->element_string(x);
    }
    return out.str();
  }

 private:
  static std::string scalar_string(const Rational& v) { return rational_to_string(v); }
  static std::string scalar_string(double v) { return std::to_string(v); }

  void check_same_group(const AlgebraElement& other) const {
    if (group_->digest() != other.group_->digest()) {
      throw UsageError("elements belong to different groups");
    }
  }

  GroupPtr group_;
  ElementMap<Scalar> coeff_;
};

using ElementQ = AlgebraElement<Rational>;
using ElementD = AlgebraElement<double>;

inline ElementD to_double(const ElementQ& a) {
  ElementD out(a.group());
  for (const auto& [x, c] : a.coeffs()) out.set_coeff(x, rational_to_double(c));
  return out;
}

// Finitely supported symmetric probability measure whose support excludes the
// identity. Weights are positive rationals summing to one.
class Measure {
 public:
  Measure(GroupPtr group, ElementMap<Rational> weights)
      : group_(std::move(group)), weights_(std::move(weights)) {
    validate();
  }

  // Uniform on the symmetrized generator set of the group.
  static Measure uniform(const GroupPtr& group) {
    const auto& gens = group->generators();
    if (gens.empty()) throw ValidationError("no generators to put a measure on");
    ElementMap<Rational> w;
    const Rational share = Rational(1) / Rational(static_cast<long>(gens.size()));
    for (const auto& g : gens) w.emplace(g, share);
    return Measure(group, std::move(w));
  }

  static Measure from_json(const GroupPtr& group, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array()) {
      throw MalformedError("measure: missing 'weights' array");
    }
    ElementMap<Rational> w;
    for (const auto& entry : j["weights"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_string()) {
        throw MalformedError("measure weight entries must be [element, \"p/q\"]");
      }
      const GroupElement x = group->element_from_string(entry[0].get<std::string>());
      if (!w.emplace(x, parse_rational(entry[1].get<std::string>())).second) {
        throw MalformedError("measure: duplicate weight for element");
      }
    }
    return Measure(group, std::move(w));
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [x, w] : weights_) {
      arr.push_back({group_->element_string(x), rational_to_string(w)});
    }
    return nlohmann::json{{"weights", arr}};
  }

  const GroupPtr& group() const { return group_; }
  const ElementMap<Rational>& weights() const { return weights_; }

  Rational weight(const GroupElement& x) const {
    const auto it = weights_.find(x);
    return it == weights_.end() ? Rational(0) : it->second;
  }

  std::vector<GroupElement> support() const {
    std::vector<GroupElement> out;
    out.reserve(weights_.size());
    for (const auto& [x, w] : weights_) out.push_back(x);
    return out;
  }

  // True when the support reaches the whole group within `radius` (detected
  // by ball saturation). For infinite families this can only ever confirm
  // generation of the ball, which certificates record as an assumption.
  bool support_saturates(long radius, long max_elements = 20000) const {
    const Ball ball = enumerate_ball(*group_, support(), radius,
                                     {.max_elements = max_elements,
                                      .build_pair_table = false});
    return ball.saturated;
  }

 private:
  void validate() {
    if (weights_.empty()) throw ValidationError("measure: empty support");
    Rational sum(0);
    for (const auto& [x, w] : weights_) {
      group_->check_element(x);
      if (w <= 0) throw ValidationError("measure: weights must be positive");
      if (group_->is_identity(x)) {
        throw ValidationError("measure: identity in support");
      }
      if (weight(group_->inverse(x)) != w) {
        throw ValidationError("measure: not symmetric at " + group_->element_string(x));
      }
      sum += w;
    }
    if (sum != 1) {
      throw ValidationError("measure: weights sum to " + rational_to_string(sum) +
                            ", expected 1");
    }
  }

  GroupPtr group_;
  ElementMap<Rational> weights_;
};

// The Laplacian 1 - sum_x mu(x) x. Also evaluates the sum-of-squares form
// (1/2) sum_x mu(x) (1-x)*(1-x) independently and insists the two agree.
inline ElementQ laplacian(const Measure& mu) {
  const GroupPtr& group = mu.group();
  ElementQ delta = ElementQ::unit(group);
  for (const auto& [x, w] : mu.weights()) {
    delta.add_coeff(x, -w);
  }

  ElementQ check = ElementQ::zero(group);
  const ElementQ one = ElementQ::unit(group);
  for (const auto& [x, w] : mu.weights()) {
    const ElementQ lever = one - ElementQ::basis(group, x);
    check += (lever.star() * lever) * (w / 2);
  }
  if (check != delta) {
    throw InternalError("laplacian: the two defining formulas disagree");
  }
  return delta;
}

}  // namespace ptcert
