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

#include "ptcert/scalars.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace ptcert {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) {
      throw MalformedError("not a rational: '" + text + "'");
    }
    return Rational(Int(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw MalformedError("not a rational: '" + text + "'");
  }
  const Int d(den);
  if (d == 0) throw MalformedError("zero denominator: '" + text + "'");
  return Rational(Int(num)) / Rational(d);
}

std::string rational_to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double rational_to_double(const Rational& value) {
  return value.convert_to<double>();
}

Rational rational_from_double_exact(double value) {
  if (!std::isfinite(value)) {
    throw NumericError("non-finite double in exact conversion");
  }
  if (value == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(value, &exp);
  // mant in [0.5, 1); mant * 2^53 is an exact 53-bit integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  const int e2 = exp - 53;
  Int pow2(1);
  pow2 <<= (e2 >= 0 ? e2 : -e2);
  if (e2 >= 0) {
    r *= Rational(pow2);
  } else {
    r /= Rational(pow2);
  }
  return r;
}

Rational best_rational_approx(const Rational& value, const Int& max_denominator) {
  if (max_denominator < 1) throw UsageError("denominator cap must be >= 1");
  if (denominator(value) <= max_denominator) return value;
  const bool negative = value < 0;
  Rational x = negative ? Rational(-value) : value;

  // Convergents p/q of the continued fraction of x.
  Int p_prev = 1, q_prev = 0;
  Int num = numerator(x), den = denominator(x);
  Int a = num / den;  // floor, x >= 0
  Int p_cur = a, q_cur = 1;
  Rational frac = x - Rational(a);
  while (frac != 0) {
    const Rational inv = Rational(1) / frac;
    a = numerator(inv) / denominator(inv);
    frac = inv - Rational(a);
    const Int p_next = a * p_cur + p_prev;
    const Int q_next = a * q_cur + q_prev;
    if (q_next > max_denominator) {
      // Best semiconvergent under the cap, then compare with the last
      // convergent exactly.
      const Int t = (max_denominator - q_prev) / q_cur;
      const Rational last = Rational(p_cur) / Rational(q_cur);
      Rational best = last;
      if (t >= 1) {
        const Rational semi =
            Rational(t * p_cur + p_prev) / Rational(t * q_cur + q_prev);
        const Rational err_semi = abs(x - semi);
        const Rational err_last = abs(x - last);
        if (err_semi < err_last) best = semi;
      }
      return negative ? Rational(-best) : best;
    }
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
  }
  const Rational exact = Rational(p_cur) / Rational(q_cur);
  return negative ? Rational(-exact) : exact;
}

Rational round_to_denominator_cap(double value, const Int& max_denominator) {
  return best_rational_approx(rational_from_double_exact(value), max_denominator);
}

Eigen::MatrixXd matrix_to_double(const MatrixQ& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(i, j) = rational_to_double(m(i, j));
    }
  }
  return out;
}

}  // namespace ptcert
