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

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>
#include <string>

#include "ptcert/errors.hpp"

namespace ptcert {

// Exact scalars. Expression templates are disabled so the types behave as
// plain values inside Eigen matrices.
using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

using MatrixQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Strict "p" / "-p/q" syntax, always reduced with positive denominator on
// output. Throws MalformedError on anything else (including q == 0).
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& value);

double rational_to_double(const Rational& value);

// The exact dyadic rational equal to a finite double.
Rational rational_from_double_exact(double value);

// Best rational approximation to `value` with denominator <= max_denominator,
// by continued fractions (convergent or best semiconvergent). Ties prefer the
// smaller denominator, so the result is deterministic.
Rational best_rational_approx(const Rational& value, const Int& max_denominator);

// Convenience: exact dyadic image of a double, then best_rational_approx.
Rational round_to_denominator_cap(double value, const Int& max_denominator);

Eigen::MatrixXd matrix_to_double(const MatrixQ& m);

}  // namespace ptcert
