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

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "ptcert/errors.hpp"

namespace ptcert {

// Pivoted LDL^T of a symmetric matrix. With an exact scalar this is a
// decision procedure for positive semidefiniteness: `psd` is true iff the
// input is PSD, including rank-deficient cases (elimination stops at a zero
// pivot only when the whole remaining block vanishes).
//
// On success, A == sum_k pivots[k] * col_k * col_k^T exactly, where col_k is
// `factors.col(k)` in the ORIGINAL row indexing and factors(pivot_order[k], k)
// is 1. Deterministic: the pivot is the largest remaining diagonal entry,
// ties broken by smallest index.
template <typename Scalar>
struct LdltResult {
  bool psd = false;
  long n = 0;
  long rank = 0;
  std::vector<long> pivot_order;
  std::vector<Scalar> pivots;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> factors;
  std::optional<Scalar> bad_pivot;
  std::string failure;
};

template <typename Scalar>
LdltResult<Scalar> ldlt_factor(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& input) {
  const long n = input.rows();
  if (input.cols() != n) throw UsageError("ldlt_factor: matrix must be square");
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (input(i, j) != input(j, i)) {
        throw UsageError("ldlt_factor: matrix must be symmetric");
      }
    }
  }

  LdltResult<Scalar> result;
  result.n = n;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w = input;
  std::vector<long> active(n);
  for (long i = 0; i < n; ++i) active[i] = i;

  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> columns;
  while (!active.empty()) {
    long best = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      if (w(active[i], active[i]) > w(active[best], active[best])) {
        best = static_cast<long>(i);
      }
    }
    const long p = active[best];
    const Scalar d = w(p, p);

    if (d < Scalar(0)) {
      result.bad_pivot = d;
      result.failure = "negative pivot at step " + std::to_string(result.rank);
      return result;
    }
    if (d == Scalar(0)) {
      // PSD iff the whole remaining block is zero.
      for (long a : active) {
        for (long b : active) {
          if (w(a, b) != Scalar(0)) {
            result.bad_pivot = Scalar(0);
            result.failure = "zero pivot with nonzero residual block";
            return result;
          }
        }
      }
      break;
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    for (long a : active) col(a) = w(a, p) / d;
    result.pivot_order.push_back(p);
    result.pivots.push_back(d);
    columns.push_back(col);
    ++result.rank;

    active.erase(active.begin() + best);
    for (long a : active) {
      for (long b : active) {
        w(a, b) -= col(a) * d * col(b);
      }
    }
  }

  result.psd = true;
  result.factors.resize(n, result.rank);
  for (long k = 0; k < result.rank; ++k) result.factors.col(k) = columns[k];
  return result;
}

template <typename Scalar>
bool is_psd(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  return ldlt_factor(m).psd;
}

}  // namespace ptcert
