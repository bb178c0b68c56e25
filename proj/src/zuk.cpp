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

#include "ptcert/zuk.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "ptcert/ldlt.hpp"
#include "ptcert/sos.hpp"

namespace ptcert {

LinkGraph build_link(const GroupPtr& group, const std::vector<GroupElement>& s) {
  LinkGraph link;
  link.group = group;

  ElementMap<long> vertex_index;
  for (const auto& x : s) {
    group->check_element(x);
    if (group->is_identity(x)) {
      throw ValidationError("link: identity contained in the generating set");
    }
    vertex_index.emplace(x, 0);
  }
  if (vertex_index.empty()) throw ValidationError("link: empty generating set");
  for (const auto& [x, unused] : vertex_index) {
    if (!vertex_index.count(group->inverse(x))) {
      throw ValidationError("link: generating set is not symmetric at " +
                            group->element_string(x));
    }
  }
  long next = 0;
  for (auto& [x, idx] : vertex_index) idx = next++;
  link.vertices.reserve(vertex_index.size());
  for (const auto& [x, idx] : vertex_index) link.vertices.push_back(x);

  const long n = static_cast<long>(link.vertices.size());
  link.degree.assign(n, 0);
  for (long i = 0; i < n; ++i) {
    const GroupElement inv_i = group->inverse(link.vertices[i]);
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;  // x^-1 x = 1 is never in S
      const GroupElement p = group->multiply(inv_i, link.vertices[j]);
      if (vertex_index.count(p)) {
        link.edges.emplace_back(i, j);
        ++link.degree[i];
      }
    }
  }
  link.edge_count = static_cast<long>(link.edges.size());

  // Connectivity of the undirected graph, by breadth-first search.
  std::vector<char> seen(n, 0);
  std::vector<long> stack{0};
  seen[0] = 1;
  long reached = 1;
  std::vector<std::vector<long>> adjacency(n);
  for (const auto& [i, j] : link.edges) adjacency[i].push_back(j);
  while (!stack.empty()) {
    const long v = stack.back();
    stack.pop_back();
    for (long w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  link.connected = (reached == n) && link.edge_count > 0;

  if (link.edge_count > 0 &&
      std::all_of(link.degree.begin(), link.degree.end(), [](long d) { return d > 0; })) {
    ElementMap<Rational> weights;
    for (long i = 0; i < n; ++i) {
      weights.emplace(link.vertices[i],
                      Rational(link.degree[i]) / Rational(link.edge_count));
    }
    link.mu.emplace(group, std::move(weights));
  }
  return link;
}

MatrixQ link_laplacian(const LinkGraph& link) {
  const Measure& mu = link.measure();
  const long n = static_cast<long>(link.vertices.size());
  MatrixQ lambda = MatrixQ::Zero(n, n);
  for (long i = 0; i < n; ++i) lambda(i, i) = mu.weight(link.vertices[i]);
  const Rational edge_weight = Rational(-1) / Rational(link.edge_count);
  for (const auto& [i, j] : link.edges) lambda(i, j) = edge_weight;

  // Kills constants: row sums are mu(x) - deg(x)/|E| = 0 by construction.
  for (long i = 0; i < n; ++i) {
    Rational sum(0);
    for (long j = 0; j < n; ++j) sum += lambda(i, j);
    if (sum != 0) throw InternalError("link Laplacian does not annihilate constants");
  }
  return lambda;
}

LinkSpectralGap link_spectral_gap(const LinkGraph& link, const Int& denom_cap) {
  if (!link.connected) {
    throw ValidationError("link graph is disconnected; zero eigenvalue is not simple");
  }
  const Measure& mu = link.measure();
  const long n = static_cast<long>(link.vertices.size());
  const MatrixQ lambda = link_laplacian(link);

  // Symmetrized operator D^{-1/2} Lambda D^{-1/2}, similar to the weighted-
  // space operator D^{-1} Lambda.
  Eigen::MatrixXd sym(n, n);
  std::vector<double> root(n);
  for (long i = 0; i < n; ++i) {
    root[i] = std::sqrt(rational_to_double(mu.weight(link.vertices[i])));
  }
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      sym(i, j) = rational_to_double(lambda(i, j)) / (root[i] * root[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd values = eig.eigenvalues();
  if (std::abs(values(0)) > 1e-8) {
    throw NumericError("link Laplacian lost its zero eigenvalue numerically");
  }
  if (n < 2 || values(1) <= 1e-8) {
    throw ValidationError("link spectral gap vanishes (graph effectively disconnected)");
  }

  LinkSpectralGap out;
  out.lambda_numeric = values(1);
  out.lambda_hat = best_rational_approx(rational_from_double_exact(out.lambda_numeric),
                                        denom_cap);
  return out;
}

MatrixQ zuk_gram_matrix(const LinkGraph& link, const Rational& lambda_hat) {
  if (lambda_hat == 0) throw UsageError("lambda_hat must be nonzero");
  const Measure& mu = link.measure();
  const long n = static_cast<long>(link.vertices.size());
  const MatrixQ lambda = link_laplacian(link);
  const Rational inv_lambda = Rational(1) / lambda_hat;
  MatrixQ q(n, n);
  for (long i = 0; i < n; ++i) {
    const Rational mu_i = mu.weight(link.vertices[i]);
    for (long j = 0; j < n; ++j) {
      const Rational mu_j = mu.weight(link.vertices[j]);
      q(i, j) = inv_lambda * lambda(i, j) + mu_i * mu_j - (i == j ? mu_i : Rational(0));
    }
  }
  return q;
}

ZukOutcome zuk_certificate(const LinkGraph& link,
                           std::optional<Rational> lambda_hat_override,
                           const CertifyOptions& options) {
  if (!link.connected) {
    throw InfeasibleError("link graph is disconnected; the criterion does not apply");
  }
  const Measure& mu = link.measure();
  const GroupPtr& group = link.group;

  std::vector<Rational> candidates;
  if (lambda_hat_override) {
    candidates.push_back(*lambda_hat_override);
  } else {
    // Continued-fraction convergents of the float eigenvalue, largest first.
    // The exact PSD check below is the arbiter; convergents above the true
    // gap simply fail it and the next one is tried.
    const LinkSpectralGap gap = link_spectral_gap(link, options.denom_cap);
    const Rational seed = rational_from_double_exact(gap.lambda_numeric);
    std::vector<Rational> pool;
    pool.push_back(gap.lambda_hat);
    {
      bool done = false;
      Int p_prev = 1, q_prev = 0;
      Int a = numerator(seed) / denominator(seed);
      Int p_cur = a, q_cur = 1;
      Rational frac = seed - Rational(a);
      pool.push_back(Rational(p_cur) / Rational(q_cur));
      while (!done && frac != 0) {
        const Rational inv = Rational(1) / frac;
        a = numerator(inv) / denominator(inv);
        frac = inv - Rational(a);
        const Int p_next = a * p_cur + p_prev;
        const Int q_next = a * q_cur + q_prev;
        if (q_next > options.denom_cap) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        pool.push_back(Rational(p_cur) / Rational(q_cur));
      }
      // A few explicit shrinks in case every convergent overshoots.
      for (int k : {20, 12, 6}) {
        Int scale(1);
        scale <<= k;
        pool.push_back(best_rational_approx(
            seed * (Rational(1) - Rational(1) / Rational(scale)), options.denom_cap));
      }
    }
    const Rational ceiling = seed + Rational(1, 1000000);
    for (const auto& c : pool) {
      if (c > Rational(1, 2) && c <= ceiling) candidates.push_back(c);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Rational& a, const Rational& b) { return a > b; });
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) {
      throw InfeasibleError("no candidate lambda_hat above 1/2; the criterion fails here");
    }
  }

  std::string last_failure;
  for (const auto& lambda_hat : candidates) {
    if (lambda_hat <= Rational(1, 2)) {
      throw InfeasibleError("lambda_hat = " + rational_to_string(lambda_hat) +
                            " does not exceed 1/2; the criterion gives no certificate");
    }
    const MatrixQ q = zuk_gram_matrix(link, lambda_hat);
    const auto fact = ldlt_factor(q);
    if (!fact.psd) {
      last_failure = "lambda_hat = " + rational_to_string(lambda_hat) +
                     " too large (" + fact.failure + ")";
      if (lambda_hat_override) {
        throw InfeasibleError(last_failure + "; retry with a smaller lambda_hat");
      }
      continue;
    }

    const Rational kappa = Rational(2) - Rational(1) / lambda_hat;
    // The identity holds for every nonzero lambda_hat, PSD or not; a failure
    // here is a bug, not bad input.
    const ElementQ delta = laplacian(mu);
    const ElementQ image = gram_image(group, link.vertices, q);
    if (image != delta * delta - delta * kappa) {
      throw InternalError("link identity failed: gram image != Delta^2 - kappa*Delta");
    }

    const Ball ball = enumerate_ball(*group, mu.support(), 1,
                                     {.max_elements = options.ball_cap,
                                      .build_pair_table = false});
    FactorOutcome factored = factor_exact(q, link.vertices, group);
    nlohmann::json meta{{"route", "link-graph"},
                        {"lambda_hat", rational_to_string(lambda_hat)}};
    ZukOutcome out;
    out.lambda_hat = lambda_hat;
    out.kappa_input = kappa;
    out.gram = q;
    out.certified = certify_exact(group, mu, ball, kappa, factored.witnesses, meta,
                                  options);
    if (!out.certified.accepted) {
      throw InternalError("link-route certificate unexpectedly rejected: " +
                          out.certified.message);
    }
    return out;
  }
  throw InfeasibleError("no lambda_hat candidate passed the exact PSD check (" +
                        last_failure + ")");
}

}  // namespace ptcert
