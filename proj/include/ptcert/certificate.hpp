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

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptcert/scalars.hpp"

namespace ptcert {

inline constexpr const char* kCertificateVersion = "ptc-1";

// Self-contained exact data, verifiable by rational arithmetic alone.
// Group elements appear as canonical strings, rationals as "p/q" strings;
// witness vectors are ordered by ball index. No floats anywhere.
struct CertificateWitness {
  Rational weight;  // positive
  std::vector<std::pair<std::string, Rational>> vector;
};

struct Certificate {
  std::string version = kCertificateVersion;
  std::string group_digest;
  std::vector<std::pair<std::string, Rational>> mu_weights;
  long ball_radius = 0;
  std::string ball_ordering_digest;
  Rational kappa_input;
  std::vector<CertificateWitness> witnesses;
  Rational residual_bound;
  Rational kappa_certified;  // always kappa_input - residual_bound
  nlohmann::json metadata;   // informational; not part of the claim

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);  // throws MalformedError

  void save_file(const std::string& path) const;
  static Certificate load_file(const std::string& path);
};

}  // namespace ptcert
