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

#include "ptcert/certificate.hpp"

#include <fstream>

#include "ptcert/errors.hpp"

namespace ptcert {

namespace {

using nlohmann::json;

Rational field_rational(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw MalformedError(std::string("certificate: missing rational field '") + key + "'");
  }
  return parse_rational(j[key].get<std::string>());
}

std::string field_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw MalformedError(std::string("certificate: missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

std::vector<std::pair<std::string, Rational>> parse_pair_list(const json& j,
                                                              const char* what) {
  if (!j.is_array()) {
    throw MalformedError(std::string("certificate: '") + what + "' must be an array");
  }
  std::vector<std::pair<std::string, Rational>> out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_string()) {
      throw MalformedError(std::string("certificate: '") + what +
                           "' entries must be [element, \"p/q\"]");
    }
    out.emplace_back(entry[0].get<std::string>(),
                     parse_rational(entry[1].get<std::string>()));
  }
  return out;
}

json dump_pair_list(const std::vector<std::pair<std::string, Rational>>& list) {
  json arr = json::array();
  for (const auto& [key, value] : list) {
    arr.push_back({key, rational_to_string(value)});
  }
  return arr;
}

}  // namespace

json Certificate::to_json() const {
  json j;
  j["version"] = version;
  j["group_digest"] = group_digest;
  j["mu"] = dump_pair_list(mu_weights);
  j["ball_radius"] = ball_radius;
  j["ball_ordering_digest"] = ball_ordering_digest;
  j["kappa_input"] = rational_to_string(kappa_input);
  json ws = json::array();
  for (const auto& w : witnesses) {
    ws.push_back({{"weight", rational_to_string(w.weight)},
                  {"vector", dump_pair_list(w.vector)}});
  }
  j["witnesses"] = ws;
  j["residual_bound"] = rational_to_string(residual_bound);
  j["kappa_certified"] = rational_to_string(kappa_certified);
  j["metadata"] = metadata.is_null() ? json::object() : metadata;
  return j;
}

Certificate Certificate::from_json(const json& j) {
  if (!j.is_object()) throw MalformedError("certificate: not a JSON object");
  Certificate cert;
  cert.version = field_string(j, "version");
  cert.group_digest = field_string(j, "group_digest");
  if (!j.contains("mu")) throw MalformedError("certificate: missing 'mu'");
  cert.mu_weights = parse_pair_list(j["mu"], "mu");
  if (!j.contains("ball_radius") || !j["ball_radius"].is_number_integer()) {
    throw MalformedError("certificate: missing integer 'ball_radius'");
  }
  cert.ball_radius = j["ball_radius"].get<long>();
  if (cert.ball_radius < 0) throw MalformedError("certificate: negative ball_radius");
  cert.ball_ordering_digest = field_string(j, "ball_ordering_digest");
  cert.kappa_input = field_rational(j, "kappa_input");
  if (!j.contains("witnesses") || !j["witnesses"].is_array()) {
    throw MalformedError("certificate: missing 'witnesses'");
  }
  for (const auto& w : j["witnesses"]) {
    if (!w.is_object() || !w.contains("vector")) {
      throw MalformedError("certificate: witness entries need 'weight' and 'vector'");
    }
    CertificateWitness cw;
    cw.weight = field_rational(w, "weight");
    cw.vector = parse_pair_list(w["vector"], "witness vector");
    cert.witnesses.push_back(std::move(cw));
  }
  cert.residual_bound = field_rational(j, "residual_bound");
  cert.kappa_certified = field_rational(j, "kappa_certified");
  cert.metadata = j.contains("metadata") ? j["metadata"] : json::object();
  return cert;
}

void Certificate::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write certificate file '" + path + "'");
  out << to_json().dump(1) << "\n";
  if (!out) throw Error("failed writing certificate file '" + path + "'");
}

Certificate Certificate::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedError("cannot open certificate file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw MalformedError(std::string("certificate parse error: ") + e.what());
  }
  return from_json(j);
}

}  // namespace ptcert
