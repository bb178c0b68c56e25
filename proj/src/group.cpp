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

#include "ptcert/group.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ptcert/digest.hpp"
#include "ptcert/errors.hpp"

namespace ptcert {

namespace {

using nlohmann::json;

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

long to_long(const Int& v) { return v.convert_to<long>(); }

Int json_to_int(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      return Int(s);
    } catch (const std::exception&) {
      throw MalformedError("not an integer: '" + s + "'");
    }
  }
  throw MalformedError("expected integer entry");
}

// Fraction-free Gaussian elimination; exact over Int.
Int bareiss_determinant(std::vector<Int> a, long n) {
  if (n == 0) return Int(1);
  Int prev(1);
  int sign = 1;
  for (long k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      long r = -1;
      for (long i = k + 1; i < n; ++i) {
        if (a[i * n + k] != 0) {
          r = i;
          break;
        }
      }
      if (r < 0) return Int(0);
      for (long j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i) {
      for (long j = k + 1; j < n; ++j) {
        a[i * n + j] =
            (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
      }
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  Int det = a[(n - 1) * n + (n - 1)];
  return sign < 0 ? Int(-det) : det;
}

// Adjugate-based inverse; requires det = +-1 so the result stays integral.
std::vector<Int> integer_matrix_inverse(const std::vector<Int>& a, long n) {
  const Int det = bareiss_determinant(a, n);
  if (det != 1 && det != -1) {
    throw ValidationError("matrix is not invertible over the integers");
  }
  std::vector<Int> inv(n * n);
  std::vector<Int> minor((n - 1) * (n - 1));
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      long r = 0;
      for (long ii = 0; ii < n; ++ii) {
        if (ii == i) continue;
        long c = 0;
        for (long jj = 0; jj < n; ++jj) {
          if (jj == j) continue;
          minor[r * (n - 1) + c] = a[ii * n + jj];
          ++c;
        }
        ++r;
      }
      Int cof = bareiss_determinant(minor, n - 1);
      if (((i + j) & 1) != 0) cof = -cof;
      // adj(a)_{ji} = cof; inverse = adj / det with det in {1, -1}.
      inv[j * n + i] = det == 1 ? cof : Int(-cof);
    }
  }
  return inv;
}

std::vector<Int> free_reduce_concat(const std::vector<Int>& g,
                                    const std::vector<Int>& h) {
  std::vector<Int> out = g;
  for (const Int& letter : h) {
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

}  // namespace

std::string family_name(GroupFamily family) {
  switch (family) {
    case GroupFamily::FiniteTable:
      return "finite_table";
    case GroupFamily::Permutation:
      return "permutation";
    case GroupFamily::IntegerMatrix:
      return "integer_matrix";
    case GroupFamily::Free:
      return "free";
  }
  throw Error("unknown family");
}

GroupFamily family_from_name(const std::string& name) {
  if (name == "finite_table") return GroupFamily::FiniteTable;
  if (name == "permutation") return GroupFamily::Permutation;
  if (name == "integer_matrix") return GroupFamily::IntegerMatrix;
  if (name == "free") return GroupFamily::Free;
  throw MalformedError("unknown group family '" + name + "'");
}

int compare_elements(const GroupElement& a, const GroupElement& b) {
  if (a.data.size() != b.data.size()) {
    return a.data.size() < b.data.size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (a.data[i] != b.data[i]) return a.data[i] < b.data[i] ? -1 : 1;
  }
  return 0;
}

GroupSpec GroupSpec::from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw MalformedError("group spec: missing 'family'");
  }
  GroupSpec spec;
  spec.family = family_from_name(j["family"].get<std::string>());
  switch (spec.family) {
    case GroupFamily::FiniteTable: {
      if (!j.contains("table") || !j["table"].is_array()) {
        throw MalformedError("finite_table spec: missing 'table'");
      }
      for (const auto& row : j["table"]) {
        if (!row.is_array()) throw MalformedError("table rows must be arrays");
        std::vector<long> r;
        for (const auto& v : row) r.push_back(to_long(json_to_int(v)));
        spec.table.push_back(std::move(r));
      }
      const long n = static_cast<long>(spec.table.size());
      if (j.contains("element_names")) {
        for (const auto& v : j["element_names"]) {
          if (!v.is_string()) throw MalformedError("element_names entries must be strings");
          spec.element_names.push_back(v.get<std::string>());
        }
      } else {
        for (long i = 0; i < n; ++i) spec.element_names.push_back("g" + std::to_string(i));
      }
      if (!j.contains("generators") || !j["generators"].is_array()) {
        throw MalformedError("finite_table spec: missing 'generators'");
      }
      for (const auto& v : j["generators"]) {
        if (v.is_string()) {
          const std::string name = v.get<std::string>();
          const auto it = std::find(spec.element_names.begin(),
                                    spec.element_names.end(), name);
          if (it == spec.element_names.end()) {
            throw MalformedError("unknown generator name '" + name + "'");
          }
          spec.generator_indices.push_back(it - spec.element_names.begin());
        } else {
          spec.generator_indices.push_back(to_long(json_to_int(v)));
        }
      }
      break;
    }
    case GroupFamily::Permutation: {
      if (!j.contains("degree")) throw MalformedError("permutation spec: missing 'degree'");
      spec.degree = to_long(json_to_int(j["degree"]));
      if (!j.contains("generators") || !j["generators"].is_array()) {
        throw MalformedError("permutation spec: missing 'generators'");
      }
      for (const auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("name") || !g.contains("images")) {
          throw MalformedError("permutation generators need 'name' and 'images'");
        }
        std::vector<long> images;
        for (const auto& v : g["images"]) images.push_back(to_long(json_to_int(v)));
        spec.perm_generators.emplace_back(g["name"].get<std::string>(), std::move(images));
      }
      break;
    }
    case GroupFamily::IntegerMatrix: {
      if (!j.contains("dimension")) throw MalformedError("integer_matrix spec: missing 'dimension'");
      spec.dimension = to_long(json_to_int(j["dimension"]));
      if (!j.contains("generators") || !j["generators"].is_array()) {
        throw MalformedError("integer_matrix spec: missing 'generators'");
      }
      for (const auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("name") || !g.contains("matrix")) {
          throw MalformedError("matrix generators need 'name' and 'matrix'");
        }
        std::vector<Int> flat;
        for (const auto& row : g["matrix"]) {
          if (!row.is_array()) throw MalformedError("matrix rows must be arrays");
          for (const auto& v : row) flat.push_back(json_to_int(v));
        }
        spec.matrix_generators.emplace_back(g["name"].get<std::string>(), std::move(flat));
      }
      break;
    }
    case GroupFamily::Free: {
      if (!j.contains("generators") || !j["generators"].is_array()) {
        throw MalformedError("free spec: missing 'generators'");
      }
      for (const auto& v : j["generators"]) {
        if (!v.is_string()) throw MalformedError("free generators must be letter names");
        spec.letters.push_back(v.get<std::string>());
      }
      break;
    }
  }
  return spec;
}

GroupSpec GroupSpec::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedError("cannot open group spec '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw MalformedError("group spec '" + path + "': " + e.what());
  }
  return from_json(j);
}

json GroupSpec::canonical_json() const {
  json j;
  j["family"] = family_name(family);
  switch (family) {
    case GroupFamily::FiniteTable: {
      j["table"] = table;
      j["element_names"] = element_names;
      std::vector<long> gens = generator_indices;
      std::sort(gens.begin(), gens.end());
      gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
      j["generators"] = gens;
      break;
    }
    case GroupFamily::Permutation: {
      j["degree"] = degree;
      json gens = json::array();
      for (const auto& [name, images] : perm_generators) {
        gens.push_back({{"name", name}, {"images", images}});
      }
      j["generators"] = gens;
      break;
    }
    case GroupFamily::IntegerMatrix: {
      j["dimension"] = dimension;
      json gens = json::array();
      for (const auto& [name, flat] : matrix_generators) {
        json rows = json::array();
        for (long r = 0; r < dimension; ++r) {
          json row = json::array();
          for (long c = 0; c < dimension; ++c) row.push_back(flat[r * dimension + c].str());
          rows.push_back(row);
        }
        gens.push_back({{"name", name}, {"matrix", rows}});
      }
      j["generators"] = gens;
      break;
    }
    case GroupFamily::Free:
      j["generators"] = letters;
      break;
  }
  return j;
}

std::string GroupSpec::canonical_bytes() const { return canonical_json().dump(); }

std::string GroupSpec::digest() const { return sha256_hex(canonical_bytes()); }

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  validate();
  digest_ = spec_.digest();
  build_generators();
}

std::shared_ptr<const Group> Group::make(GroupSpec spec) {
  return std::make_shared<const Group>(std::move(spec));
}

std::shared_ptr<const Group> Group::load(const std::string& path) {
  return make(GroupSpec::load_file(path));
}

void Group::validate() {
  switch (spec_.family) {
    case GroupFamily::FiniteTable: {
      const long n = static_cast<long>(spec_.table.size());
      if (n == 0) throw ValidationError("finite_table: empty table");
      for (const auto& row : spec_.table) {
        if (static_cast<long>(row.size()) != n) {
          throw ValidationError("finite_table: table is not square");
        }
        for (long v : row) {
          if (v < 0 || v >= n) throw ValidationError("finite_table: entry out of range");
        }
      }
      // Latin square: rows and columns are permutations.
      for (long i = 0; i < n; ++i) {
        std::vector<char> row_seen(n, 0), col_seen(n, 0);
        for (long k = 0; k < n; ++k) {
          if (row_seen[spec_.table[i][k]]++) {
            throw ValidationError("finite_table: row " + std::to_string(i) + " is not a permutation");
          }
          if (col_seen[spec_.table[k][i]]++) {
            throw ValidationError("finite_table: column " + std::to_string(i) + " is not a permutation");
          }
        }
      }
      table_identity_ = -1;
      for (long e = 0; e < n; ++e) {
        bool ok = true;
        for (long x = 0; x < n && ok; ++x) {
          ok = spec_.table[e][x] == x && spec_.table[x][e] == x;
        }
        if (ok) {
          table_identity_ = e;
          break;
        }
      }
      if (table_identity_ < 0) throw ValidationError("finite_table: no two-sided identity");
      table_inverse_.assign(n, -1);
      for (long g = 0; g < n; ++g) {
        for (long h = 0; h < n; ++h) {
          if (spec_.table[g][h] == table_identity_) {
            if (spec_.table[h][g] != table_identity_) {
              throw ValidationError("finite_table: one-sided inverse at index " + std::to_string(g));
            }
            table_inverse_[g] = h;
            break;
          }
        }
      }
      if (n <= 64) {
        for (long a = 0; a < n; ++a) {
          for (long b = 0; b < n; ++b) {
            for (long c = 0; c < n; ++c) {
              if (spec_.table[spec_.table[a][b]][c] != spec_.table[a][spec_.table[b][c]]) {
                throw ValidationError("finite_table: table is not associative");
              }
            }
          }
        }
      }
      if (static_cast<long>(spec_.element_names.size()) != n) {
        throw ValidationError("finite_table: element_names size mismatch");
      }
      for (const auto& name : spec_.element_names) {
        if (!valid_name(name)) throw ValidationError("finite_table: bad element name '" + name + "'");
      }
      {
        auto names = spec_.element_names;
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
          throw ValidationError("finite_table: duplicate element names");
        }
      }
      if (spec_.generator_indices.empty()) {
        throw ValidationError("finite_table: no generators");
      }
      for (long g : spec_.generator_indices) {
        if (g < 0 || g >= n) throw ValidationError("finite_table: generator index out of range");
        if (g == table_identity_) {
          throw ValidationError("finite_table: identity listed as a generator");
        }
      }
      break;
    }
    case GroupFamily::Permutation: {
      if (spec_.degree < 1) throw ValidationError("permutation: degree must be >= 1");
      if (spec_.perm_generators.empty()) throw ValidationError("permutation: no generators");
      for (const auto& [name, images] : spec_.perm_generators) {
        if (!valid_name(name) || name == "e") {
          throw ValidationError("permutation: bad generator name '" + name + "'");
        }
        if (static_cast<long>(images.size()) != spec_.degree) {
          throw ValidationError("permutation: generator '" + name + "' has wrong degree");
        }
        std::vector<char> seen(spec_.degree, 0);
        bool is_id = true;
        for (long i = 0; i < spec_.degree; ++i) {
          const long v = images[i];
          if (v < 0 || v >= spec_.degree || seen[v]++) {
            throw ValidationError("permutation: generator '" + name + "' is not a permutation");
          }
          if (v != i) is_id = false;
        }
        if (is_id) throw ValidationError("permutation: identity listed as a generator");
      }
      break;
    }
    case GroupFamily::IntegerMatrix: {
      if (spec_.dimension < 1) throw ValidationError("integer_matrix: dimension must be >= 1");
      if (spec_.matrix_generators.empty()) throw ValidationError("integer_matrix: no generators");
      const long d = spec_.dimension;
      for (const auto& [name, flat] : spec_.matrix_generators) {
        if (!valid_name(name) || name == "e") {
          throw ValidationError("integer_matrix: bad generator name '" + name + "'");
        }
        if (static_cast<long>(flat.size()) != d * d) {
          throw ValidationError("integer_matrix: generator '" + name + "' has wrong shape");
        }
        const Int det = bareiss_determinant(flat, d);
        if (det != 1 && det != -1) {
          throw ValidationError("integer_matrix: generator '" + name + "' has determinant " +
                                det.str() + ", must be +-1");
        }
        bool is_id = true;
        for (long i = 0; i < d && is_id; ++i) {
          for (long j = 0; j < d && is_id; ++j) {
            is_id = flat[i * d + j] == (i == j ? 1 : 0);
          }
        }
        if (is_id) throw ValidationError("integer_matrix: identity listed as a generator");
      }
      break;
    }
    case GroupFamily::Free: {
      if (spec_.letters.empty()) throw ValidationError("free: rank must be >= 1");
      for (const auto& name : spec_.letters) {
        if (!valid_name(name) || name == "e") {
          throw ValidationError("free: bad letter name '" + name + "'");
        }
      }
      auto names = spec_.letters;
      std::sort(names.begin(), names.end());
      if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
        throw ValidationError("free: duplicate letter names");
      }
      break;
    }
  }
}

void Group::build_generators() {
  ElementMap<char> set;
  auto add = [&](const GroupElement& g) {
    if (!is_identity(g)) set.emplace(g, 1);
  };
  switch (spec_.family) {
    case GroupFamily::FiniteTable:
      for (long idx : spec_.generator_indices) {
        GroupElement g{{Int(idx)}};
        add(g);
        add(inverse(g));
      }
      break;
    case GroupFamily::Permutation:
      for (const auto& [name, images] : spec_.perm_generators) {
        GroupElement g;
        for (long v : images) g.data.emplace_back(v);
        add(g);
        add(inverse(g));
      }
      break;
    case GroupFamily::IntegerMatrix:
      for (const auto& [name, flat] : spec_.matrix_generators) {
        GroupElement g{flat};
        add(g);
        add(inverse(g));
      }
      break;
    case GroupFamily::Free:
      for (std::size_t i = 0; i < spec_.letters.size(); ++i) {
        add(GroupElement{{Int(static_cast<long>(i) + 1)}});
        add(GroupElement{{Int(-static_cast<long>(i) - 1)}});
      }
      break;
  }
  for (const auto& [g, unused] : set) generators_.push_back(g);
}

GroupElement Group::identity() const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable:
      return GroupElement{{Int(table_identity_)}};
    case GroupFamily::Permutation: {
      GroupElement g;
      for (long i = 0; i < spec_.degree; ++i) g.data.emplace_back(i);
      return g;
    }
    case GroupFamily::IntegerMatrix: {
      const long d = spec_.dimension;
      GroupElement g;
      g.data.assign(d * d, Int(0));
      for (long i = 0; i < d; ++i) g.data[i * d + i] = 1;
      return g;
    }
    case GroupFamily::Free:
      return GroupElement{};
  }
  throw Error("unknown family");
}

bool Group::is_identity(const GroupElement& g) const { return g == identity(); }

GroupElement Group::multiply(const GroupElement& g, const GroupElement& h) const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable: {
      if (g.data.size() != 1 || h.data.size() != 1) {
        throw UsageError("element does not belong to this finite_table group");
      }
      const long a = to_long(g.data[0]), b = to_long(h.data[0]);
      return GroupElement{{Int(spec_.table.at(a).at(b))}};
    }
    case GroupFamily::Permutation: {
      const long d = spec_.degree;
      if (static_cast<long>(g.data.size()) != d || static_cast<long>(h.data.size()) != d) {
        throw UsageError("element does not belong to this permutation group");
      }
      GroupElement out;
      out.data.resize(d);
      for (long i = 0; i < d; ++i) {
        out.data[i] = g.data[to_long(h.data[i])];
      }
      return out;
    }
    case GroupFamily::IntegerMatrix: {
      const long d = spec_.dimension;
      if (static_cast<long>(g.data.size()) != d * d ||
          static_cast<long>(h.data.size()) != d * d) {
        throw UsageError("element does not belong to this matrix group");
      }
      GroupElement out;
      out.data.assign(d * d, Int(0));
      for (long i = 0; i < d; ++i) {
        for (long k = 0; k < d; ++k) {
          const Int& gik = g.data[i * d + k];
          if (gik == 0) continue;
          for (long j = 0; j < d; ++j) {
            out.data[i * d + j] += gik * h.data[k * d + j];
          }
        }
      }
      return out;
    }
    case GroupFamily::Free: {
      const long rank = static_cast<long>(spec_.letters.size());
      for (const auto* word : {&g.data, &h.data}) {
        for (const Int& v : *word) {
          if (v == 0 || abs(v) > rank) {
            throw UsageError("element does not belong to this free group");
          }
        }
      }
      return GroupElement{free_reduce_concat(g.data, h.data)};
    }
  }
  throw Error("unknown family");
}

GroupElement Group::inverse(const GroupElement& g) const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable:
      return GroupElement{{Int(table_inverse_.at(to_long(g.data.at(0))))}};
    case GroupFamily::Permutation: {
      const long d = spec_.degree;
      GroupElement out;
      out.data.resize(d);
      for (long i = 0; i < d; ++i) out.data[to_long(g.data[i])] = i;
      return out;
    }
    case GroupFamily::IntegerMatrix:
      return GroupElement{integer_matrix_inverse(g.data, spec_.dimension)};
    case GroupFamily::Free: {
      GroupElement out;
      out.data.reserve(g.data.size());
      for (auto it = g.data.rbegin(); it != g.data.rend(); ++it) {
        out.data.push_back(-*it);
      }
      return out;
    }
  }
  throw Error("unknown family");
}

std::string Group::element_string(const GroupElement& g) const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable:
      return spec_.element_names.at(to_long(g.data.at(0)));
    case GroupFamily::Permutation: {
      json arr = json::array();
      for (const Int& v : g.data) arr.push_back(to_long(v));
      return arr.dump();
    }
    case GroupFamily::IntegerMatrix: {
      const long d = spec_.dimension;
      json rows = json::array();
      for (long i = 0; i < d; ++i) {
        json row = json::array();
        for (long j = 0; j < d; ++j) row.push_back(g.data[i * d + j].str());
        rows.push_back(row);
      }
      return rows.dump();
    }
    case GroupFamily::Free: {
      if (g.data.empty()) return "e";
      std::string out;
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (i) out += "*";
        const long letter = to_long(g.data[i]);
        out += spec_.letters.at(std::abs(letter) - 1);
        if (letter < 0) out += "^-1";
      }
      return out;
    }
  }
  throw Error("unknown family");
}

GroupElement Group::element_from_string(const std::string& text) const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable: {
      const auto it =
          std::find(spec_.element_names.begin(), spec_.element_names.end(), text);
      if (it == spec_.element_names.end()) {
        throw MalformedError("unknown element '" + text + "'");
      }
      return GroupElement{{Int(it - spec_.element_names.begin())}};
    }
    case GroupFamily::Permutation: {
      json arr;
      try {
        arr = json::parse(text);
      } catch (const std::exception&) {
        throw MalformedError("bad permutation element '" + text + "'");
      }
      if (!arr.is_array()) throw MalformedError("bad permutation element '" + text + "'");
      GroupElement g;
      for (const auto& v : arr) g.data.push_back(json_to_int(v));
      check_element(g);
      return g;
    }
    case GroupFamily::IntegerMatrix: {
      json rows;
      try {
        rows = json::parse(text);
      } catch (const std::exception&) {
        throw MalformedError("bad matrix element '" + text + "'");
      }
      if (!rows.is_array()) throw MalformedError("bad matrix element '" + text + "'");
      GroupElement g;
      for (const auto& row : rows) {
        if (!row.is_array()) throw MalformedError("bad matrix element '" + text + "'");
        for (const auto& v : row) g.data.push_back(json_to_int(v));
      }
      check_element(g);
      return g;
    }
    case GroupFamily::Free: {
      if (text == "e") return GroupElement{};
      GroupElement g;
      std::stringstream ss(text);
      std::string token;
      while (std::getline(ss, token, '*')) {
        bool inverse_token = false;
        if (token.size() > 3 && token.substr(token.size() - 3) == "^-1") {
          inverse_token = true;
          token = token.substr(0, token.size() - 3);
        }
        const auto it = std::find(spec_.letters.begin(), spec_.letters.end(), token);
        if (it == spec_.letters.end()) {
          throw MalformedError("unknown letter '" + token + "'");
        }
        const long k = (it - spec_.letters.begin()) + 1;
        const Int letter(inverse_token ? -k : k);
        if (!g.data.empty() && g.data.back() == -letter) {
          g.data.pop_back();
        } else {
          g.data.push_back(letter);
        }
      }
      return g;
    }
  }
  throw Error("unknown family");
}

void Group::check_element(const GroupElement& g) const {
  switch (spec_.family) {
    case GroupFamily::FiniteTable: {
      if (g.data.size() != 1) throw MalformedError("bad finite_table element");
      const long v = to_long(g.data[0]);
      if (v < 0 || v >= static_cast<long>(spec_.table.size())) {
        throw MalformedError("finite_table element index out of range");
      }
      return;
    }
    case GroupFamily::Permutation: {
      const long d = spec_.degree;
      if (static_cast<long>(g.data.size()) != d) {
        throw MalformedError("permutation element has wrong degree");
      }
      std::vector<char> seen(d, 0);
      for (const Int& v : g.data) {
        const long i = to_long(v);
        if (i < 0 || i >= d || seen[i]++) {
          throw MalformedError("element is not a permutation");
        }
      }
      return;
    }
    case GroupFamily::IntegerMatrix: {
      const long d = spec_.dimension;
      if (static_cast<long>(g.data.size()) != d * d) {
        throw MalformedError("matrix element has wrong shape");
      }
      const Int det = bareiss_determinant(g.data, d);
      if (det != 1 && det != -1) {
        throw MalformedError("matrix element has determinant " + det.str());
      }
      return;
    }
    case GroupFamily::Free: {
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        const long v = to_long(g.data[i]);
        if (v == 0 || std::abs(v) > static_cast<long>(spec_.letters.size())) {
          throw MalformedError("free word letter out of range");
        }
        if (i > 0 && g.data[i - 1] == -g.data[i]) {
          throw MalformedError("free word is not reduced");
        }
      }
      return;
    }
  }
  throw Error("unknown family");
}

std::optional<long> Group::table_size() const {
  if (spec_.family != GroupFamily::FiniteTable) return std::nullopt;
  return static_cast<long>(spec_.table.size());
}

long Ball::find(const GroupElement& g) const {
  const auto it = index.find(g);
  return it == index.end() ? -1 : it->second;
}

Ball enumerate_ball(const Group& group, std::vector<GroupElement> gens,
                    long radius, const BallOptions& options) {
  if (radius < 0) throw UsageError("ball radius must be >= 0");
  // Symmetrize the metric generating set.
  ElementMap<char> gen_set;
  for (const auto& g : gens) {
    if (group.is_identity(g)) continue;
    gen_set.emplace(g, 1);
    gen_set.emplace(group.inverse(g), 1);
  }
  Ball ball;
  ball.radius = radius;
  for (const auto& [g, unused] : gen_set) ball.gens.push_back(g);

  ball.elements.push_back(group.identity());
  ball.lengths.push_back(0);
  ball.words.push_back({});
  ball.index.emplace(group.identity(), 0);
  ball.saturated = ball.gens.empty();

  std::vector<long> frontier{0};
  for (long level = 1; level <= radius; ++level) {
    ElementMap<std::vector<long>> fresh;
    for (long idx : frontier) {
      for (std::size_t gi = 0; gi < ball.gens.size(); ++gi) {
        GroupElement p = group.multiply(ball.elements[idx], ball.gens[gi]);
        if (ball.index.count(p) || fresh.count(p)) continue;
        std::vector<long> word = ball.words[idx];
        word.push_back(static_cast<long>(gi));
        fresh.emplace(std::move(p), std::move(word));
      }
    }
    if (fresh.empty()) {
      ball.saturated = true;
      break;
    }
    frontier.clear();
    for (auto& [g, word] : fresh) {
      const long pos = static_cast<long>(ball.elements.size());
      if (pos + 1 > options.max_elements) {
        throw ResourceError("ball size cap (" + std::to_string(options.max_elements) +
                            " elements) exceeded at radius " + std::to_string(level));
      }
      ball.elements.push_back(g);
      ball.lengths.push_back(level);
      ball.words.push_back(std::move(word));
      ball.index.emplace(ball.elements.back(), pos);
      frontier.push_back(pos);
    }
  }

  if (const auto n = group.table_size(); n && ball.size() == *n) {
    ball.saturated = true;
  }

  if (options.build_pair_table) {
    const long n = ball.size();
    PairTable pt;
    pt.pair_product.resize(n, n);
    ElementMap<long> first_ids;
    std::vector<GroupElement> in_order;
    for (long i = 0; i < n; ++i) {
      const GroupElement inv_i = group.inverse(ball.elements[i]);
      for (long j = 0; j < n; ++j) {
        GroupElement p = group.multiply(inv_i, ball.elements[j]);
        auto [it, fresh_id] = first_ids.try_emplace(std::move(p),
                                                    static_cast<long>(in_order.size()));
        if (fresh_id) in_order.push_back(it->first);
        pt.pair_product(i, j) = static_cast<std::int32_t>(it->second);
      }
    }
    std::vector<std::int32_t> remap(in_order.size());
    long next = 0;
    for (const auto& [g, old_id] : first_ids) {
      remap[old_id] = static_cast<std::int32_t>(next++);
      pt.products.push_back(g);
      pt.product_index.emplace(g, pt.products.size() - 1);
    }
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        pt.pair_product(i, j) = remap[pt.pair_product(i, j)];
      }
    }
    ball.pairs = std::move(pt);
  }
  return ball;
}

long word_length(const Group& group, const std::vector<GroupElement>& gens,
                 const GroupElement& g, long max_radius, long max_elements) {
  if (group.is_identity(g)) return 0;
  ElementMap<char> gen_set;
  for (const auto& s : gens) {
    if (group.is_identity(s)) continue;
    gen_set.emplace(s, 1);
    gen_set.emplace(group.inverse(s), 1);
  }
  std::vector<GroupElement> sym;
  for (const auto& [s, unused] : gen_set) sym.push_back(s);

  ElementMap<char> seen;
  seen.emplace(group.identity(), 1);
  std::vector<GroupElement> frontier{group.identity()};
  for (long level = 1; level <= max_radius; ++level) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : sym) {
        GroupElement p = group.multiply(x, s);
        if (p == g) return level;
        if (seen.emplace(p, 1).second) {
          if (static_cast<long>(seen.size()) > max_elements) {
            throw ResourceError("ball size cap (" + std::to_string(max_elements) +
                                " elements) exceeded in word_length");
          }
          next.push_back(std::move(p));
        }
      }
    }
    if (next.empty()) {
      throw NotReachableError("element is not in the generated subgroup within radius " +
                              std::to_string(max_radius));
    }
    frontier = std::move(next);
  }
  throw NotReachableError("element not reachable within radius " +
                          std::to_string(max_radius));
}

std::string ball_ordering_digest(const Group& group, const Ball& ball) {
  std::string bytes;
  for (const auto& g : ball.elements) {
    bytes += group.element_string(g);
    bytes += '\n';
  }
  return sha256_hex(bytes);
}

}  // namespace ptcert
