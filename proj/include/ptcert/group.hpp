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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptcert/scalars.hpp"

namespace ptcert {

// The four supported ways of giving a group computationally. All of them have
// decidable equality of elements, which exact certification relies on.
enum class GroupFamily { FiniteTable, Permutation, IntegerMatrix, Free };

std::string family_name(GroupFamily family);
GroupFamily family_from_name(const std::string& name);

// Canonical form of a group element. The interpretation of `data` depends on
// the owning group's family:
//   finite_table    one entry, the table index
//   permutation     the image vector (0-based)
//   integer_matrix  row-major matrix entries
//   free            the freely reduced word; letter i is +-(i+1)
//
// Equal group elements always have identical `data`.
struct GroupElement {
  std::vector<Int> data;

  bool operator==(const GroupElement& other) const { return data == other.data; }
  bool operator!=(const GroupElement& other) const { return !(*this == other); }
};

// Total order: shorter data first, then entrywise. Deterministic tiebreak for
// ball ordering and for all map iteration in the exact pipeline.
int compare_elements(const GroupElement& a, const GroupElement& b);

struct ElementLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const {
    return compare_elements(a, b) < 0;
  }
};

template <typename T>
using ElementMap = std::map<GroupElement, T, ElementLess>;

struct GroupSpec {
  GroupFamily family = GroupFamily::Free;

  // finite_table: table[a][b] is the index of a*b.
  std::vector<std::vector<long>> table;
  std::vector<std::string> element_names;  // defaults g0, g1, ...
  std::vector<long> generator_indices;

  // permutation
  long degree = 0;
  std::vector<std::pair<std::string, std::vector<long>>> perm_generators;

  // integer_matrix: row-major entries, arbitrary-precision.
  long dimension = 0;
  std::vector<std::pair<std::string, std::vector<Int>>> matrix_generators;

  // free
  std::vector<std::string> letters;

  static GroupSpec from_json(const nlohmann::json& j);
  static GroupSpec load_file(const std::string& path);

  // Fully explicit form (defaults materialized, keys sorted); its compact
  // dump is the canonical byte string hashed into the digest.
  nlohmann::json canonical_json() const;
  std::string canonical_bytes() const;
  std::string digest() const;  // sha256, lowercase hex
};

// Validates the spec on construction and provides the group operations.
// Immutable afterwards; safe for concurrent reads.
class Group {
 public:
  explicit Group(GroupSpec spec);

  static std::shared_ptr<const Group> make(GroupSpec spec);
  static std::shared_ptr<const Group> load(const std::string& path);

  const GroupSpec& spec() const { return spec_; }
  const std::string& digest() const { return digest_; }
  GroupFamily family() const { return spec_.family; }

  GroupElement identity() const;
  bool is_identity(const GroupElement& g) const;
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;

  // Spec generators with inverses adjoined, deduplicated, canonically sorted.
  // Never contains the identity.
  const std::vector<GroupElement>& generators() const { return generators_; }

  std::string element_string(const GroupElement& g) const;
  GroupElement element_from_string(const std::string& text) const;

  // Shape/range validation for elements arriving from files.
  void check_element(const GroupElement& g) const;

  // |Gamma| for finite_table groups.
  std::optional<long> table_size() const;

 private:
  void validate();
  void build_generators();

  GroupSpec spec_;
  std::string digest_;
  std::vector<GroupElement> generators_;
  long table_identity_ = -1;
  std::vector<long> table_inverse_;
};

using GroupPtr = std::shared_ptr<const Group>;

// Pair-product index of a ball: for all (i, j), the canonical form of
// elements[i]^-1 * elements[j]. Products are deduplicated and canonically
// sorted; they all lie in the ball of radius 2 * radius.
struct PairTable {
  std::vector<GroupElement> products;
  ElementMap<long> product_index;
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> pair_product;
};

struct Ball {
  long radius = 0;
  // Identity first, then by increasing word length, ties broken by canonical
  // order. Deterministic given the spec serialization.
  std::vector<GroupElement> elements;
  std::vector<long> lengths;
  // A shortest word (generator indices into `gens`) per element.
  std::vector<std::vector<long>> words;
  ElementMap<long> index;
  // The symmetrized metric generating set actually used.
  std::vector<GroupElement> gens;
  // True when the last BFS level added nothing, i.e. the ball is the whole
  // generated subgroup.
  bool saturated = false;
  std::optional<PairTable> pairs;

  long size() const { return static_cast<long>(elements.size()); }
  long find(const GroupElement& g) const;  // -1 if absent
};

struct BallOptions {
  long max_elements = 20000;
  bool build_pair_table = true;
};

// Breadth-first ball enumeration. `gens` is symmetrized (inverses adjoined,
// identity dropped, duplicates removed) before use.
Ball enumerate_ball(const Group& group, std::vector<GroupElement> gens,
                    long radius, const BallOptions& options = {});

// Length of a shortest word in `gens` equal to g, by breadth-first search.
// Throws NotReachableError if g is not found within max_radius.
long word_length(const Group& group, const std::vector<GroupElement>& gens,
                 const GroupElement& g, long max_radius,
                 long max_elements = 20000);

// sha256 over the newline-joined canonical element strings; pins the index
// convention certificates use for their witness vectors.
std::string ball_ordering_digest(const Group& group, const Ball& ball);

}  // namespace ptcert
