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

#include <stdexcept>
#include <string>

namespace ptcert {

// Exit-code contract used by the CLI: rejected certificates exit 1,
// validation/usage/malformed-input errors exit 2, resource caps exit 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid domain data: broken multiplication table, non-symmetric measure, ...
struct ValidationError : Error {
  using Error::Error;
};

// API misuse: mixing elements of different groups, non-symmetric matrix
// passed to a symmetric factorization, ...
struct UsageError : Error {
  using Error::Error;
};

// Unparseable or schema-violating files (group specs, certificates).
struct MalformedError : Error {
  using Error::Error;
};

// A configured cap was exceeded (ball size, group order).
struct ResourceError : Error {
  using Error::Error;
};

// NaN/overflow in the floating-point solver path.
struct NumericError : Error {
  using Error::Error;
};

// Element not reachable within the configured radius.
struct NotReachableError : Error {
  using Error::Error;
};

// No certificate exists for the requested data (structural infeasibility,
// solver stall, pivot repair failure). Never interpreted as a refutation.
struct InfeasibleError : Error {
  using Error::Error;
};

// Internal consistency failure: an identity that holds unconditionally
// failed to verify. Indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace ptcert
