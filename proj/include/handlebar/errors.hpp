// Copyright 2026 The Handlebar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace handlebar {

// Base class for all errors raised by the library. kind() is a stable
// machine-readable tag (the CLI puts it in the "error" field of error JSON).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Distribution parameters violate the family's domain constraints.
struct InvalidParams : Error {
  explicit InvalidParams(const std::string& detail)
      : Error("InvalidParams", detail) {}
};

// A value handed to an integer-support family is not evaluable at all
// (continuous families return -inf instead of raising this).
struct OutOfSupport : Error {
  explicit OutOfSupport(const std::string& detail)
      : Error("OutOfSupport", detail) {}
};

// Math-domain violation in an elementary operation or bijector.
struct DomainError : Error {
  explicit DomainError(const std::string& detail)
      : Error("DomainError", detail) {}
};

// An expression mixed values recorded on two different tapes.
struct TapeMismatch : Error {
  explicit TapeMismatch(const std::string& detail)
      : Error("TapeMismatch", detail) {}
};

// The same site name was performed twice in one execution.
struct DuplicateName : Error {
  explicit DuplicateName(const std::string& name)
      : Error("DuplicateName", "site '" + name + "' performed twice in one execution") {}
};

// Lookup of a name that is not present (trace record, guide parameter, ...).
struct UnknownName : Error {
  explicit UnknownName(const std::string& detail)
      : Error("UnknownName", detail) {}
};

// log-joint reached a site that no handler pinned; the density would require
// marginalization.
struct MissingValue : Error {
  explicit MissingValue(const std::string& name)
      : Error("MissingValue", "site '" + name + "' has no pinned value; cannot accumulate a density") {}
};

// Latent and observation maps passed to log_joint share keys.
struct DisjointnessError : Error {
  explicit DisjointnessError(const std::string& detail)
      : Error("DisjointnessError", detail) {}
};

namespace detail {
inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}
}  // namespace detail

// Raised at scope exit when condition values were never matched by any site.
struct UnusedCondition : Error {
  explicit UnusedCondition(std::vector<std::string> names)
      : Error("UnusedCondition",
              "condition values never encountered: " + detail::join_names(names)),
        names(std::move(names)) {}
  std::vector<std::string> names;
};

// Raised at scope exit when substituted values were never matched.
struct UnusedSubstitution : Error {
  explicit UnusedSubstitution(std::vector<std::string> names)
      : Error("UnusedSubstitution",
              "substituted values never encountered: " + detail::join_names(names)),
        names(std::move(names)) {}
  std::vector<std::string> names;
};

// The mean-field guide met a latent site whose support is not the real line.
struct ConstrainedLatent : Error {
  explicit ConstrainedLatent(const std::string& name)
      : Error("ConstrainedLatent",
              "latent site '" + name + "' is not real-line supported; run the guide inside unconstrain") {}
};

// Requested an operation outside the implemented surface (e.g. a constraining
// transform for a discrete support).
struct Unsupported : Error {
  explicit Unsupported(const std::string& detail)
      : Error("Unsupported", detail) {}
};

// Registry lookup failure.
struct NotFound : Error {
  explicit NotFound(const std::string& detail) : Error("NotFound", detail) {}
};

// A handler or caller broke the dispatch protocol (double forward, unbalanced
// stack manipulation, empty site name, ...).
struct HandlerProtocolError : Error {
  explicit HandlerProtocolError(const std::string& detail)
      : Error("HandlerProtocolError", detail) {}
};

}  // namespace handlebar
