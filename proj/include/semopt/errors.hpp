// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The semopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMOPT_ERRORS_HPP
#define SEMOPT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semopt {

// Joins a list of items with ", ".
inline std::string join(const std::vector<std::string>& items, const char* sep = ", ")
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

/// Input data violates one or more invariants. `violations()` names every
/// offending field, one entry per violated invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::invalid_argument("validation failed: " + join(violations, "; ")),
          violations_(std::move(violations))
    {
    }

    const std::vector<std::string>& violations() const noexcept { return violations_; }

    bool names(const std::string& field) const
    {
        for (const auto& v : violations_)
            if (v.rfind(field, 0) == 0)
                return true;
        return false;
    }

private:
    std::vector<std::string> violations_;
};

/// The optimization problem (or one stage of it) has no feasible point.
/// `stage` is one of "sca", "segment", "greedy", "oracle"; `binding` lists the
/// constraint labels that could not be satisfied.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::string stage, std::vector<std::string> binding, const std::string& detail = {})
        : std::runtime_error("infeasible at stage '" + stage + "': " + join(binding)
                             + (detail.empty() ? std::string() : " (" + detail + ")")),
          stage_(std::move(stage)), binding_(std::move(binding))
    {
    }

    const std::string& stage() const noexcept { return stage_; }
    const std::vector<std::string>& binding() const noexcept { return binding_; }

private:
    std::string stage_;
    std::vector<std::string> binding_;
};

/// Non-finite evaluations, singular Newton systems, or iteration limits.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, int outer_iteration = -1)
        : std::runtime_error(what), outer_iteration_(outer_iteration)
    {
    }

    int outer_iteration() const noexcept { return outer_iteration_; }

private:
    int outer_iteration_;
};

} // namespace semopt

#endif // SEMOPT_ERRORS_HPP
