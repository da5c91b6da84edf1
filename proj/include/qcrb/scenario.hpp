// Copyright 2026 The qcrb Authors
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

#include <cstdint>
#include <string>
#include <vector>

#include "qcrb/error.hpp"
#include "qcrb/estimation.hpp"

namespace qcrb::scenario {

/// Raised for unreadable or inconsistent scenario input. The message names
/// the offending field path (for example `family.states[2]`) or the line and
/// column of a syntax error.
class ScenarioError : public Error {
  public:
    explicit ScenarioError(const std::string &message);
};

struct RunOptions {
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Bound for one grid point and one Fisher map set (or the mixture bound).
struct PointResult {
    std::size_t point = 0;
    RealVector theta;
    std::string bound_kind;
    std::vector<std::string> estimators;
    CrbReport report;
    bool pass = false;
};

struct ScenarioResult {
    std::string name;
    Eigen::Index dim = 0;
    std::size_t grid_size = 0;
    std::size_t parameters = 0;
    std::vector<std::string> fisher_labels;
    std::vector<std::string> estimator_labels;
    std::vector<PointResult> points;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    /// 0 when every check passes, 2 otherwise.
    int exit_code() const;
};

/// Parses and runs a scenario document. Throws ScenarioError on bad input.
ScenarioResult run_scenario_text(const std::string &text, const RunOptions &options = {});
ScenarioResult run_scenario_file(const std::string &path, const RunOptions &options = {});

enum class ReportFormat { Text, Csv };

ReportFormat parse_format(const std::string &name);

/// Deterministic rendering: fixed ordering, 12 significant digits, values
/// below 5e-13 in magnitude printed as 0.
std::string emit_report(const ScenarioResult &result, ReportFormat format);

/// %.12g with magnitudes below 5e-13 printed as 0.
std::string format_number(double x);

/// Header-only CSV.
std::string csv_header();

} // namespace qcrb::scenario
