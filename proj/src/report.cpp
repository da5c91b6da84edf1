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

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qcrb/scenario.hpp"

namespace qcrb::scenario {

std::string format_number(double x) {
    if (std::abs(x) < 5e-13) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

std::string format_matrix(const RealMatrix &m) {
    std::string s = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        s += r ? ", [" : "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + format_number(m(r, c));
        s += "]";
    }
    return s + "]";
}

std::string format_vector(const RealVector &v, const char *sep) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? sep : "") + format_number(v(i));
    return s;
}

// RFC 4180 quoting for fields that need it.
std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_labels(const std::vector<std::string> &labels) {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? ", " : "") + labels[i];
    return s.empty() ? "(none)" : s;
}

std::string text_report(const ScenarioResult &r) {
    std::ostringstream os;
    os << "scenario " << r.name << "\n";
    os << "dimension " << r.dim << ", grid points " << r.grid_size << ", parameters " << r.parameters << "\n";
    os << "fisher maps: " << join_labels(r.fisher_labels) << "\n";
    os << "estimators: " << join_labels(r.estimator_labels) << "\n";
    std::size_t last_point = static_cast<std::size_t>(-1);
    for (const auto &p : r.points) {
        if (p.point != last_point) {
            os << "\npoint " << p.point << "  theta = (" << format_vector(p.theta, ", ") << ")\n";
            last_point = p.point;
        }
        os << "  bound " << p.bound_kind << "\n";
        os << "    cov             " << format_matrix(p.report.cov) << "\n";
        os << "    information     " << format_matrix(p.report.info) << "\n";
        os << "    lambda          " << format_matrix(p.report.lambda) << "\n";
        os << "    bound           " << format_matrix(p.report.bound) << "\n";
        os << "    gap eigenvalues [" << format_vector(p.report.gap_spectrum, ", ") << "]\n";
        os << "    range residual  " << format_number(p.report.range_residual) << "\n";
        os << "    status          " << (p.pass ? "PASS" : "FAIL") << "\n";
    }
    os << "\nchecks\n";
    for (const auto &c : r.checks)
        os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail << "\n";
    os << "\nresult " << (r.all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string csv_report(const ScenarioResult &r) {
    std::string out = csv_header();
    for (const auto &p : r.points) {
        const RealMatrix &cov = p.report.cov;
        const RealMatrix gap = p.report.cov - p.report.bound;
        for (Eigen::Index i = 0; i < cov.rows(); ++i)
            for (Eigen::Index j = i; j < cov.cols(); ++j) {
                out += std::to_string(p.point) + "," + csv_field(format_vector(p.theta, ";")) + "," +
                       csv_field(p.bound_kind) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                       format_number(cov(i, j)) + "," + format_number(p.report.bound(i, j)) + "," +
                       format_number(gap(i, j)) + "," + format_number(p.report.min_gap()) + "," +
                       (p.pass ? "true" : "false") + "\r\n";
            }
    }
    return out;
}

} // namespace

ReportFormat parse_format(const std::string &name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    throw ScenarioError("unknown report format '" + name + "' (expected text or csv)");
}

std::string csv_header() { return "point,theta,bound_kind,row,col,cov,bound,gap,gap_min_eig,pass\r\n"; }

std::string emit_report(const ScenarioResult &result, ReportFormat format) {
    return format == ReportFormat::Csv ? csv_report(result) : text_report(result);
}

} // namespace qcrb::scenario
