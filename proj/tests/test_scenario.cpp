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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qcrb/scenario.hpp"

namespace qcrb::scenario {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json bundled(const std::string &name) {
    std::ifstream in(fs::path(QCRB_SCENARIO_DIR) / (name + ".json"));
    return json::parse(in);
}

std::string error_of(const json &doc) {
    try {
        run_scenario_text(doc.dump());
    } catch (const Error &e) {
        return e.what();
    }
    ADD_FAILURE() << "scenario was accepted";
    return {};
}

TEST(Scenario, QzEqualityIsTightEverywhere) {
    const ScenarioResult r = run_scenario_text(bundled("qz_equality").dump());
    EXPECT_EQ(r.exit_code(), 0);
    ASSERT_EQ(r.points.size(), 5u);
    for (const auto &p : r.points) {
        const double t = p.theta(0);
        EXPECT_NEAR(p.report.cov(0, 0), 1.0 - t * t, 1e-12);
        EXPECT_NEAR(p.report.bound(0, 0), 1.0 - t * t, 1e-9);
        EXPECT_NEAR(p.report.min_gap(), 0.0, 1e-9);
    }
}

TEST(Scenario, TrinePovmHasPositiveGap) {
    const ScenarioResult r = run_scenario_text(bundled("trine_povm").dump());
    EXPECT_EQ(r.exit_code(), 0);
    for (const auto &p : r.points) EXPECT_NEAR(p.report.min_gap(), 1.0 + p.theta(0), 1e-9);
}

TEST(Scenario, EveryBundledScenarioPasses) {
    std::size_t count = 0;
    for (const auto &entry : fs::directory_iterator(QCRB_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        const ScenarioResult r = run_scenario_file(entry.path().string());
        EXPECT_EQ(r.exit_code(), 0) << entry.path() << "\n" << emit_report(r, ReportFormat::Text);
    }
    EXPECT_GE(count, 8u);
}

TEST(Scenario, ErrorsNameTheOffendingField) {
    const json base = bundled("qz_equality");
    json missing = base;
    missing.erase("grid");
    EXPECT_NE(error_of(missing).find("'grid'"), std::string::npos);

    json rows = base;
    rows["estimators"][0]["observable"] = json::array({json::array({1, 0})});
    EXPECT_NE(error_of(rows).find("estimators[0].observable"), std::string::npos);

    json biased = base;
    biased["estimators"][0]["f"][1] = 3.0;
    EXPECT_NE(error_of(biased).find("biased"), std::string::npos);

    json version = base;
    version["schema_version"] = 2;
    EXPECT_NE(error_of(version).find("schema_version"), std::string::npos);

    json tol = base;
    tol["tolerances"] = {{"bogus", 1.0}};
    EXPECT_NE(error_of(tol).find("tolerances.bogus"), std::string::npos);

    json kind = base;
    kind["fisher"][0]["type"] = "magic";
    EXPECT_NE(error_of(kind).find("fisher[0].type"), std::string::npos);

    EXPECT_THROW(run_scenario_text("{"), ScenarioError);
    EXPECT_THROW(run_scenario_file("/nonexistent/scenario.json"), ScenarioError);
}

TEST(Scenario, ViolatedExpectationsExitWithTwo) {
    json tight = bundled("trine_povm");
    tight["expect"] = {{"tight", true}};
    EXPECT_EQ(run_scenario_text(tight.dump()).exit_code(), 2);

    json wrong = bundled("qz_equality");
    wrong.erase("expect");
    wrong["fisher"] = json::array({{{"type", "explicit"},
                                    {"matrices", json::array({json::array({json::array({1, 0}), json::array({0, 1})})}) }}});
    for (int k = 1; k < 5; ++k) wrong["fisher"][0]["matrices"].push_back(wrong["fisher"][0]["matrices"][0]);
    const ScenarioResult r = run_scenario_text(wrong.dump());
    EXPECT_EQ(r.exit_code(), 2);
    bool saw_validation_failure = false;
    for (const auto &c : r.checks) saw_validation_failure |= (!c.pass && c.name.find("fisher map") == 0);
    EXPECT_TRUE(saw_validation_failure);
}

TEST(Scenario, ToleranceScaleIsValidated) {
    EXPECT_THROW(run_scenario_text(bundled("qz_equality").dump(), RunOptions{0.0, 0}), ScenarioError);
    EXPECT_EQ(run_scenario_text(bundled("qz_equality").dump(), RunOptions{10.0, 0}).exit_code(), 0);
}

TEST(Report, EmptyResultIsHeaderOnlyCsv) {
    const ScenarioResult empty;
    EXPECT_EQ(emit_report(empty, ReportFormat::Csv), csv_header());
    EXPECT_EQ(csv_header(), "point,theta,bound_kind,row,col,cov,bound,gap,gap_min_eig,pass\r\n");
}

TEST(Report, SinglePointSingleFunctionIsOneRow) {
    ScenarioResult r;
    r.name = "single";
    r.dim = 2;
    r.grid_size = 1;
    r.parameters = 1;
    PointResult p;
    p.point = 0;
    p.theta = RealVector::Constant(1, 0.5);
    p.bound_kind = "d0";
    p.estimators = {"z"};
    p.report = assemble_report(0, RealMatrix::Constant(1, 1, 0.75), RealMatrix::Constant(1, 1, 4.0 / 3.0),
                               RealMatrix::Constant(1, 1, 1.0));
    p.pass = true;
    r.points.push_back(p);
    EXPECT_EQ(emit_report(r, ReportFormat::Csv), csv_header() + "0,0.5,d0,0,0,0.75,0.75,0,0,true\r\n");
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(-2.0), "-2");
    EXPECT_EQ(format_number(4e-13), "0");
    EXPECT_EQ(format_number(-4e-13), "0");
    EXPECT_EQ(format_number(1e-12), "1e-12");
    EXPECT_EQ(parse_format("csv"), ReportFormat::Csv);
    EXPECT_EQ(parse_format("text"), ReportFormat::Text);
    EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Report, OutputIsDeterministic) {
    for (const auto *name : {"qz_equality", "mixture", "lie_orbit"}) {
        const std::string text = bundled(name).dump();
        const ScenarioResult a = run_scenario_text(text, RunOptions{1.0, 7});
        const ScenarioResult b = run_scenario_text(text, RunOptions{1.0, 7});
        EXPECT_EQ(emit_report(a, ReportFormat::Text), emit_report(b, ReportFormat::Text));
        EXPECT_EQ(emit_report(a, ReportFormat::Csv), emit_report(b, ReportFormat::Csv));
    }
}

} // namespace
} // namespace qcrb::scenario
