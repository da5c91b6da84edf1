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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcrb/scenario.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Cramer-Rao-Bhattacharya bounds for finite-level quantum parametric families"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "text";
    double tol_scale = 1.0;
    std::uint64_t seed = 0;

    CLI::App *run = app.add_subcommand("run", "Run a scenario file and print its report");
    run->add_option("file", file, "Scenario JSON file")->required();
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "csv"}));
    run->add_option("--tol-scale", tol_scale, "Multiply every default tolerance")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Seed for randomized self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto fmt = qcrb::scenario::parse_format(format);
        const qcrb::scenario::ScenarioResult result = qcrb::scenario::run_scenario_file(file, {tol_scale, seed});
        std::cout << qcrb::scenario::emit_report(result, fmt);
        return result.exit_code();
    } catch (const qcrb::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
