/*
   Copyright 2026 The tcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace tcsim {

/// Every tunable of every subcommand. Values of 0 (or NaN for the bracket
/// ends, or an empty string) mean "use the subcommand default"; the
/// manifest always records the resolved values.
struct CliParams {
    std::string geometry = "torus:d=2,side=16";
    std::string rule = "threshold_contact";
    std::string initial;
    std::string strategy = "empty";
    int theta = 2;
    double lambda = 1.0;
    double p = -1.0;
    double T = 0.0;
    int steps = 100;
    std::vector<double> eps{0.1};
    int L = 1;
    double delta = 0.1;
    int K = 0;
    int M = 1;
    double alpha = 1.0;
    std::size_t replicas = 0;
    std::uint64_t seed = 1;
    double gamma = 0.05;
    double tau = 0.1;
    double proxy = 0.5;
    double tol = 0.05;
    double lo = -1.0;
    double hi = -1.0;
    double t_factor = 1.0;
    int points = 21;
    std::size_t runs = 200;
    bool flip_log = false;
};

void to_json(nlohmann::json& j, const CliParams& p);
void from_json(const nlohmann::json& j, CliParams& p);

/// Fills subcommand defaults in place and validates the combination.
void resolve_params(const std::string& command, CliParams& params);

/// Runs one subcommand and writes its outputs plus manifest.json under
/// `out`. Returns the manifest.
nlohmann::json run_command(const std::string& command, const CliParams& params,
                           const std::string& out);

/// Entry point of the `tcsim` executable.
int run_cli(int argc, const char* const* argv);

/// Convenience overload; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

/// Version string recorded in manifests.
std::string code_version();

} // namespace tcsim
