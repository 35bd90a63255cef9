/*
 Copyright 2026 The detumble Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "detumble/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace detumble::cli;

    CLI::App app{"Magnetic detumbling simulator: B-dot and continuation NMPC"};
    app.require_subcommand(1);

    Invocation run_args;
    auto* run = app.add_subcommand("run", "Simulate one scenario, write trace.csv and metrics.json");
    run->add_option("--config", run_args.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_args.out, "Output directory")->required();
    run->add_option("--set", run_args.overrides, "Override a config key, e.g. mpc.zeta=20")
        ->take_all()
        ->allow_extra_args(false);

    Invocation compare_args;
    auto* compare = app.add_subcommand("compare", "Run two controllers on the same scenario");
    compare->add_option("--config", compare_args.config, "Scenario JSON")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--out", compare_args.out, "Output directory")->required();
    compare->add_option("--controllers", compare_args.controllers,
                        "Two of bdot-full, bdot-x, mpc (default: bdot-x mpc)")
        ->delimiter(',')
        ->expected(2);

    std::string trace;
    std::string kind;
    std::string svg;
    auto* plot = app.add_subcommand("plot", "Render a trace as SVG");
    plot->add_option("--trace", trace, "trace.csv")->required();
    plot->add_option("--kind", kind, "rates | inputs | residual | lyapunov")->required();
    plot->add_option("--out", svg, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (run->parsed()) {
        return cmd_run(run_args, std::cerr);
    }
    if (compare->parsed()) {
        return cmd_compare(compare_args, std::cout, std::cerr);
    }
    return cmd_plot(trace, kind, svg, std::cerr);
}
