#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "bellsim/version.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

using bellsim::cli::RunConfig;

struct FlagOverride {
    CLI::Option* option;
    std::function<void(RunConfig&, const RunConfig&)> copy;
};

/// Flags shared by all subcommands. Values land in `parsed`; the override
/// list lets the caller re-apply only the flags actually given, on top of a
/// config-file baseline.
void add_common_flags(CLI::App& sub, RunConfig& parsed, std::string& config_path,
                      std::vector<FlagOverride>& overrides) {
    const auto bind = [&overrides](CLI::Option* opt, auto member) {
        overrides.push_back({opt, [member](RunConfig& dst, const RunConfig& src) {
                                 dst.*member = src.*member;
                             }});
    };
    bind(sub.add_option("--model", parsed.model, "qm | lhv-sign | algebraic"),
         &RunConfig::model);
    bind(sub.add_option("--kind", parsed.kind, "spin | photon"), &RunConfig::kind);
    bind(sub.add_option("--n", parsed.n, "trials per estimate"), &RunConfig::n);
    bind(sub.add_option("--seed", parsed.seed, "master seed"), &RunConfig::seed);
    bind(sub.add_option("--angles", parsed.angles,
                        "degrees: comma list or start:stop:step"),
         &RunConfig::angles);
    bind(sub.add_option("--out", parsed.out, "output file (default: stdout)"), &RunConfig::out);
    bind(sub.add_option("--threads", parsed.threads, "worker threads (never changes results)"),
         &RunConfig::threads);
    sub.add_option("--config", config_path, "JSON config file; flags override its keys");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-particle correlation experiments: exact singlet statistics, a sign-rule "
                 "local hidden-variable model, and a shared algebraic variable model under one "
                 "estimation and locality harness"};
    app.set_version_flag("--version", bellsim::kVersion);
    app.require_subcommand(1);

    RunConfig parsed;
    std::string config_path;
    std::vector<FlagOverride> overrides;

    CLI::App* sweep = app.add_subcommand(
        "sweep", "correlation vs analyzer angle; CSV (and optional SVG plot)");
    add_common_flags(*sweep, parsed, config_path, overrides);
    {
        const auto bind = [&overrides](CLI::Option* opt, auto member) {
            overrides.push_back({opt, [member](RunConfig& dst, const RunConfig& src) {
                                     dst.*member = src.*member;
                                 }});
        };
        bind(sweep->add_option("--plot", parsed.plot, "write an SVG overlay plot here"),
             &RunConfig::plot);
        bind(sweep->add_flag("--analytic", parsed.analytic,
                             "closed-form values instead of sampling (qm only)"),
             &RunConfig::analytic);
    }

    CLI::App* chsh = app.add_subcommand(
        "chsh", "four-correlation combination at a settings quadruple; JSON");
    add_common_flags(*chsh, parsed, config_path, overrides);

    CLI::App* audit = app.add_subcommand(
        "audit", "structural self-check of one model; table plus JSON");
    add_common_flags(*audit, parsed, config_path, overrides);

    CLI::App* locality = app.add_subcommand(
        "locality", "event-scheduled run with causal bookkeeping; JSON");
    add_common_flags(*locality, parsed, config_path, overrides);
    {
        const auto bind = [&overrides](CLI::Option* opt, auto member) {
            overrides.push_back({opt, [member](RunConfig& dst, const RunConfig& src) {
                                     dst.*member = src.*member;
                                 }});
        };
        bind(locality->add_option("--schedule-L", parsed.schedule_l,
                                  "station separation (stations at -L and +L, c = 1)"),
             &RunConfig::schedule_l);
        bind(locality->add_option("--schedule-times", parsed.schedule_times,
                                  "emit,choose_a,choose_b,measure_a,measure_b"),
             &RunConfig::schedule_times);
        bind(locality->add_flag("--allow-timelike", parsed.allow_timelike,
                                "run non-spacelike schedules flagged instead of refusing"),
             &RunConfig::allow_timelike);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // config errors are exit 1; --help/--version are success
    }

    CLI::App* chosen = nullptr;
    for (CLI::App* sub : {sweep, chsh, audit, locality}) {
        if (sub->parsed()) {
            chosen = sub;
        }
    }

    RunConfig config;
    config.command = chosen->get_name();
    const auto started = std::chrono::steady_clock::now();
    try {
        if (!config_path.empty()) {
            bellsim::cli::load_config_file(config_path, config);
        }
        for (const FlagOverride& fo : overrides) {
            if (fo.option->count() > 0) {
                fo.copy(config, parsed);
            }
        }

        int rc = 0;
        if (chosen == sweep) {
            rc = bellsim::cli::cmd_sweep(config);
        } else if (chosen == chsh) {
            rc = bellsim::cli::cmd_chsh(config);
        } else if (chosen == audit) {
            rc = bellsim::cli::cmd_audit(config);
        } else {
            rc = bellsim::cli::cmd_locality(config);
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
        std::fprintf(stderr, "bellsim %s: %.3f s\n", config.command.c_str(), elapsed.count());
        return rc;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "bellsim %s: %s\n", config.command.c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bellsim %s: %s\n", config.command.c_str(), e.what());
        return 2;
    }
}
