#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "bellsim/experiments.hpp"
#include "bellsim/locality.hpp"
#include "bellsim/version.hpp"
#include "writers.hpp"

namespace bellsim::cli {

namespace {

constexpr const char* kSchemaId = "bellsim-result/1";

const MeasurementModel& resolve_model(const RunConfig& config, bool harness_fixtures) {
    const MeasurementModel* model = harness_fixtures ? find_harness_model(config.model)
                                                     : find_model(config.model);
    if (model == nullptr) {
        throw std::invalid_argument("unknown model '" + config.model +
                                    "' (expected qm, lhv-sign or algebraic)");
    }
    return *model;
}

void validate_run_params(const RunConfig& config) {
    if (config.n == 0) {
        throw std::invalid_argument("trial count must be positive");
    }
    if (config.threads < 1) {
        throw std::invalid_argument("thread count must be positive");
    }
}

/// Empty path means standard output.
void emit_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw std::runtime_error("writing to standard output failed");
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("writing to '" + path + "' failed");
    }
}

/// The reproducibility echo: exactly the inputs that determine the numbers.
/// Output paths and thread counts are deliberately left out — results must
/// not depend on them, so they have no place in the result's identity.
JsonValue config_echo(const RunConfig& config, const std::vector<double>& angles_deg) {
    JsonValue echo = JsonValue::object();
    echo.set("command", JsonValue::str(config.command));
    echo.set("model", JsonValue::str(config.model));
    echo.set("kind", JsonValue::str(config.kind));
    echo.set("n", JsonValue::integer(config.n));
    echo.set("seed", JsonValue::integer(config.seed));
    JsonValue grid = JsonValue::array();
    for (const double a : angles_deg) {
        grid.push(JsonValue::number(a));
    }
    echo.set("angles_deg", std::move(grid));
    if (config.command == "sweep") {
        echo.set("analytic", JsonValue::boolean(config.analytic));
    }
    if (config.command == "locality") {
        JsonValue schedule = JsonValue::object();
        const ScheduleTimes t = parse_schedule_times(config.schedule_times);
        schedule.set("station_separation", JsonValue::number(config.schedule_l));
        schedule.set("emit", JsonValue::number(t.emit));
        schedule.set("choose_a", JsonValue::number(t.choose_a));
        schedule.set("choose_b", JsonValue::number(t.choose_b));
        schedule.set("measure_a", JsonValue::number(t.measure_a));
        schedule.set("measure_b", JsonValue::number(t.measure_b));
        echo.set("schedule", std::move(schedule));
        echo.set("allow_timelike", JsonValue::boolean(config.allow_timelike));
    }
    return echo;
}

JsonValue document_head(const RunConfig& config, const std::vector<double>& angles_deg) {
    JsonValue doc = JsonValue::object();
    doc.set("schema", JsonValue::str(kSchemaId));
    doc.set("version", JsonValue::str(kVersion));
    doc.set("config", config_echo(config, angles_deg));
    return doc;
}

JsonValue json_chsh(const ChshResult& result) {
    JsonValue block = JsonValue::object();
    block.set("s_value", JsonValue::number(result.s_value));
    block.set("s_stderr", JsonValue::number(result.s_stderr));
    block.set("ab", json_estimate(result.ab));
    block.set("a_prime_b", json_estimate(result.a_prime_b));
    block.set("ab_prime", json_estimate(result.ab_prime));
    block.set("a_prime_b_prime", json_estimate(result.a_prime_b_prime));
    return block;
}

JsonValue json_reads(std::uint8_t reads) {
    JsonValue names = JsonValue::array();
    if (reads & kReadSetting) names.push(JsonValue::str("setting"));
    if (reads & kReadPayload) names.push(JsonValue::str("payload"));
    if (reads & kReadRng) names.push(JsonValue::str("rng"));
    if (reads & kReadRemoteSetting) names.push(JsonValue::str("remote_setting"));
    return names;
}

JsonValue json_causality(const CausalitySummary& summary) {
    JsonValue block = JsonValue::object();
    block.set("schedule_spacelike", JsonValue::boolean(summary.schedule_spacelike));
    block.set("trials", JsonValue::integer(summary.trials));
    block.set("ledger_clean_trials", JsonValue::integer(summary.ledger_clean_trials));
    block.set("all_clean", JsonValue::boolean(summary.all_clean()));
    block.set("station_a_reads", json_reads(summary.a_reads_union));
    block.set("station_b_reads", json_reads(summary.b_reads_union));
    return block;
}

std::vector<double> resolve_angles(const RunConfig& config, const char* fallback) {
    return parse_angles_deg(config.angles.empty() ? fallback : config.angles);
}

}  // namespace

int cmd_sweep(const RunConfig& config) {
    validate_run_params(config);
    const MeasurementModel& model = resolve_model(config, false);
    const ParticleKind kind = parse_kind(config.kind);
    const std::vector<double> grid_deg = resolve_angles(config, "0:180:15");

    std::vector<double> grid_rad;
    grid_rad.reserve(grid_deg.size());
    for (const double a : grid_deg) {
        grid_rad.push_back(deg_to_rad(a));
    }
    SweepOptions opts;
    opts.threads = config.threads;
    opts.analytic = config.analytic;
    const std::vector<SweepPoint> table = sweep(model, kind, grid_rad, config.n, config.seed, opts);

    std::vector<SweepRow> rows;
    rows.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        rows.push_back(SweepRow{config.model, config.kind, grid_deg[i], &table[i].estimate});
    }
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    emit_text(config.out, csv.str());

    if (!config.plot.empty()) {
        std::ostringstream svg;
        write_sweep_svg(svg, rows, kind == ParticleKind::Photon);
        emit_text(config.plot, svg.str());
    }
    return 0;
}

int cmd_chsh(const RunConfig& config) {
    validate_run_params(config);
    const MeasurementModel& model = resolve_model(config, false);
    const ParticleKind kind = parse_kind(config.kind);
    const std::vector<double> angles_deg =
        resolve_angles(config, kind == ParticleKind::Photon ? "0,45,22.5,67.5" : "0,90,45,135");
    if (angles_deg.size() != 4) {
        throw std::invalid_argument("chsh needs exactly 4 angles: a,a_prime,b,b_prime");
    }

    ChshSettings settings;
    settings.a = map_setting(kind, deg_to_rad(angles_deg[0]));
    settings.a_prime = map_setting(kind, deg_to_rad(angles_deg[1]));
    settings.b = map_setting(kind, deg_to_rad(angles_deg[2]));
    settings.b_prime = map_setting(kind, deg_to_rad(angles_deg[3]));

    EstimateOptions opts;
    opts.threads = config.threads;
    const ChshResult result = chsh(model, settings, config.n, config.seed, opts);

    JsonValue doc = document_head(config, angles_deg);
    doc.set("chsh", json_chsh(result));
    emit_text(config.out, doc.dump());
    return 0;
}

namespace {

std::string yes_no(bool v) { return v ? "yes" : "no"; }

void print_audit_table(const AuditReport& report) {
    std::printf("%-22s %s\n", "model", report.model.c_str());
    std::printf("%-22s %s\n", "codomain", report.codomain.c_str());
    std::printf("%-22s %llu\n", "matched trials",
                static_cast<unsigned long long>(report.matched_trials));
    std::printf("%-22s %s\n", "matched exactly -1", yes_no(report.matched_setting_exact).c_str());
    if (report.marginal_a_plus.has_value()) {
        std::printf("%-22s %.5f\n", "marginal A (+1 frac)", *report.marginal_a_plus);
        std::printf("%-22s %.5f\n", "marginal B (+1 frac)", *report.marginal_b_plus);
        std::printf("%-22s %s\n", "marginals balanced", yes_no(*report.marginals_balanced).c_str());
    }
    if (report.im_mean.has_value()) {
        std::printf("%-22s %.6f\n", "mean imaginary part", *report.im_mean);
    }
    std::printf("%-22s %.4f +/- %.4f\n", "CHSH S (canonical)", report.chsh_canonical.s_value,
                report.chsh_canonical.s_stderr);
    std::printf("%-22s %s\n", "|S| > 2 (4 sigma)",
                yes_no(report.chsh_exceeds_classical_bound).c_str());
    std::printf("%-22s %llu\n", "locality trials",
                static_cast<unsigned long long>(report.locality_trials));
    std::printf("%-22s %s\n", "locality compliant", yes_no(report.locality_compliant).c_str());
    std::printf("note: %s\n", report.locality_scope_note.c_str());
}

JsonValue json_audit(const AuditReport& report) {
    JsonValue block = JsonValue::object();
    block.set("model", JsonValue::str(report.model));
    block.set("codomain", JsonValue::str(report.codomain));
    block.set("matched_trials", JsonValue::integer(report.matched_trials));
    block.set("matched_setting_exact", JsonValue::boolean(report.matched_setting_exact));
    if (report.marginal_a_plus.has_value()) {
        block.set("marginal_a_plus", JsonValue::number(*report.marginal_a_plus));
        block.set("marginal_b_plus", JsonValue::number(*report.marginal_b_plus));
        block.set("marginals_balanced", JsonValue::boolean(*report.marginals_balanced));
    }
    if (report.im_mean.has_value()) {
        block.set("im_mean", JsonValue::number(*report.im_mean));
    }
    block.set("chsh", json_chsh(report.chsh_canonical));
    block.set("chsh_exceeds_classical_bound",
              JsonValue::boolean(report.chsh_exceeds_classical_bound));
    JsonValue locality = JsonValue::object();
    locality.set("trials", JsonValue::integer(report.locality_trials));
    locality.set("compliant", JsonValue::boolean(report.locality_compliant));
    locality.set("note", JsonValue::str(report.locality_scope_note));
    block.set("locality", std::move(locality));
    return block;
}

}  // namespace

int cmd_audit(const RunConfig& config) {
    validate_run_params(config);
    const MeasurementModel& model = resolve_model(config, false);
    EstimateOptions opts;
    opts.threads = config.threads;
    const AuditReport report = audit_model(model, config.n, config.seed, opts);

    print_audit_table(report);
    JsonValue doc = document_head(config, {});
    doc.set("audit", json_audit(report));
    if (!config.out.empty()) {
        emit_text(config.out, doc.dump());
    } else {
        std::cout << doc.dump();  // machine block follows the table
    }
    return 0;
}

int cmd_locality(const RunConfig& config) {
    validate_run_params(config);
    const MeasurementModel& model = resolve_model(config, true);
    const ParticleKind kind = parse_kind(config.kind);

    TrialSchedule schedule;
    schedule.station_separation = config.schedule_l;
    schedule.times = parse_schedule_times(config.schedule_times);
    const ScheduleCheck check = validate_schedule(schedule);
    if (!check.ordering_ok) {
        std::string msg = "schedule rejected:";
        for (const std::string& d : check.diagnostics) {
            msg += " " + d + ";";
        }
        throw std::invalid_argument(msg);
    }
    if (!check.spacelike && !config.allow_timelike) {
        throw std::invalid_argument(
            "measurement events are not spacelike separated; rerun with --allow-timelike to "
            "record the run flagged instead");
    }

    const std::vector<double> angles_deg = resolve_angles(config, "0,0");
    SettingSampler sampler_a, sampler_b;
    if (angles_deg.size() == 2) {
        sampler_a.candidates = {map_setting(kind, deg_to_rad(angles_deg[0]))};
        sampler_b.candidates = {map_setting(kind, deg_to_rad(angles_deg[1]))};
    } else if (angles_deg.size() == 4) {
        // CHSH layout: stations draw per-trial from {a, a_prime} x {b, b_prime}.
        sampler_a.candidates = {map_setting(kind, deg_to_rad(angles_deg[0])),
                                map_setting(kind, deg_to_rad(angles_deg[1]))};
        sampler_b.candidates = {map_setting(kind, deg_to_rad(angles_deg[2])),
                                map_setting(kind, deg_to_rad(angles_deg[3]))};
    } else {
        throw std::invalid_argument(
            "locality needs 2 angles (fixed a,b) or 4 (a,a_prime,b,b_prime)");
    }

    EstimateOptions opts;
    opts.threads = config.threads;
    const ExperimentRun run =
        run_experiment(schedule, model, sampler_a, sampler_b, config.n, config.seed, opts);

    JsonValue doc = document_head(config, angles_deg);
    JsonValue estimates = JsonValue::array();
    for (const auto& row : run.grid) {
        for (const auto& cell : row) {
            if (cell.has_value()) {
                estimates.push(json_estimate(*cell));
            }
        }
    }
    doc.set("estimates", std::move(estimates));
    if (angles_deg.size() == 4 && run.grid[0][0].has_value() && run.grid[1][0].has_value() &&
        run.grid[0][1].has_value() && run.grid[1][1].has_value()) {
        doc.set("chsh", json_chsh(combine_chsh(*run.grid[0][0], *run.grid[1][0],
                                               *run.grid[0][1], *run.grid[1][1])));
    }
    doc.set("causality", json_causality(run.causality));
    emit_text(config.out, doc.dump());
    return 0;
}

}  // namespace bellsim::cli
