#include "bellsim/locality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bellsim/runner.hpp"

namespace bellsim {

std::string to_string(Actor actor) {
    switch (actor) {
        case Actor::Source: return "source";
        case Actor::StationA: return "station_a";
        case Actor::StationB: return "station_b";
    }
    return "?";
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Emit: return "emit";
        case EventKind::ChooseSetting: return "choose_setting";
        case EventKind::Measure: return "measure";
    }
    return "?";
}

ScheduleCheck validate_schedule(const TrialSchedule& schedule) {
    ScheduleCheck check;
    const ScheduleTimes& t = schedule.times;

    const bool finite = std::isfinite(schedule.station_separation) && std::isfinite(t.emit) &&
                        std::isfinite(t.choose_a) && std::isfinite(t.choose_b) &&
                        std::isfinite(t.measure_a) && std::isfinite(t.measure_b);
    if (!finite) {
        check.diagnostics.push_back("schedule contains a non-finite number");
        return check;
    }
    if (schedule.station_separation <= 0.0) {
        check.diagnostics.push_back("station separation must be positive");
        return check;
    }

    check.ordering_ok = true;
    if (!(t.emit < t.choose_a)) {
        check.ordering_ok = false;
        check.diagnostics.push_back("station A must choose its setting after emission");
    }
    if (!(t.emit < t.choose_b)) {
        check.ordering_ok = false;
        check.diagnostics.push_back("station B must choose its setting after emission");
    }
    if (!(t.choose_a < t.measure_a)) {
        check.ordering_ok = false;
        check.diagnostics.push_back("station A must measure after choosing its setting");
    }
    if (!(t.choose_b < t.measure_b)) {
        check.ordering_ok = false;
        check.diagnostics.push_back("station B must measure after choosing its setting");
    }

    const double light_time = 2.0 * schedule.station_separation;  // c = 1
    check.spacelike = std::abs(t.measure_a - t.measure_b) < light_time;
    if (!check.spacelike) {
        check.diagnostics.push_back(
            "measurement events are not spacelike separated: |dt| >= 2L/c");
    }
    return check;
}

namespace {

std::string format3(const Vec3& v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.4f, %.4f, %.4f)", v.x, v.y, v.z);
    return buf;
}

void reject_unless_ordered(const TrialSchedule& schedule) {
    const ScheduleCheck check = validate_schedule(schedule);
    if (!check.ordering_ok) {
        std::string msg = "schedule rejected:";
        for (const std::string& d : check.diagnostics) {
            msg += " ";
            msg += d;
            msg += ";";
        }
        throw std::invalid_argument(msg);
    }
}

}  // namespace

TrialRngs TrialRngs::derive(std::uint64_t seed, std::uint64_t stream_root, std::uint64_t chunk) {
    RngStream base = RngStream(seed, stream_root).substream(chunk);
    return TrialRngs{base.substream(kRoleSource), base.substream(kRoleChooserA),
                     base.substream(kRoleChooserB), base.substream(kRoleStationA),
                     base.substream(kRoleStationB)};
}

TrialOutcome run_trial(const TrialSchedule& schedule, const MeasurementModel& model,
                       const SettingSampler& sampler_a, const SettingSampler& sampler_b,
                       TrialRngs& rngs) {
    reject_unless_ordered(schedule);
    if (sampler_a.candidates.empty() || sampler_b.candidates.empty()) {
        throw std::invalid_argument("run_trial: each sampler needs at least one candidate");
    }

    const double L = schedule.station_separation;
    const ScheduleTimes& t = schedule.times;
    TrialOutcome outcome;

    const SharedPayload payload{sample_uniform_sphere(rngs.source)};
    outcome.log.events.push_back({Actor::Source, EventKind::Emit, 0.0, t.emit,
                                  "lambda=" + format3(payload.lambda.vec())});

    outcome.chosen_a = pick_candidate(rngs.chooser_a, sampler_a.candidates.size());
    outcome.chosen_b = pick_candidate(rngs.chooser_b, sampler_b.candidates.size());
    const UnitVector3& sa = sampler_a.candidates[outcome.chosen_a];
    const UnitVector3& sb = sampler_b.candidates[outcome.chosen_b];
    outcome.log.events.push_back({Actor::StationA, EventKind::ChooseSetting, -L, t.choose_a,
                                  "setting=" + format3(sa.vec())});
    outcome.log.events.push_back({Actor::StationB, EventKind::ChooseSetting, +L, t.choose_b,
                                  "setting=" + format3(sb.vec())});

    StationContext ctx_a(sa, payload, rngs.station_a, &sb);
    StationContext ctx_b(sb, payload, rngs.station_b, &sa);
    const StationRecord rec_a = model.measure_a(ctx_a);
    const StationRecord rec_b = model.measure_b(ctx_b);
    outcome.log.events.push_back({Actor::StationA, EventKind::Measure, -L, t.measure_a,
                                  "record committed"});
    outcome.log.events.push_back({Actor::StationB, EventKind::Measure, +L, t.measure_b,
                                  "record committed"});

    outcome.value = model.combine(rec_a, rec_b, sa, sb, payload);
    outcome.log.ledger_a.reads = ctx_a.reads();
    outcome.log.ledger_b.reads = ctx_b.reads();

    // Emitted in causal order above; re-sort so uneven per-station times still
    // yield a time-ordered log (stable: ties keep A before B).
    std::stable_sort(outcome.log.events.begin(), outcome.log.events.end(),
                     [](const SpacetimeEvent& x, const SpacetimeEvent& y) { return x.time < y.time; });
    return outcome;
}

CausalityReport check_causality(const CausalLog& log, const TrialSchedule& schedule) {
    const SpacetimeEvent* emit = nullptr;
    const SpacetimeEvent* choose[2] = {nullptr, nullptr};
    const SpacetimeEvent* measure[2] = {nullptr, nullptr};

    const auto slot = [](Actor a) { return a == Actor::StationA ? 0 : 1; };
    for (const SpacetimeEvent& e : log.events) {
        const SpacetimeEvent** dst = nullptr;
        if (e.kind == EventKind::Emit && e.actor == Actor::Source) {
            dst = &emit;
        } else if (e.kind == EventKind::ChooseSetting && e.actor != Actor::Source) {
            dst = &choose[slot(e.actor)];
        } else if (e.kind == EventKind::Measure && e.actor != Actor::Source) {
            dst = &measure[slot(e.actor)];
        } else {
            throw std::invalid_argument("check_causality: event with impossible actor/kind pair");
        }
        if (*dst != nullptr) {
            throw std::invalid_argument("check_causality: duplicate " + to_string(e.kind) +
                                        " event for " + to_string(e.actor));
        }
        *dst = &e;
    }
    if (emit == nullptr || choose[0] == nullptr || choose[1] == nullptr ||
        measure[0] == nullptr || measure[1] == nullptr) {
        throw std::invalid_argument("check_causality: incomplete log (need emit, two setting "
                                    "choices, two measurements)");
    }

    CausalityReport report;
    const double light_time = 2.0 * schedule.station_separation;  // c = 1
    report.spacelike = std::abs(measure[0]->time - measure[1]->time) < light_time;
    report.ledger_clean = log.ledger_a.clean() && log.ledger_b.clean();
    return report;
}

const CorrelationEstimate& ExperimentRun::single() const {
    if (grid.size() != 1 || grid[0].size() != 1 || !grid[0][0].has_value()) {
        throw std::logic_error("ExperimentRun::single: run used more than one setting pair");
    }
    return *grid[0][0];
}

ExperimentRun run_experiment(const TrialSchedule& schedule, const MeasurementModel& model,
                             const SettingSampler& sampler_a, const SettingSampler& sampler_b,
                             std::uint64_t n, std::uint64_t seed, const EstimateOptions& opts) {
    reject_unless_ordered(schedule);

    TrialRunRequest request;
    request.model = &model;
    request.settings_a = sampler_a.candidates;
    request.settings_b = sampler_b.candidates;
    request.n = n;
    request.seed = seed;
    request.stream_root = opts.stream_root;
    request.threads = opts.threads;
    const TrialRunResult run = run_trials(request);

    ExperimentRun result;
    const std::size_t ka = sampler_a.candidates.size();
    const std::size_t kb = sampler_b.candidates.size();
    result.grid.resize(ka);
    for (std::size_t ia = 0; ia < ka; ++ia) {
        result.grid[ia].resize(kb);
        for (std::size_t ib = 0; ib < kb; ++ib) {
            const RunningTally& cell = run.cells[ia * kb + ib];
            if (cell.n > 0) {
                result.grid[ia][ib] = make_estimate(cell, std::string(model.name()),
                                                    sampler_a.candidates[ia],
                                                    sampler_b.candidates[ib]);
            }
        }
    }
    result.causality.schedule_spacelike = validate_schedule(schedule).spacelike;
    result.causality.trials = run.trials;
    result.causality.ledger_clean_trials = run.ledger_clean_trials;
    result.causality.a_reads_union = run.a_reads_union;
    result.causality.b_reads_union = run.b_reads_union;
    return result;
}

namespace {

/// The deliberately non-local fixture; see find_harness_model.
class RemoteReadingModel final : public MeasurementModel {
public:
    std::string_view name() const override { return "cheat"; }
    ValueKind value_kind() const override { return ValueKind::PairOutcome; }

    StationRecord measure_a(const StationContext& ctx) const override {
        // Signs the shared direction onto the *other* station's setting —
        // exactly the read the ledger exists to catch.
        const UnitVector3& remote = ctx.remote_setting();
        return SignOutcome{sign_plus(dot(ctx.payload().lambda, remote))};
    }

    StationRecord measure_b(const StationContext& ctx) const override {
        return SignOutcome{-sign_plus(dot(ctx.payload().lambda, ctx.setting()))};
    }

    TrialValue combine(const StationRecord& rec_a, const StationRecord& rec_b,
                       const UnitVector3&, const UnitVector3&,
                       const SharedPayload&) const override {
        return PairOutcome{std::get<SignOutcome>(rec_a).value,
                           std::get<SignOutcome>(rec_b).value};
    }
};

}  // namespace

const MeasurementModel* find_harness_model(std::string_view name) {
    static const RemoteReadingModel cheat;
    if (name == "cheat") {
        return &cheat;
    }
    return find_model(name);
}

}  // namespace bellsim
