#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellsim/estimator.hpp"
#include "bellsim/experiments.hpp"
#include "bellsim/models.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

// ---------------------------------------------------------------------------
// Event-scheduled two-station harness. Geometry is a 1-D line with the source
// at 0, stations at -L and +L, signal speed c = 1. Settings are chosen while
// the particles are in flight; the two Measure events must fall outside each
// other's light cone. Station procedures receive only their permitted inputs,
// and every access is recorded in a per-trial ledger.
// ---------------------------------------------------------------------------

enum class Actor : std::uint8_t { Source, StationA, StationB };
enum class EventKind : std::uint8_t { Emit, ChooseSetting, Measure };

std::string to_string(Actor actor);
std::string to_string(EventKind kind);

struct SpacetimeEvent {
    Actor actor = Actor::Source;
    EventKind kind = EventKind::Emit;
    double position = 0.0;
    double time = 0.0;
    std::string summary;  // human-readable payload note ("lambda=(..)", "setting idx=..")
};

struct ScheduleTimes {
    double emit = 0.0;
    double choose_a = 0.5;
    double choose_b = 0.5;
    double measure_a = 0.9;
    double measure_b = 0.9;
};

struct TrialSchedule {
    double station_separation = 1.0;  // L > 0; stations sit at -L and +L
    ScheduleTimes times;

    static TrialSchedule standard() { return TrialSchedule{}; }
};

struct ScheduleCheck {
    bool ordering_ok = false;  // Emit before both ChooseSetting; each before its Measure
    bool spacelike = false;    // |measure_a - measure_b| < 2L/c
    std::vector<std::string> diagnostics;

    bool ok() const { return ordering_ok && spacelike; }
};

/// Total: every schedule either passes or gets a specific diagnosis per
/// violated constraint. Non-finite numbers and L <= 0 count as ordering
/// defects.
ScheduleCheck validate_schedule(const TrialSchedule& schedule);

struct StationLedger {
    std::uint8_t reads = 0;  // StationRead bits

    bool clean() const { return (reads & kReadRemoteSetting) == 0; }
};

struct CausalLog {
    std::vector<SpacetimeEvent> events;  // time-ordered; ties resolved A before B
    StationLedger ledger_a;
    StationLedger ledger_b;
};

struct CausalityReport {
    bool spacelike = false;
    bool ledger_clean = false;
};

/// Mirrors the runner's chooser: no draw when only one candidate is offered.
struct SettingSampler {
    std::vector<UnitVector3> candidates;

    static SettingSampler fixed(const UnitVector3& setting) { return {{setting}}; }
};

struct TrialRngs {
    RngStream source;
    RngStream chooser_a;
    RngStream chooser_b;
    RngStream station_a;
    RngStream station_b;

    /// Same role layout as one runner chunk, so a hand-run trial can replay
    /// the first trial of a batch.
    static TrialRngs derive(std::uint64_t seed, std::uint64_t stream_root, std::uint64_t chunk = 0);
};

struct TrialOutcome {
    TrialValue value;
    CausalLog log;
    std::size_t chosen_a = 0;  // indices into the samplers' candidate lists
    std::size_t chosen_b = 0;
};

/// One fully-logged trial. Schedules that violate event ordering are rejected
/// before any draw is consumed; a merely timelike schedule runs and is
/// reported as such by check_causality.
TrialOutcome run_trial(const TrialSchedule& schedule, const MeasurementModel& model,
                       const SettingSampler& sampler_a, const SettingSampler& sampler_b,
                       TrialRngs& rngs);

/// Requires a complete log (one Emit, one ChooseSetting and one Measure per
/// station, internally ordered); incomplete logs are rejected.
CausalityReport check_causality(const CausalLog& log, const TrialSchedule& schedule);

struct CausalitySummary {
    bool schedule_spacelike = false;
    std::uint64_t trials = 0;
    std::uint64_t ledger_clean_trials = 0;
    std::uint8_t a_reads_union = 0;
    std::uint8_t b_reads_union = 0;

    bool all_clean() const { return trials > 0 && ledger_clean_trials == trials; }
};

struct ExperimentRun {
    // One estimate per (candidate_a, candidate_b) pair that received at least
    // one trial; empty cells stay unset. Single-sampler runs have exactly one.
    std::vector<std::vector<std::optional<CorrelationEstimate>>> grid;
    CausalitySummary causality;

    const CorrelationEstimate& single() const;  // 1x1 convenience accessor
};

/**
 * Batch counterpart of run_trial: same chunked deterministic engine as
 * estimate_correlation, so for a fixed-setting sampler the estimate is
 * bit-identical to the direct one. The harness only adds the schedule check
 * and the aggregate ledger.
 */
ExperimentRun run_experiment(const TrialSchedule& schedule, const MeasurementModel& model,
                             const SettingSampler& sampler_a, const SettingSampler& sampler_b,
                             std::uint64_t n, std::uint64_t seed, const EstimateOptions& opts = {});

/**
 * Negative-control fixture: station A peeks at the remote station's setting
 * through the instrumented side channel and signs the shared direction onto
 * it, so the ledger flags every trial. Registered under the name "cheat";
 * reachable only through the harness lookup below, never find_model().
 */
const MeasurementModel* find_harness_model(std::string_view name);

}  // namespace bellsim
