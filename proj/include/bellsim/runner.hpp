#pragma once

#include <cstdint>
#include <vector>

#include "bellsim/estimator.hpp"
#include "bellsim/models.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/**
 * Deterministic chunked trial loop shared by the direct estimator and the
 * locality harness.
 *
 * Trials are split into fixed-size chunks (kChunkTrials). Chunk c draws from
 * five streams derived purely from (seed, stream_root, c) — source payload,
 * per-station setting choosers, per-station measurement randomness — and
 * produces one tally block. Blocks are merged in chunk order on the calling
 * thread, so the result is bit-identical for every thread count and the union
 * of consumed samples does not depend on scheduling.
 *
 * Per trial, in order: the source emits a shared direction (two raw draws);
 * each station with more than one candidate setting picks one (one raw draw,
 * own chooser stream); each station measures; the records are combined.
 */
inline constexpr std::uint64_t kChunkTrials = 65536;

// Chunk-local stream roles.
inline constexpr std::uint64_t kRoleSource = 0;
inline constexpr std::uint64_t kRoleChooserA = 1;
inline constexpr std::uint64_t kRoleChooserB = 2;
inline constexpr std::uint64_t kRoleStationA = 3;
inline constexpr std::uint64_t kRoleStationB = 4;

/// Uniform pick among k candidates: one draw when k > 1, none when k == 1.
/// Shared by the batch loop and the single-trial harness so a hand-run trial
/// replays a batch trial exactly.
std::size_t pick_candidate(RngStream& chooser, std::size_t k);

struct TrialRunRequest {
    const MeasurementModel* model = nullptr;
    std::vector<UnitVector3> settings_a;  // station A candidates; one = fixed setting
    std::vector<UnitVector3> settings_b;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_root = 0;
    int threads = 1;
};

struct TrialRunResult {
    // Row-major tally grid: cells[ia * settings_b.size() + ib].
    std::vector<RunningTally> cells;
    std::uint64_t trials = 0;
    std::uint64_t ledger_clean_trials = 0;  // trials where neither station read beyond its permitted set
    std::uint8_t a_reads_union = 0;         // StationRead bits seen across all trials
    std::uint8_t b_reads_union = 0;
};

TrialRunResult run_trials(const TrialRunRequest& request);

}  // namespace bellsim
