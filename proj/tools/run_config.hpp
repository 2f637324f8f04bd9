#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/locality.hpp"
#include "bellsim/models.hpp"

namespace bellsim::cli {

/**
 * Everything a run needs; a result is reproducible from this plus nothing.
 * Loadable from a JSON document (--config) with individual flags overriding,
 * and echoed verbatim into every result document.
 */
struct RunConfig {
    std::string command;            // sweep | chsh | audit | locality
    std::string model = "qm";       // qm | lhv-sign | algebraic | cheat (locality only)
    std::string kind = "spin";      // spin | photon
    std::uint64_t n = 100000;
    std::uint64_t seed = 1;
    std::string angles;             // "start:stop:step" or "a,b,c,..." in degrees
    std::string out;                // output path; empty = standard output
    std::string plot;               // optional SVG path (sweep only)
    int threads = 1;
    bool analytic = false;          // sweep: closed-form values instead of sampling
    double schedule_l = 1.0;
    std::string schedule_times = "0,0.5,0.5,0.9,0.9";  // emit,choose_a,choose_b,measure_a,measure_b
    bool allow_timelike = false;    // locality: run flagged instead of refusing
};

/// "start:stop:step" (inclusive stop, within half a step) or a comma list.
/// Degrees in, degrees out. Malformed input throws std::invalid_argument.
std::vector<double> parse_angles_deg(const std::string& text);

/// Parses "t_emit,t_choose_a,t_choose_b,t_measure_a,t_measure_b".
ScheduleTimes parse_schedule_times(const std::string& text);

ParticleKind parse_kind(const std::string& kind);

/// Overlays keys from a JSON config file onto `config`. Unknown keys are
/// rejected so typos cannot silently revert to defaults.
void load_config_file(const std::string& path, RunConfig& config);

}  // namespace bellsim::cli
