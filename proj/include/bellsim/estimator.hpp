#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/models.hpp"
#include "bellsim/vec3.hpp"

namespace bellsim {

/**
 * Streaming moments of one correlation cell (Welford/Chan form). Tallies from
 * disjoint trial blocks merge exactly; merging in a fixed block order makes
 * results bit-identical across thread layouts.
 */
struct RunningTally {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double im_mean = 0.0;
    double im_m2 = 0.0;
    std::uint64_t a_plus = 0;  // station outcomes that were +1 (pair models)
    std::uint64_t b_plus = 0;
    bool saw_pair = false;
    bool saw_complex = false;
    bool all_exactly_minus_one = true;  // every value so far was exactly -1

    void accumulate(const TrialValue& value);
    void merge(const RunningTally& other);

private:
    void push(double re, double im);
};

/// Monte Carlo estimate of P(a, b) for one model: mean of per-trial products
/// (pair models) or of Re z with the Im part tracked alongside (complex
/// models). stderr is sample_std/sqrt(n).
struct CorrelationEstimate {
    std::string model;
    UnitVector3 setting_a = UnitVector3::x_axis();
    UnitVector3 setting_b = UnitVector3::x_axis();
    std::uint64_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::optional<double> im_mean;
    std::optional<double> im_stderr;
};

/// Tally -> estimate; validates finiteness of every public number.
CorrelationEstimate make_estimate(const RunningTally& tally, std::string model,
                                  const UnitVector3& a, const UnitVector3& b);

/// Pools partial estimates over the same (model, settings) into one, exactly
/// as a single pass over the union of trials would (to 1e-12). Parts with
/// mismatched model or settings are rejected.
CorrelationEstimate merge_estimates(const std::vector<CorrelationEstimate>& parts);

}  // namespace bellsim
