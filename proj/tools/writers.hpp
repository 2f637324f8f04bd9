#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bellsim/estimator.hpp"

namespace bellsim::cli {

/// %.17g — enough digits to round-trip any IEEE-754 double, and the same
/// bytes on every rerun. Non-finite values are refused.
std::string format_double(double value);

/**
 * Insertion-ordered JSON document builder. The vendored parser is fine for
 * reading configs, but emitted documents must have stable key order and
 * fixed float formatting so reruns are byte-identical; this writer owns that
 * contract.
 */
class JsonValue {
public:
    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string value);
    static JsonValue number(double value);
    static JsonValue integer(std::uint64_t value);
    static JsonValue boolean(bool value);

    /// Object key append; keys keep insertion order and must be unique.
    JsonValue& set(const std::string& key, JsonValue value);
    /// Array element append.
    JsonValue& push(JsonValue value);

    std::string dump() const;  // two-space indent, LF endings, trailing newline

private:
    enum class Kind { Object, Array, String, Number, Integer, Boolean };

    JsonValue() = default;

    void write(std::string& out, int depth) const;

    Kind kind_ = Kind::Object;
    std::string string_;
    double number_ = 0.0;
    std::uint64_t integer_ = 0;
    bool boolean_ = false;
    std::vector<std::pair<std::string, JsonValue>> members_;
    std::vector<JsonValue> elements_;
};

/// Estimate as a JSON object: settings as unit vectors, counts, moments,
/// imaginary-part fields only when the model produced complex values.
JsonValue json_estimate(const CorrelationEstimate& estimate);

struct SweepRow {
    std::string model;
    std::string kind;
    double theta_deg;
    const CorrelationEstimate* estimate;
};

/// Fixed header: model,kind,theta_deg,mean,stderr,n,im_mean. im_mean stays
/// empty for models with real +/-1 outcomes. UTF-8, LF.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Static overlay plot: estimate points with 2-sigma error bars against the
/// closed-form reference curve for the kind.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool photon);

}  // namespace bellsim::cli
