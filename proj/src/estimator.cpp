#include "bellsim/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {

void RunningTally::push(double re, double im) {
    n += 1;
    const double d_re = re - mean;
    mean += d_re / static_cast<double>(n);
    m2 += d_re * (re - mean);
    const double d_im = im - im_mean;
    im_mean += d_im / static_cast<double>(n);
    im_m2 += d_im * (im - im_mean);
}

void RunningTally::accumulate(const TrialValue& value) {
    if (const auto* pair = std::get_if<PairOutcome>(&value)) {
        saw_pair = true;
        const int product = pair->a_out * pair->b_out;
        all_exactly_minus_one = all_exactly_minus_one && product == -1;
        a_plus += pair->a_out == +1;
        b_plus += pair->b_out == +1;
        push(static_cast<double>(product), 0.0);
    } else {
        const Complex z = std::get<ComplexProduct>(value).z;
        saw_complex = true;
        all_exactly_minus_one = all_exactly_minus_one && z == Complex(-1.0, 0.0);
        push(z.real(), z.imag());
    }
}

void RunningTally::merge(const RunningTally& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double nt = na + nb;
    const double d_re = other.mean - mean;
    mean += d_re * nb / nt;
    m2 += other.m2 + d_re * d_re * na * nb / nt;
    const double d_im = other.im_mean - im_mean;
    im_mean += d_im * nb / nt;
    im_m2 += other.im_m2 + d_im * d_im * na * nb / nt;
    n += other.n;
    a_plus += other.a_plus;
    b_plus += other.b_plus;
    saw_pair = saw_pair || other.saw_pair;
    saw_complex = saw_complex || other.saw_complex;
    all_exactly_minus_one = all_exactly_minus_one && other.all_exactly_minus_one;
}

namespace {

double stderr_from(double m2, std::uint64_t n) {
    if (n < 2) return 0.0;
    const double nd = static_cast<double>(n);
    const double var = m2 / (nd - 1.0);
    return std::sqrt(var > 0.0 ? var / nd : 0.0);
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::logic_error(std::string("estimate: non-finite ") + what);
    }
}

}  // namespace

CorrelationEstimate make_estimate(const RunningTally& tally, std::string model,
                                  const UnitVector3& a, const UnitVector3& b) {
    if (tally.n == 0) {
        throw std::invalid_argument("make_estimate: no trials accumulated");
    }
    CorrelationEstimate est{std::move(model), a, b, tally.n, tally.mean,
                            stderr_from(tally.m2, tally.n), std::nullopt, std::nullopt};
    if (tally.saw_complex) {
        est.im_mean = tally.im_mean;
        est.im_stderr = stderr_from(tally.im_m2, tally.n);
        require_finite(*est.im_mean, "im_mean");
        require_finite(*est.im_stderr, "im_stderr");
    }
    require_finite(est.mean, "mean");
    require_finite(est.stderr_, "stderr");
    return est;
}

CorrelationEstimate merge_estimates(const std::vector<CorrelationEstimate>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("merge_estimates: no parts");
    }
    const CorrelationEstimate& first = parts.front();
    RunningTally pooled;
    for (const CorrelationEstimate& part : parts) {
        if (part.model != first.model || !(part.setting_a == first.setting_a) ||
            !(part.setting_b == first.setting_b)) {
            throw std::invalid_argument("merge_estimates: parts disagree on model or settings");
        }
        RunningTally t;
        t.n = part.n;
        t.mean = part.mean;
        // stderr = sqrt(m2 / ((n-1) n)) inverted; n = 1 carries no spread.
        t.m2 = part.n > 1 ? part.stderr_ * part.stderr_ * static_cast<double>(part.n) *
                                static_cast<double>(part.n - 1)
                          : 0.0;
        if (part.im_mean) {
            t.saw_complex = true;
            t.im_mean = *part.im_mean;
            t.im_m2 = part.n > 1 ? *part.im_stderr * *part.im_stderr *
                                       static_cast<double>(part.n) *
                                       static_cast<double>(part.n - 1)
                                 : 0.0;
        } else {
            t.saw_pair = true;
        }
        pooled.merge(t);
    }
    return make_estimate(pooled, first.model, first.setting_a, first.setting_b);
}

}  // namespace bellsim
