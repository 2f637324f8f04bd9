// Acceptance gate: one self-contained check per release criterion, one
// PASS/FAIL line each, nonzero exit if anything fails. Tolerances are pinned
// here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bellsim/algebra.hpp"
#include "bellsim/experiments.hpp"
#include "bellsim/locality.hpp"
#include "bellsim/models.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/runner.hpp"

using namespace bellsim;

namespace {

constexpr double kAlgebraTol = 1e-12;    // coefficient / matrix-entry error budget
constexpr double kExactFloor = 1e-12;    // added to 4*stderr so stderr=0 demands ~exactness, not bit-equality
constexpr double kTsirelson = 2.8284271247461903;  // 2*sqrt(2)
constexpr double kSignGapMin = 0.2;      // required |line - (-cos)| at 45 degrees

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

int worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<double> grid_deg(double start, double stop, double step) {
    std::vector<double> out;
    for (double d = start; d <= stop + step / 2.0; d += step) {
        out.push_back(deg_to_rad(d));
    }
    return out;
}

AlgebraElement random_element(RngStream& rng) {
    AlgebraElement e;
    for (auto& coeff : e.c) {
        coeff = Complex(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
    }
    return e;
}

// --- criterion bodies -------------------------------------------------------

void criterion_algebra(Checker& check) {
    const AlgebraElement one = AlgebraElement::one();
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const AlgebraElement li = AlgebraElement::generator(i);
            const AlgebraElement lj = AlgebraElement::generator(j);
            const AlgebraElement anti = algebra_mul(li, lj) + algebra_mul(lj, li);
            const AlgebraElement want = (i == j) ? Complex(2.0, 0.0) * one : Complex(0.0, 0.0) * one;
            check.expect(max_coeff_distance(anti, want) == 0.0,
                         "anticommutator not exact at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
        }
    }
    for (int k = 1; k <= 3; ++k) {
        const int i = k;
        const int j = (k % 3) + 1;
        const int l = (j % 3) + 1;
        const AlgebraElement prod =
            algebra_mul(AlgebraElement::generator(i), AlgebraElement::generator(j));
        const AlgebraElement want = Complex(0.0, 1.0) * AlgebraElement::generator(l);
        check.expect(max_coeff_distance(prod, want) == 0.0,
                     "cyclic product not exact at k=" + std::to_string(k));
    }

    RngStream rng(2026, 11);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const AlgebraElement x = random_element(rng);
        const AlgebraElement y = random_element(rng);
        const MatrixRep lhs = to_matrix(algebra_mul(x, y));
        const MatrixRep rhs = matrix_mul(to_matrix(x), to_matrix(y));
        worst = std::max(worst, max_entry_distance(lhs, rhs));
    }
    check.expect(worst < kAlgebraTol, fmt("matrix-representation error %.3e >= 1e-12", worst));
}

void criterion_product_identity(Checker& check) {
    RngStream rng(2026, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const UnitVector3 a = sample_uniform_sphere(rng);
        const UnitVector3 b = sample_uniform_sphere(rng);
        const AlgebraElement lhs = algebra_mul(embed_vector(a), embed_vector(b));
        worst = std::max(worst, max_coeff_distance(lhs, product_identity(a, b)));
    }
    check.expect(worst < kAlgebraTol, fmt("pair-product identity error %.3e >= 1e-12", worst));
}

void criterion_matched_exact(Checker& check) {
    const UnitVector3 directions[] = {UnitVector3::x_axis(),
                                      UnitVector3::normalized(0.31, -1.2, 0.77)};
    for (const char* name : {"qm", "lhv-sign", "algebraic"}) {
        const MeasurementModel* model = find_model(name);
        check.expect(model != nullptr, std::string("model missing: ") + name);
        if (model == nullptr) {
            continue;
        }
        for (const UnitVector3& d : directions) {
            TrialRunRequest request;
            request.model = model;
            request.settings_a = {d};
            request.settings_b = {d};
            request.n = 50000;
            request.seed = 31;
            request.threads = worker_threads();
            const TrialRunResult run = run_trials(request);
            const RunningTally& cell = run.cells[0];
            const bool exact = cell.all_exactly_minus_one && cell.mean == -1.0 && cell.m2 == 0.0 &&
                               cell.n == request.n;
            check.expect(exact, std::string(name) + ": a matched-setting trial was not exactly -1");
        }
    }
}

void criterion_quantum_curve(Checker& check) {
    const std::vector<double> grid = grid_deg(0.0, 180.0, 15.0);
    SweepOptions opts;
    opts.threads = worker_threads();
    for (const char* name : {"qm", "algebraic"}) {
        const MeasurementModel* model = find_model(name);
        const std::vector<SweepPoint> points = sweep(*model, ParticleKind::SpinHalf, grid,
                                                     1000000, 101, opts);
        for (const SweepPoint& point : points) {
            const double want = -std::cos(point.angle_rad);
            const double tol = 4.0 * point.estimate.stderr_ + kExactFloor;
            check.expect(std::abs(point.estimate.mean - want) <= tol,
                         std::string(name) +
                             fmt(": E(%.0f deg) = %.6f vs -cos = %.6f beyond 4 sigma",
                                 rad_to_deg(point.angle_rad), point.estimate.mean, want));
            if (point.estimate.im_mean.has_value()) {
                const double im_tol = 4.0 * point.estimate.im_stderr.value() + kExactFloor;
                check.expect(std::abs(point.estimate.im_mean.value()) <= im_tol,
                             std::string(name) + fmt(": Im mean %.3e beyond 4 sigma at %.0f deg",
                                                     point.estimate.im_mean.value(),
                                                     rad_to_deg(point.angle_rad)));
            }
        }
    }
}

void criterion_sign_separation(Checker& check) {
    const std::vector<double> grid = grid_deg(0.0, 180.0, 15.0);
    SweepOptions opts;
    opts.threads = worker_threads();
    const std::vector<SweepPoint> points =
        sweep(*find_model("lhv-sign"), ParticleKind::SpinHalf, grid, 1000000, 102, opts);
    bool saw_gap_angle = false;
    for (const SweepPoint& point : points) {
        const double line = -1.0 + 2.0 * point.angle_rad / 3.14159265358979323846;
        const double tol = 4.0 * point.estimate.stderr_ + kExactFloor;
        check.expect(std::abs(point.estimate.mean - line) <= tol,
                     fmt("sign model E(%.0f deg) = %.6f vs line %.6f beyond 4 sigma",
                         rad_to_deg(point.angle_rad), point.estimate.mean, line));
        if (std::abs(rad_to_deg(point.angle_rad) - 45.0) < 1e-9) {
            saw_gap_angle = true;
            const double gap = std::abs(point.estimate.mean - (-std::cos(point.angle_rad)));
            check.expect(gap >= kSignGapMin,
                         fmt("gap to -cos at 45 deg is %.4f < 0.2", gap));
        }
    }
    check.expect(saw_gap_angle, "grid missed the 45 degree point");
}

void criterion_chsh(Checker& check) {
    EstimateOptions opts;
    opts.threads = worker_threads();
    const ChshSettings settings = ChshSettings::canonical(ParticleKind::SpinHalf);
    const struct {
        const char* name;
        double want;
    } rows[] = {{"qm", kTsirelson}, {"lhv-sign", 2.0}, {"algebraic", kTsirelson}};
    for (const auto& row : rows) {
        const ChshResult result = chsh(*find_model(row.name), settings, 1000000, 103, opts);
        const double tol = 4.0 * result.s_stderr + kExactFloor;
        check.expect(std::abs(std::abs(result.s_value) - row.want) <= tol,
                     std::string(row.name) + fmt(": |S| = %.6f vs %.6f beyond 4 sigma",
                                                 std::abs(result.s_value), row.want));
    }
}

void criterion_enumeration(Checker& check) {
    for (int a : {-1, 1}) {
        for (int ap : {-1, 1}) {
            for (int b : {-1, 1}) {
                for (int bp : {-1, 1}) {
                    const int s = a * b + ap * b - a * bp + ap * bp;
                    check.expect(std::abs(s) == 2,
                                 "assignment (" + std::to_string(a) + "," + std::to_string(ap) +
                                     "," + std::to_string(b) + "," + std::to_string(bp) +
                                     ") gives " + std::to_string(s));
                }
            }
        }
    }
}

void criterion_photon_doubling(Checker& check) {
    const std::vector<double> grid = grid_deg(0.0, 90.0, 7.5);
    SweepOptions opts;
    opts.threads = worker_threads();
    const std::vector<SweepPoint> points =
        sweep(*find_model("qm"), ParticleKind::Photon, grid, 1000000, 104, opts);
    for (const SweepPoint& point : points) {
        const double want = -std::cos(2.0 * point.angle_rad);
        const double tol = 4.0 * point.estimate.stderr_ + kExactFloor;
        check.expect(std::abs(point.estimate.mean - want) <= tol,
                     fmt("photon E(%.1f deg) = %.6f vs -cos(2 delta) = %.6f beyond 4 sigma",
                         rad_to_deg(point.angle_rad), point.estimate.mean, want));
    }
}

void criterion_harness(Checker& check) {
    const UnitVector3 a = UnitVector3::x_axis();
    const UnitVector3 b = UnitVector3::from_planar_angle(deg_to_rad(50.0));

    for (const char* name : {"qm", "lhv-sign", "algebraic"}) {
        const MeasurementModel* model = find_model(name);
        const CorrelationEstimate direct = estimate_correlation(*model, a, b, 20001, 77);
        const ExperimentRun logged =
            run_experiment(TrialSchedule::standard(), *model, SettingSampler::fixed(a),
                           SettingSampler::fixed(b), 20001, 77);
        const CorrelationEstimate& through = logged.single();
        const bool identical = through.n == direct.n && through.mean == direct.mean &&
                               through.stderr_ == direct.stderr_ &&
                               through.im_mean == direct.im_mean &&
                               through.im_stderr == direct.im_stderr;
        check.expect(identical, std::string(name) + ": harness estimate differs from direct");

        const ExperimentRun hygiene =
            run_experiment(TrialSchedule::standard(), *model, SettingSampler::fixed(a),
                           SettingSampler::fixed(b), 10000, 78);
        check.expect(hygiene.causality.schedule_spacelike && hygiene.causality.all_clean(),
                     std::string(name) + ": ledger not clean on 10^4 trials");
    }

    const MeasurementModel* cheat = find_harness_model("cheat");
    check.expect(cheat != nullptr, "negative-control fixture missing");
    if (cheat != nullptr) {
        const ExperimentRun run =
            run_experiment(TrialSchedule::standard(), *cheat, SettingSampler::fixed(a),
                           SettingSampler::fixed(b), 10000, 79);
        check.expect(run.causality.trials == 10000 && run.causality.ledger_clean_trials == 0,
                     "negative control was not flagged on every trial");
        check.expect((run.causality.a_reads_union & kReadRemoteSetting) != 0,
                     "negative control union is missing the remote-setting bit");
    }

    // Hand-built spacelike arithmetic: |dt| < 2L/c, strictly.
    TrialSchedule wide;  // L = 1, simultaneous measurements
    check.expect(validate_schedule(wide).spacelike, "simultaneous far stations not spacelike");
    TrialSchedule narrow = wide;
    narrow.station_separation = 0.1;
    narrow.times.choose_a = 0.1;
    narrow.times.choose_b = 0.1;
    narrow.times.measure_b = 0.4;  // |0.9 - 0.4| = 0.5 >= 0.2
    check.expect(validate_schedule(narrow).ordering_ok && !validate_schedule(narrow).spacelike,
                 "timelike schedule passed");
    TrialSchedule boundary = wide;
    boundary.station_separation = 0.25;
    boundary.times.measure_a = 1.0;
    boundary.times.measure_b = 0.5;  // |dt| = 2L exactly: light just connects
    check.expect(!validate_schedule(boundary).spacelike, "boundary |dt| = 2L passed as spacelike");
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_cli_determinism(Checker& check) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "bellsim-acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    const std::string cli = BELLSIM_CLI_PATH;
    const struct {
        const char* tag;
        std::string args;
        const char* ext;
    } runs[] = {
        {"sweep", " sweep --model algebraic --n 20000 --seed 5 --angles 0:180:30", ".csv"},
        {"chsh", " chsh --model qm --n 50000 --seed 6", ".json"},
        {"audit", " audit --model lhv-sign --n 10000 --seed 7", ".json"},
        {"locality", " locality --model qm --n 20000 --seed 8 --angles 0,90,45,135", ".json"},
    };
    for (const auto& run : runs) {
        std::vector<std::string> outputs;
        const int thread_counts[] = {1, 8, 1};  // rerun at 1 guards against hidden state too
        for (std::size_t i = 0; i < 3; ++i) {
            const std::filesystem::path out =
                dir / (std::string(run.tag) + "-" + std::to_string(i) + run.ext);
            std::string command = "\"" + cli + "\"" + run.args +
                                  " --threads " + std::to_string(thread_counts[i]) +
                                  " --out \"" + out.string() + "\" >/dev/null 2>&1";
            if (std::string(run.tag) == "sweep") {
                const std::filesystem::path plot =
                    dir / ("plot-" + std::to_string(i) + ".svg");
                command = "\"" + cli + "\"" + run.args + " --threads " +
                          std::to_string(thread_counts[i]) + " --out \"" + out.string() +
                          "\" --plot \"" + plot.string() + "\" >/dev/null 2>&1";
            }
            const int status = std::system(command.c_str());
            check.expect(status == 0,
                         std::string(run.tag) + " exited nonzero at threads=" +
                             std::to_string(thread_counts[i]));
            outputs.push_back(slurp(out));
        }
        check.expect(!outputs[0].empty(), std::string(run.tag) + " wrote an empty file");
        check.expect(outputs[0] == outputs[1],
                     std::string(run.tag) + " differs between threads=1 and threads=8");
        check.expect(outputs[0] == outputs[2],
                     std::string(run.tag) + " differs between identical reruns");
    }
    const std::string plot0 = slurp(dir / "plot-0.svg");
    check.expect(!plot0.empty() && plot0 == slurp(dir / "plot-1.svg") &&
                     plot0 == slurp(dir / "plot-2.svg"),
                 "sweep plot differs across runs");
    std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        double limit_s;
        std::function<void(Checker&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "generator algebra exact; matrix representation within 1e-12", 1.0,
         criterion_algebra},
        {2, "pair product equals dot + i cross on 10^4 random pairs", 1.0,
         criterion_product_identity},
        {3, "matched settings give exactly -1 on every trial, all models", 5.0,
         criterion_matched_exact},
        {4, "qm and algebraic sweeps follow -cos(theta) at n=10^6/point", 60.0,
         criterion_quantum_curve},
        {5, "sign model follows -1 + 2 theta/pi, gap >= 0.2 at 45 deg", 10.0,
         criterion_sign_separation},
        {6, "canonical CHSH: 2*sqrt(2), 2, 2*sqrt(2) within 4 sigma", 60.0, criterion_chsh},
        {7, "all 16 fixed-outcome assignments give |S| = 2", 1.0, criterion_enumeration},
        {8, "photon sweep follows -cos(2 delta) within 4 sigma", 30.0,
         criterion_photon_doubling},
        {9, "harness neutral, ledgers clean, control flagged, spacelike math", 10.0,
         criterion_harness},
        {10, "CLI output byte-identical across reruns and thread counts", 60.0,
         criterion_cli_determinism},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Checker check;
        const auto t0 = std::chrono::steady_clock::now();
        criterion.body(check);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > criterion.limit_s) {
            check.expect(false, fmt("runtime %.2f s exceeds limit %.0f s", elapsed,
                                    criterion.limit_s));
        }
        const bool pass = check.failures.empty();
        std::printf("[%s] %2d. %-62s %6.2f s\n", pass ? "PASS" : "FAIL", criterion.id,
                    criterion.label, elapsed);
        for (const std::string& message : check.failures) {
            std::printf("         - %s\n", message.c_str());
        }
        failed += pass ? 0 : 1;
    }
    if (failed == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("acceptance: %d of %zu criteria FAILED\n", failed, criteria.size());
    return 1;
}
