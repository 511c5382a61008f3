#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robustlab/estimation.hpp"

namespace robustlab {

enum class ThetaMode { fixed_norm, prior };
enum class ClassifierKind { plain, thresholded };

std::string to_string(ModelKind kind);
std::string to_string(ThetaMode mode);
std::string to_string(ClassifierKind kind);

/// One sweep over (d, noise, eps, n, trial, classifier). Per trial the
/// n-grid is sampled nested (each training set is a prefix of the next),
/// which removes sampling noise between adjacent n values. mc_trials = 0
/// skips the Monte Carlo columns and records only the analytic ones.
struct SweepConfig {
    ModelKind model_kind = ModelKind::gaussian;
    std::vector<std::size_t> d_list;
    std::vector<double> noise_list;    // sigma for gaussian, tau for bernoulli
    std::vector<double> epsilon_list;
    std::vector<std::uint64_t> n_grid; // empty selects the geometric default 1..16384
    std::uint64_t trials = 20;
    std::uint64_t mc_trials = 10000;
    ThetaMode theta_mode = ThetaMode::fixed_norm;
    std::vector<ClassifierKind> classifier_kinds = {ClassifierKind::plain};
    std::uint64_t base_seed = 0;
    std::string output_path;

    void validate() const;
    std::vector<std::uint64_t> effective_n_grid() const;
};

/// One CSV row. Analytic columns hold NaN where no exact formula applies
/// (e.g. thresholded classifiers on Gaussian data). ci_low/ci_high bracket
/// rob_err_mc; seed is the 64-bit stream key behind the row's Monte Carlo
/// draws.
struct SweepRecord {
    std::string model;
    std::size_t d = 0;
    double noise = 0.0;
    double eps = 0.0;
    std::uint64_t n = 0;
    std::uint64_t trial = 0;
    std::string classifier;
    double std_err_analytic = 0.0;
    double std_err_mc = 0.0;
    double rob_err_analytic = 0.0;
    double rob_err_mc = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

extern const char* const kSweepCsvPreamble;  // schema/version comment line
extern const char* const kSweepCsvHeader;

std::string to_csv_line(const SweepRecord& record);
SweepRecord parse_csv_line(const std::string& line);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

std::string format_double(double v);  // 9 significant digits, C locale

std::vector<SweepRecord> run_sweep(const SweepConfig& config, int threads = 0);

/// Loads a TOML file whose keys mirror the SweepConfig field names.
SweepConfig load_sweep_config(const std::string& path);

struct MinNResult {
    std::size_t d = 0;
    double noise = 0.0;
    double eps = 0.0;
    std::optional<std::uint64_t> min_n;  // empty = target not reached on the grid
};

enum class ErrorColumn { robust, standard };

/// Smallest n on the grid whose median-over-trials error (best over the
/// configured classifier kinds, analytic column when finite, Monte Carlo
/// otherwise) is at most target_error; evaluated per (d, noise, eps).
std::vector<MinNResult> find_min_n(const SweepConfig& config, double target_error,
                                   ErrorColumn column = ErrorColumn::robust, int threads = 0);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the least-squares fit
};

/// Least-squares fit of log(min_n) against log(d). Entries without a
/// min_n are dropped; fewer than four surviving points is an error.
ScalingFit scaling_fit(const std::vector<MinNResult>& results);

}  // namespace robustlab
