#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "robustlab/attacks.hpp"
#include "robustlab/classifiers.hpp"
#include "robustlab/distributions.hpp"

namespace robustlab {

/// Binomial point estimate with a 95% confidence interval. The interval
/// uses the normal approximation and falls back to the Wilson interval
/// when the success or failure count drops below 10; both are clipped to
/// [0, 1]. std_err is always sqrt(p_hat (1 - p_hat) / trials).
struct ErrorEstimate {
    double p_hat = 0.0;
    std::uint64_t trials = 0;
    double std_err = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// True when the attack behind the estimate only lower-bounds the true
    /// robust error (PGD, universal); the exact attacks leave this false.
    bool lower_bound_only = false;
};

ErrorEstimate make_error_estimate(std::uint64_t hits, std::uint64_t trials,
                                  bool lower_bound_only = false);

enum class AttackKind { optimal, pgd, universal, threshold_exact };

struct AttackSpec {
    AttackKind kind = AttackKind::optimal;
    PgdOptions pgd{};
    std::vector<double> universal_delta;
};

/// Fraction of fresh samples with margin <= 0. Trials are independent work
/// items seeded per index, so the estimate is identical for every thread
/// count (threads == 1 runs the serial reference kernel).
ErrorEstimate mc_standard_error(const LinearClassifier& clf, const ModelParams& params,
                                std::uint64_t trials, RngSeed seed, int threads = 0);

/// Fraction of fresh samples whose worst-case margin under the configured
/// attack is <= 0. Exact attacks (optimal, threshold_exact) make this an
/// unbiased estimate of the true robust error; pgd and universal yield
/// valid lower-bound estimates, flagged in the result.
ErrorEstimate mc_robust_error(const LinearClassifier& clf, const ModelParams& params,
                              const PerturbationBudget& budget, const AttackSpec& attack,
                              std::uint64_t trials, RngSeed seed, int threads = 0);

using Learner = std::function<LinearClassifier(const Dataset&)>;

struct LowerBoundExperimentResult {
    /// Grand mean over theta draws. trials is the number of theta draws
    /// (the independent units); the binomial std_err over that count upper
    /// bounds the clustered standard error.
    ErrorEstimate estimate;
    /// Fraction of theta draws whose posterior mean exceeded the budget;
    /// those contribute robust error 0 (never resampled).
    double budget_exceeded_rate = 0.0;
};

/// Nested estimator of the expected robust error under prior-drawn means:
/// draw theta ~ N(0, I), train on n fresh samples, form the posterior,
/// attack fresh test points with the universal perturbation when it fits
/// the budget, and average the per-draw misclassification rates.
LowerBoundExperimentResult expected_robust_error_lower_experiment(
    const Learner& learner, std::size_t n, std::size_t d, double sigma, double epsilon,
    std::size_t theta_draws, std::size_t trials_per_theta, RngSeed seed, int threads = 0);

}  // namespace robustlab
