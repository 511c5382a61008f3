#include "robustlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robustlab/parallel.hpp"

namespace robustlab {

namespace {

constexpr double kZ95 = 1.959963984540054;

}  // namespace

namespace {

ErrorEstimate estimate_from_proportion(double p_hat, std::uint64_t trials, bool lower_bound_only) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    ErrorEstimate e;
    e.trials = trials;
    e.lower_bound_only = lower_bound_only;
    const double n = static_cast<double>(trials);
    e.p_hat = p_hat;
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);

    const double successes = e.p_hat * n;
    if (successes < 10.0 || n - successes < 10.0) {
        // Wilson interval; stable at extreme rates.
        const double z2 = kZ95 * kZ95;
        const double denom = 1.0 + z2 / n;
        const double center = (e.p_hat + z2 / (2.0 * n)) / denom;
        const double half =
            kZ95 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / n + z2 / (4.0 * n * n)) / denom;
        e.ci_low = center - half;
        e.ci_high = center + half;
    } else {
        e.ci_low = e.p_hat - kZ95 * e.std_err;
        e.ci_high = e.p_hat + kZ95 * e.std_err;
    }
    e.ci_low = std::clamp(e.ci_low, 0.0, 1.0);
    e.ci_high = std::clamp(e.ci_high, 0.0, 1.0);
    return e;
}

}  // namespace

ErrorEstimate make_error_estimate(std::uint64_t hits, std::uint64_t trials, bool lower_bound_only) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    return estimate_from_proportion(static_cast<double>(hits) / static_cast<double>(trials), trials,
                                    lower_bound_only);
}

ErrorEstimate mc_standard_error(const LinearClassifier& clf, const ModelParams& params,
                                std::uint64_t trials, RngSeed seed, int threads) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (clf.dim() != model_dim(params)) throw std::invalid_argument("classifier/model dimension mismatch");
    const auto hits = par::count_hits(
        trials,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(seed, t));
            const auto sample = sample_one(params, rng);
            return clf.margin(sample) <= 0.0;
        },
        threads);
    return make_error_estimate(hits, trials);
}

ErrorEstimate mc_robust_error(const LinearClassifier& clf, const ModelParams& params,
                              const PerturbationBudget& budget, const AttackSpec& attack,
                              std::uint64_t trials, RngSeed seed, int threads) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (clf.dim() != model_dim(params)) throw std::invalid_argument("classifier/model dimension mismatch");

    switch (attack.kind) {
        case AttackKind::optimal:
            if (clf.preprocess() != Preprocess::identity) {
                throw std::invalid_argument("optimal attack requires an identity-preprocess classifier");
            }
            break;
        case AttackKind::pgd:
            if (clf.preprocess() != Preprocess::identity || budget.norm_kind != NormKind::linf) {
                throw std::invalid_argument("pgd attack requires identity preprocess and an l-inf budget");
            }
            break;
        case AttackKind::threshold_exact:
            if (clf.preprocess() != Preprocess::threshold || budget.norm_kind != NormKind::linf) {
                throw std::invalid_argument(
                    "threshold attack requires a thresholded classifier and an l-inf budget");
            }
            break;
        case AttackKind::universal:
            if (attack.universal_delta.size() != clf.dim()) {
                throw std::invalid_argument("universal delta dimension mismatch");
            }
            break;
    }

    const double dual =
        budget.norm_kind == NormKind::linf ? clf.l1_norm() : clf.l2_norm();
    const bool lower_bound_only =
        attack.kind == AttackKind::pgd || attack.kind == AttackKind::universal;

    const auto hits = par::count_hits(
        trials,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(seed, t));
            const auto sample = sample_one(params, rng);
            switch (attack.kind) {
                case AttackKind::optimal:
                    return clf.margin(sample) - budget.epsilon * dual <= 0.0;
                case AttackKind::pgd:
                    return pgd_attack(clf, sample, budget, attack.pgd, rng).misclassified;
                case AttackKind::threshold_exact:
                    return optimal_threshold_attack(clf, sample, budget).misclassified;
                case AttackKind::universal:
                    return apply_universal(clf, sample, attack.universal_delta).misclassified;
            }
            return false;
        },
        threads);
    return make_error_estimate(hits, trials, lower_bound_only);
}

LowerBoundExperimentResult expected_robust_error_lower_experiment(
    const Learner& learner, std::size_t n, std::size_t d, double sigma, double epsilon,
    std::size_t theta_draws, std::size_t trials_per_theta, RngSeed seed, int threads) {
    if (theta_draws == 0) throw std::invalid_argument("theta_draws must be >= 1");
    if (trials_per_theta == 0) throw std::invalid_argument("trials_per_theta must be >= 1");
    if (n == 0) throw std::invalid_argument("n must be >= 1");

    // One cluster per theta draw; -1 marks a budget-exceeded draw (its
    // robust-error contribution stays 0 but the rate is reported).
    std::vector<double> cluster(theta_draws);
    par::fill(
        theta_draws, cluster,
        [&](std::size_t t) -> double {
            auto rng = make_engine(child_seed(seed, t));
            const auto theta = draw_prior_theta(ModelKind::gaussian, d, rng);
            const GaussianModelParams model(theta, sigma);
            const auto train = sample_gaussian(model, n, rng);
            const auto clf = learner(train);
            const auto posterior = gaussian_posterior(sigma, train);
            const auto universal =
                universal_perturbation(posterior, PerturbationBudget{epsilon, NormKind::linf});
            if (!universal.within_budget) return -1.0;
            std::size_t hits = 0;
            for (std::size_t j = 0; j < trials_per_theta; ++j) {
                const auto test = sample_one(model, rng);
                if (apply_universal(clf, test, universal.delta).misclassified) ++hits;
            }
            return static_cast<double>(hits) / static_cast<double>(trials_per_theta);
        },
        threads);

    double sum = 0.0;
    std::size_t exceeded = 0;
    for (double v : cluster) {
        if (v < 0.0) {
            ++exceeded;
        } else {
            sum += v;
        }
    }
    const double p_hat = sum / static_cast<double>(theta_draws);

    LowerBoundExperimentResult result;
    // The binomial std_err over theta_draws dominates the true clustered
    // standard error, so the reported interval is conservative.
    result.estimate = estimate_from_proportion(p_hat, theta_draws, /*lower_bound_only=*/true);
    result.budget_exceeded_rate =
        static_cast<double>(exceeded) / static_cast<double>(theta_draws);
    return result;
}

}  // namespace robustlab
