#pragma once

#include <random>
#include <vector>

#include "robustlab/classifiers.hpp"
#include "robustlab/distributions.hpp"
#include "robustlab/rng.hpp"

namespace robustlab {

enum class NormKind { linf, l2 };

struct PerturbationBudget {
    double epsilon = 0.0;  // >= 0
    NormKind norm_kind = NormKind::linf;
};

struct AttackResult {
    std::vector<double> x_prime;
    double worst_margin;
    bool misclassified;  // worst_margin <= 0 (the adversary wins ties)
};

/// Exact worst-case attack on an identity-preprocess linear classifier.
/// The minimal margin over the budget ball is margin(x) - eps * ||w||_dual
/// with dual norm l1 for an l-inf budget and l2 for an l2 budget. The
/// returned point attains it: x' = x - y * eps * sign(w) (l-inf) or
/// x' = x - y * eps * w / ||w||_2 (l2). sign(0) moves nothing.
AttackResult optimal_linear_attack(const LinearClassifier& clf, const LabeledSample& sample,
                                   const PerturbationBudget& budget);

/// Exact worst-case attack on a thresholded linear classifier under an
/// l-inf budget: coordinate i can be pushed across zero iff |x_i| is within
/// reach, and the margin is separable, so the worst reachable sign pattern
/// is computed directly. Used where the dual-norm argument does not apply.
AttackResult optimal_threshold_attack(const LinearClassifier& clf, const LabeledSample& sample,
                                      const PerturbationBudget& budget);

struct UniversalPerturbation {
    std::vector<double> delta;  // the scaled posterior mean
    bool within_budget;         // ||delta||_inf <= eps (boundary counts)
};

/// The single data-dependent perturbation from the lower-bound argument:
/// delta = mu_prime. A test point of class y is attacked as x' = x - y*delta,
/// which moves both class-conditional posterior predictive means onto the
/// origin. Only defined for l-inf budgets.
UniversalPerturbation universal_perturbation(const PosteriorParams& posterior,
                                             const PerturbationBudget& budget);

AttackResult apply_universal(const LinearClassifier& clf, const LabeledSample& sample,
                             const std::vector<double>& delta);

enum class LossKind { neg_margin, logistic };

struct PgdOptions {
    int steps = 20;
    double step_size = 0.0;  // 0 selects the default 2.5 * eps / steps
    bool random_init = true;
    LossKind loss = LossKind::logistic;
};

inline double default_pgd_step(double eps, int steps) { return 2.5 * eps / steps; }

/// Iterated sign-gradient ascent on the loss, clipped back into the l-inf
/// ball after every step; returns the iterate with the smallest margin seen
/// (the start point included). Rejects l2 budgets and thresholded
/// classifiers (the gradient through the threshold is zero a.e.).
AttackResult pgd_attack(const LinearClassifier& clf, const LabeledSample& sample,
                        const PerturbationBudget& budget, const PgdOptions& options, RngSeed seed);
AttackResult pgd_attack(const LinearClassifier& clf, const LabeledSample& sample,
                        const PerturbationBudget& budget, const PgdOptions& options,
                        std::mt19937_64& rng);

}  // namespace robustlab
