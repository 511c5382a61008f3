#include "robustlab/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robustlab {

namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_budget(const PerturbationBudget& budget) {
    if (!(budget.epsilon >= 0.0) || !std::isfinite(budget.epsilon)) {
        throw std::invalid_argument("epsilon must be a finite nonnegative real");
    }
}

}  // namespace

AttackResult optimal_linear_attack(const LinearClassifier& clf, const LabeledSample& sample,
                                   const PerturbationBudget& budget) {
    check_budget(budget);
    if (clf.preprocess() != Preprocess::identity) {
        throw std::invalid_argument("optimal_linear_attack requires an identity-preprocess classifier");
    }
    if (sample.x.size() != clf.dim()) throw std::invalid_argument("dimension mismatch in attack");

    const auto& w = clf.weights();
    const double eps = budget.epsilon;
    const double dual = budget.norm_kind == NormKind::linf ? clf.l1_norm() : clf.l2_norm();

    AttackResult result;
    result.x_prime = sample.x;
    if (budget.norm_kind == NormKind::linf) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            result.x_prime[i] -= sample.y * eps * sign0(w[i]);
        }
    } else {
        const double scale = eps / clf.l2_norm();
        for (std::size_t i = 0; i < w.size(); ++i) {
            result.x_prime[i] -= sample.y * scale * w[i];
        }
    }
    result.worst_margin = clf.margin(sample) - eps * dual;
    result.misclassified = result.worst_margin <= 0.0;
    return result;
}

AttackResult optimal_threshold_attack(const LinearClassifier& clf, const LabeledSample& sample,
                                      const PerturbationBudget& budget) {
    check_budget(budget);
    if (clf.preprocess() != Preprocess::threshold) {
        throw std::invalid_argument("optimal_threshold_attack requires a thresholded classifier");
    }
    if (budget.norm_kind != NormKind::linf) {
        throw std::invalid_argument("threshold attack is defined for l-inf budgets only");
    }
    if (sample.x.size() != clf.dim()) throw std::invalid_argument("dimension mismatch in attack");

    const auto& w = clf.weights();
    const double eps = budget.epsilon;
    const double y = sample.y;

    AttackResult result;
    result.x_prime = sample.x;
    double margin = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double xi = sample.x[i];
        // Reachable threshold outputs: +1 iff x_i + eps >= 0, -1 iff x_i - eps < 0.
        const bool can_plus = xi + eps >= 0.0;
        const bool can_minus = xi - eps < 0.0;
        double ti = xi >= 0.0 ? 1.0 : -1.0;
        if (y * w[i] > 0.0 && can_minus) {
            ti = -1.0;
            if (xi >= 0.0) result.x_prime[i] = xi - eps;
        } else if (y * w[i] < 0.0 && can_plus) {
            ti = 1.0;
            if (xi < 0.0) result.x_prime[i] = xi + eps;
        }
        margin += y * w[i] * ti;
    }
    result.worst_margin = margin;
    result.misclassified = margin <= 0.0;
    return result;
}

UniversalPerturbation universal_perturbation(const PosteriorParams& posterior,
                                             const PerturbationBudget& budget) {
    check_budget(budget);
    if (budget.norm_kind != NormKind::linf) {
        throw std::invalid_argument("universal perturbation is defined for l-inf budgets only");
    }
    UniversalPerturbation up;
    up.delta = posterior.mu_prime;
    double linf = 0.0;
    for (double v : up.delta) linf = std::max(linf, std::abs(v));
    up.within_budget = linf <= budget.epsilon;
    return up;
}

AttackResult apply_universal(const LinearClassifier& clf, const LabeledSample& sample,
                             const std::vector<double>& delta) {
    if (delta.size() != sample.x.size()) throw std::invalid_argument("delta dimension mismatch");
    AttackResult result;
    result.x_prime = sample.x;
    for (std::size_t i = 0; i < delta.size(); ++i) result.x_prime[i] -= sample.y * delta[i];
    result.worst_margin = clf.margin(LabeledSample{result.x_prime, sample.y});
    result.misclassified = result.worst_margin <= 0.0;
    return result;
}

AttackResult pgd_attack(const LinearClassifier& clf, const LabeledSample& sample,
                        const PerturbationBudget& budget, const PgdOptions& options,
                        std::mt19937_64& rng) {
    check_budget(budget);
    if (budget.norm_kind != NormKind::linf) {
        throw std::invalid_argument("pgd_attack supports l-inf budgets only");
    }
    if (clf.preprocess() != Preprocess::identity) {
        throw std::invalid_argument("pgd_attack is undefined for thresholded classifiers");
    }
    if (options.steps < 1) throw std::invalid_argument("pgd_attack requires at least one step");
    if (sample.x.size() != clf.dim()) throw std::invalid_argument("dimension mismatch in attack");

    const double eps = budget.epsilon;
    if (eps == 0.0) {
        AttackResult result;
        result.x_prime = sample.x;
        result.worst_margin = clf.margin(sample);
        result.misclassified = result.worst_margin <= 0.0;
        return result;
    }
    const double step = options.step_size > 0.0 ? options.step_size
                                                : default_pgd_step(eps, options.steps);

    const auto& w = clf.weights();
    const std::size_t d = w.size();

    std::vector<double> x = sample.x;
    if (options.random_init) {
        std::uniform_real_distribution<double> unif(-eps, eps);
        for (std::size_t i = 0; i < d; ++i) x[i] += unif(rng);
    }

    auto margin_of = [&](const std::vector<double>& pt) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += w[i] * pt[i];
        return sample.y * dot;
    };

    std::vector<double> best = x;
    double best_margin = margin_of(x);

    for (int t = 0; t < options.steps; ++t) {
        const double m = margin_of(x);
        // Ascent on the loss. For both losses the gradient is -y * w times a
        // positive factor, except that the logistic factor can underflow to
        // zero for very large margins, freezing the iterate there.
        double factor = 1.0;
        if (options.loss == LossKind::logistic) {
            factor = 1.0 / (1.0 + std::exp(m));
        }
        for (std::size_t i = 0; i < d; ++i) {
            const double g = -sample.y * w[i] * factor;
            x[i] += step * sign0(g);
            x[i] = std::clamp(x[i], sample.x[i] - eps, sample.x[i] + eps);
        }
        const double m_new = margin_of(x);
        if (m_new < best_margin) {
            best_margin = m_new;
            best = x;
        }
    }

    AttackResult result;
    result.x_prime = std::move(best);
    result.worst_margin = best_margin;
    result.misclassified = best_margin <= 0.0;
    return result;
}

AttackResult pgd_attack(const LinearClassifier& clf, const LabeledSample& sample,
                        const PerturbationBudget& budget, const PgdOptions& options, RngSeed seed) {
    auto rng = make_engine(seed);
    return pgd_attack(clf, sample, budget, options, rng);
}

}  // namespace robustlab
