#include "robustlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "robustlab/analytic.hpp"
#include "robustlab/attacks.hpp"
#include "robustlab/classifiers.hpp"
#include "robustlab/distributions.hpp"
#include "robustlab/estimation.hpp"
#include "robustlab/parallel.hpp"
#include "robustlab/rng.hpp"
#include "robustlab/sweep.hpp"

namespace robustlab {

namespace {

std::string fmt(double v) { return format_double(v); }

Learner weighted_mean_learner() {
    return [](const Dataset& data) { return learn_weighted_mean(data); };
}

// --- check 1: Monte Carlo with the exact attack reproduces the closed-form
// robust error across a (d, sigma, eps) grid.
VerifyReport check_analytic_vs_mc(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 101};
    const std::size_t trials = 100000;
    std::size_t cells = 0;
    std::size_t passed = 0;
    std::ostringstream detail;
    for (std::size_t d : {4u, 16u, 64u}) {
        for (double sigma : {0.5, 1.0, 2.0}) {
            for (double eps : {0.0, 0.1, 0.5}) {
                const GaussianModelParams model(std::vector<double>(d, 1.0), sigma);
                std::vector<double> w(d, 1.0 / std::sqrt(double(d)));
                const LinearClassifier clf(w);
                const PerturbationBudget budget{eps, NormKind::linf};
                const double exact = gaussian_robust_error(clf.weights(), model, budget);
                const auto est = mc_robust_error(clf, model, budget, AttackSpec{}, trials,
                                                 child_seed(root, cells), threads);
                const double se = std::sqrt(exact * (1.0 - exact) / double(trials));
                const bool ok = se > 0.0 ? std::abs(est.p_hat - exact) <= 4.0 * se
                                         : est.p_hat == exact;
                if (ok) ++passed;
                ++cells;
            }
        }
    }
    const double frac = double(passed) / double(cells);
    detail << passed << "/" << cells << " cells within 4 standard errors";
    return VerifyReport{"analytic-vs-mc", frac >= 0.95, frac, 0.95, 0.0, detail.str()};
}

// --- check 2: the weighted-mean classifier reaches 1% robust error at the
// predicted sample counts (n = 64 at eps = 0.1; n = 1 at eps = 0.025) for
// d = 10^4, sigma = 10/32.
VerifyReport check_weighted_mean_upper(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 202};
    const std::size_t d = 10000;
    const double sigma = 10.0 / 32.0;
    const GaussianModelParams model(std::vector<double>(d, 1.0), sigma);
    const std::size_t trials = 50;

    auto median_robust_error = [&](std::size_t n, double eps, std::uint64_t tag) {
        std::vector<double> errs;
        par::fill(
            trials, errs,
            [&](std::size_t t) {
                auto rng = make_engine(child_seed(root, tag + t));
                const auto data = sample_gaussian(model, n, rng);
                const auto clf = learn_weighted_mean(data);
                return gaussian_robust_error(clf.weights(), model,
                                             PerturbationBudget{eps, NormKind::linf});
            },
            threads);
        std::sort(errs.begin(), errs.end());
        return 0.5 * (errs[trials / 2 - 1] + errs[trials / 2]);
    };

    const double median_a = median_robust_error(64, 0.1, 1000);
    const double median_b = median_robust_error(1, 0.025, 2000);
    const double observed = std::max(median_a, median_b);
    std::ostringstream detail;
    detail << "median robust error: n=64 eps=0.1 -> " << fmt(median_a)
           << "; n=1 eps=0.025 -> " << fmt(median_b);
    return VerifyReport{"weighted-mean-upper", observed <= 0.01, observed, 0.01, 0.0,
                        detail.str()};
}

// --- check 3: the universal-perturbation experiment meets the closed-form
// error floor, and the floor itself is cross-checked by direct Monte Carlo.
VerifyReport check_universal_lower_bound(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 303};
    struct Config {
        std::size_t d;
        double sigma;
        std::size_t n;
        double eps;
    };
    const std::vector<Config> configs = {{5, 2.0, 4, 1.0}, {16, 4.0, 8, 1.5}, {64, 4.0, 16, 2.0}};
    const std::size_t theta_draws = 500;
    const std::size_t tests_per_theta = 200;
    const std::size_t bound_mc_draws = 1000000;

    double min_slack = std::numeric_limits<double>::infinity();
    bool cross_ok = true;
    std::ostringstream detail;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto& c = configs[k];
        const double bound = gaussian_lower_bound(c.n, c.sigma, c.eps, c.d);

        // Direct Monte Carlo of the tail probability behind the closed form.
        const double shrink = std::sqrt(double(c.n) / (c.sigma * c.sigma + double(c.n)));
        const RngSeed bound_seed = child_seed(root, 100 + k);
        const auto hits = par::count_hits(
            bound_mc_draws,
            [&](std::uint64_t t) {
                auto rng = make_engine(child_seed(bound_seed, t));
                std::normal_distribution<double> std_normal(0.0, 1.0);
                double linf = 0.0;
                for (std::size_t i = 0; i < c.d; ++i) {
                    linf = std::max(linf, std::abs(std_normal(rng)));
                }
                return shrink * linf <= c.eps;
            },
            threads);
        const double p_mc = double(hits) / double(bound_mc_draws);
        const double p_exact = 2.0 * bound;
        const double se_bound = std::sqrt(p_exact * (1.0 - p_exact) / double(bound_mc_draws));
        if (std::abs(p_mc - p_exact) > 4.0 * se_bound) cross_ok = false;

        const auto res = expected_robust_error_lower_experiment(
            weighted_mean_learner(), c.n, c.d, c.sigma, c.eps, theta_draws, tests_per_theta,
            child_seed(root, k), threads);
        const double slack = res.estimate.p_hat - (bound - 3.0 * res.estimate.std_err);
        min_slack = std::min(min_slack, slack);
        detail << "(d=" << c.d << ",n=" << c.n << ",eps=" << fmt(c.eps) << "): estimate "
               << fmt(res.estimate.p_hat) << " vs bound " << fmt(bound) << ", budget-exceeded "
               << fmt(res.budget_exceeded_rate) << "; ";
    }
    detail << (cross_ok ? "closed form matches direct MC" : "closed form vs direct MC MISMATCH");
    return VerifyReport{"universal-lower-bound", min_slack >= 0.0 && cross_ok, min_slack, 0.0,
                        0.0, detail.str()};
}

// --- check 4: enumeration and binomial paths agree to 1e-12, and the exact
// value matches Monte Carlo with the exact attack.
VerifyReport check_bernoulli_exact(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 404};
    double max_gap = 0.0;
    for (std::size_t d = 1; d <= 12; ++d) {
        const auto theta = draw_prior_theta(ModelKind::bernoulli, d, child_seed(root, d));
        for (double tau : {0.1, 0.25, 0.4}) {
            const BernoulliModelParams model(theta, tau);
            for (double eps : {0.0, tau, 3.0 * tau}) {
                const PerturbationBudget budget{eps, NormKind::linf};
                const double p_enum = bernoulli_error_exact(theta, model, budget,
                                                            BernoulliErrorMethod::enumeration);
                const double p_bin = bernoulli_error_exact(theta, model, budget,
                                                           BernoulliErrorMethod::binomial);
                max_gap = std::max(max_gap, std::abs(p_enum - p_bin));
            }
        }
    }

    bool mc_ok = true;
    const std::size_t trials = 100000;
    const std::size_t d = 12;
    const auto theta = draw_prior_theta(ModelKind::bernoulli, d, child_seed(root, d));
    const LinearClassifier clf{std::vector<double>(theta)};
    std::size_t combo = 0;
    for (double tau : {0.1, 0.25, 0.4}) {
        const BernoulliModelParams model(theta, tau);
        for (double eps : {0.0, tau, 3.0 * tau}) {
            const PerturbationBudget budget{eps, NormKind::linf};
            const double exact = bernoulli_error_exact(theta, model, budget);
            const auto est = mc_robust_error(clf, model, budget, AttackSpec{}, trials,
                                             child_seed(root, 500 + combo), threads);
            const double se = std::sqrt(exact * (1.0 - exact) / double(trials));
            if (se > 0.0 ? std::abs(est.p_hat - exact) > 4.0 * se : est.p_hat != exact) {
                mc_ok = false;
            }
            ++combo;
        }
    }
    std::ostringstream detail;
    detail << "max |enumeration - binomial| = " << fmt(max_gap) << "; Monte Carlo "
           << (mc_ok ? "agrees within 4 standard errors" : "DISAGREES");
    return VerifyReport{"bernoulli-exact", max_gap <= 1e-12 && mc_ok, max_gap, 0.0, 1e-12,
                        detail.str()};
}

// --- check 5: robustness limits of linear classifiers on the hypercube:
// w = theta* is robust below tau, breaks above 3 tau, and every linear
// learner is stuck at error >= 1/6 above 3 tau.
VerifyReport check_linear_limits(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 505};
    const double tau = 0.1;
    const std::size_t d = 2000;
    const std::size_t trials = 100000;
    const auto theta = draw_prior_theta(ModelKind::bernoulli, d, child_seed(root, 0));
    const BernoulliModelParams model(theta, tau);
    const auto limits = linear_besteps_bounds(model);
    const LinearClassifier oracle_clf{std::vector<double>(theta)};

    double min_slack = std::numeric_limits<double>::infinity();
    std::ostringstream detail;

    const auto robust_est =
        mc_robust_error(oracle_clf, model, PerturbationBudget{0.09, NormKind::linf}, AttackSpec{},
                        trials, child_seed(root, 1), threads);
    min_slack = std::min(min_slack, limits.robust_error_bound + 0.01 - robust_est.p_hat);
    detail << "w=theta*: error " << fmt(robust_est.p_hat) << " at eps=0.09 (bound "
           << fmt(limits.robust_error_bound) << "); ";

    const auto breaking_est =
        mc_robust_error(oracle_clf, model, PerturbationBudget{0.31, NormKind::linf}, AttackSpec{},
                        trials, child_seed(root, 2), threads);
    min_slack = std::min(min_slack, breaking_est.p_hat - (limits.nonrobust_error_lower - 0.01));
    detail << fmt(breaking_est.p_hat) << " at eps=0.31 (floor "
           << fmt(limits.nonrobust_error_lower) << "); learners at eps=0.31:";

    std::vector<LinearClassifier> learners;
    for (std::size_t n : {1u, 10u, 100u}) {
        const auto data = sample_bernoulli(model, n, child_seed(root, 10 + n));
        learners.push_back(learn_weighted_mean(data));
    }
    learners.push_back(oracle_clf);
    {
        auto w = draw_prior_theta(ModelKind::gaussian, d, child_seed(root, 20));
        learners.push_back(LinearClassifier(std::move(w)));
    }
    for (std::size_t i = 0; i < learners.size(); ++i) {
        const auto est =
            mc_robust_error(learners[i], model, PerturbationBudget{0.31, NormKind::linf},
                            AttackSpec{}, trials, child_seed(root, 30 + i), threads);
        min_slack = std::min(min_slack, est.p_hat - (1.0 / 6.0 - 0.02));
        detail << ' ' << fmt(est.p_hat);
    }
    return VerifyReport{"linear-robustness-limits", min_slack >= 0.0, min_slack, 0.0, 0.0,
                        detail.str()};
}

// --- check 6: thresholding removes any sub-unit perturbation of hypercube
// data: the single-sample thresholded classifier keeps its standard error
// under the strongest eps = 0.99 attack, exactly, under replayed seeds.
VerifyReport check_threshold_defense(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 606};
    const std::size_t d = 10000;
    const double tau = 0.13;  // (log 100 / (2d))^(1/4) = 0.12313..., rounded up
    const std::size_t trials = 10000;
    const auto theta = draw_prior_theta(ModelKind::bernoulli, d, child_seed(root, 0));
    const BernoulliModelParams model(theta, tau);
    const RngSeed trial_root = child_seed(root, 1);
    const PerturbationBudget budget{0.99, NormKind::linf};

    const auto robust_hits = par::count_hits(
        trials,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(trial_root, t));
            const auto train = sample_one(model, rng);
            const auto clf = learn_weighted_mean({train}, true, Preprocess::threshold);
            const auto test = sample_one(model, rng);
            return optimal_threshold_attack(clf, test, budget).misclassified;
        },
        threads);
    const auto standard_hits = par::count_hits(
        trials,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(trial_root, t));
            const auto train = sample_one(model, rng);
            const auto clf = learn_weighted_mean({train}, true, Preprocess::threshold);
            const auto test = sample_one(model, rng);
            return clf.margin(test) <= 0.0;
        },
        threads);

    const auto est = make_error_estimate(robust_hits, trials);
    const bool identical = robust_hits == standard_hits;
    const bool small = est.p_hat <= 0.01 + 3.0 * est.std_err;
    std::ostringstream detail;
    detail << "robust error " << fmt(est.p_hat) << " at eps=0.99; standard error "
           << fmt(double(standard_hits) / double(trials))
           << (identical ? " (identical trials)" : " (MISMATCH)");
    return VerifyReport{"threshold-defense", identical && small, est.p_hat, 0.01,
                        3.0 * est.std_err, detail.str()};
}

// --- check 7: the posterior log odds of a single coordinate stay inside
// the concentration envelope except with probability <= delta.
VerifyReport check_log_odds_tail(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 707};
    const double tau = 0.25;
    const std::size_t n = 16;
    const double delta = 0.05;
    const std::size_t sequences = 10000;
    const double bound =
        evaluate_bound("lemma_bb_one_d",
                       {{"tau", tau}, {"n", double(n)}, {"delta", delta}})
            .value;

    const auto exceed = par::count_hits(
        sequences,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(root, t));
            std::uniform_int_distribution<int> coin(0, 1);
            std::bernoulli_distribution keep(0.5 + tau);
            const int theta = coin(rng) == 0 ? -1 : 1;
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += keep(rng) ? theta : -theta;
            return std::abs(log_odds_bernoulli(sum, tau)) > bound;
        },
        threads);
    const double freq = double(exceed) / double(sequences);
    std::ostringstream detail;
    detail << "envelope " << fmt(bound) << ", exceeded on " << exceed << "/" << sequences
           << " sequences";
    return VerifyReport{"log-odds-tail", freq <= delta, freq, delta, 0.0, detail.str()};
}

// --- check 8: sample-complexity scaling of robust generalization. The
// standard-error target is reachable from one sample at every d; the
// robust-error sample counts are fit against d on a log-log scale.
VerifyReport check_sqrt_d_scaling(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 808};
    const std::vector<std::size_t> dims = {256, 1024, 4096, 16384};
    const double target = 0.01;

    std::vector<MinNResult> robust_results;
    bool standard_ok = true;
    std::ostringstream detail;
    detail << "robust min_n:";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::size_t d = dims[i];
        SweepConfig config;
        config.model_kind = ModelKind::gaussian;
        config.d_list = {d};
        config.noise_list = {std::pow(double(d), 0.25) / 32.0};
        config.epsilon_list = {0.1};
        config.trials = 11;
        config.mc_trials = 0;  // exact analytic errors drive the search
        config.theta_mode = ThetaMode::fixed_norm;
        config.classifier_kinds = {ClassifierKind::plain};
        config.base_seed = stream_key(child_seed(root, i));

        const auto robust = find_min_n(config, target, ErrorColumn::robust, threads);
        robust_results.push_back(robust.front());
        detail << " d=" << d << " -> "
               << (robust.front().min_n ? std::to_string(*robust.front().min_n)
                                        : std::string("not-reached"));

        SweepConfig std_config = config;
        std_config.n_grid = {1};
        const auto standard = find_min_n(std_config, target, ErrorColumn::standard, threads);
        if (!standard.front().min_n || *standard.front().min_n != 1) standard_ok = false;
    }

    double slope = std::numeric_limits<double>::quiet_NaN();
    bool slope_ok = false;
    try {
        const auto fit = scaling_fit(robust_results);
        slope = fit.slope;
        slope_ok = slope >= 0.4 && slope <= 0.6;
        detail << "; slope " << fmt(slope) << " (target [0.4, 0.6])";
    } catch (const std::invalid_argument& e) {
        detail << "; fit failed: " << e.what();
    }
    detail << (standard_ok ? "; standard min_n = 1 at every d"
                           : "; standard min_n != 1 somewhere");
    return VerifyReport{"sqrt-d-scaling", slope_ok && standard_ok, slope, 0.4, 0.2,
                        detail.str()};
}

// --- check 9: 20-step PGD reaches the same misclassification decision as
// the exact dual-norm attack on random samples and classifiers.
VerifyReport check_pgd_vs_optimal(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 909};
    const std::size_t trials = 1000;
    const std::size_t d = 30;
    const double eps = 0.2;

    const auto agreements = par::count_hits(
        trials,
        [&](std::uint64_t t) {
            auto rng = make_engine(child_seed(root, t));
            const auto theta = draw_prior_theta(ModelKind::gaussian, d, rng);
            const GaussianModelParams model(theta, 1.0);
            auto w = draw_prior_theta(ModelKind::gaussian, d, rng);
            const LinearClassifier clf(std::move(w));
            const auto sample = sample_one(model, rng);
            const PerturbationBudget budget{eps, NormKind::linf};
            const auto opt = optimal_linear_attack(clf, sample, budget);
            PgdOptions options;  // 20 steps, step 2.5*eps/20, random init
            const auto pgd = pgd_attack(clf, sample, budget, options, rng);
            return opt.misclassified == pgd.misclassified;
        },
        threads);
    const double frac = double(agreements) / double(trials);
    std::ostringstream detail;
    detail << agreements << "/" << trials << " decisions agree";
    return VerifyReport{"pgd-vs-optimal", frac >= 0.99, frac, 0.99, 0.0, detail.str()};
}

// --- check 10: thread-count independence and byte-stable sweep output.
VerifyReport check_determinism(std::uint64_t seed, int threads) {
    (void)threads;  // this check fixes its own worker counts
    const RngSeed root{seed, 1010};
    bool ok = true;
    std::ostringstream detail;

    const GaussianModelParams model(std::vector<double>(16, 1.0), 1.0);
    const LinearClassifier clf(std::vector<double>(16, 0.25));
    const PerturbationBudget budget{0.1, NormKind::linf};
    const auto serial = mc_robust_error(clf, model, budget, AttackSpec{}, 50000,
                                        child_seed(root, 0), /*threads=*/1);
    const auto parallel = mc_robust_error(clf, model, budget, AttackSpec{}, 50000,
                                          child_seed(root, 0), /*threads=*/8);
    if (serial.p_hat != parallel.p_hat) {
        ok = false;
        detail << "mc estimate differs across thread counts; ";
    }

    const auto lower_serial = expected_robust_error_lower_experiment(
        weighted_mean_learner(), 4, 5, 2.0, 1.0, 100, 50, child_seed(root, 1), 1);
    const auto lower_parallel = expected_robust_error_lower_experiment(
        weighted_mean_learner(), 4, 5, 2.0, 1.0, 100, 50, child_seed(root, 1), 8);
    if (lower_serial.estimate.p_hat != lower_parallel.estimate.p_hat) {
        ok = false;
        detail << "lower-bound experiment differs across thread counts; ";
    }

    SweepConfig config;
    config.model_kind = ModelKind::gaussian;
    config.d_list = {8};
    config.noise_list = {1.0};
    config.epsilon_list = {0.0, 0.1};
    config.n_grid = {1, 2, 4};
    config.trials = 3;
    config.mc_trials = 2000;
    config.classifier_kinds = {ClassifierKind::plain, ClassifierKind::thresholded};
    config.base_seed = stream_key(child_seed(root, 2));

    auto csv_of = [&](int t) {
        std::ostringstream out;
        write_sweep_csv(out, run_sweep(config, t));
        return out.str();
    };
    const auto first = csv_of(1);
    if (first != csv_of(1)) {
        ok = false;
        detail << "sweep rerun changed bytes; ";
    }
    if (first != csv_of(4)) {
        ok = false;
        detail << "sweep output depends on thread count; ";
    }
    if (ok) detail << "replays identical across reruns and thread counts";
    return VerifyReport{"determinism", ok, ok ? 1.0 : 0.0, 1.0, 0.0, detail.str()};
}

// --- trivial suite -------------------------------------------------------

VerifyReport check_eps_zero_collapse(std::uint64_t seed, int threads) {
    const RngSeed root{seed, 1111};
    bool ok = true;
    const GaussianModelParams gauss(std::vector<double>{1.0, -0.5, 2.0}, 1.5);
    const LinearClassifier clf(std::vector<double>{0.2, 0.4, -0.1});
    const PerturbationBudget zero{0.0, NormKind::linf};

    if (gaussian_robust_error(clf.weights(), gauss, zero) !=
        gaussian_standard_error(clf.weights(), gauss)) {
        ok = false;
    }
    const auto std_est = mc_standard_error(clf, gauss, 20000, child_seed(root, 0), threads);
    const auto rob_est =
        mc_robust_error(clf, gauss, zero, AttackSpec{}, 20000, child_seed(root, 0), threads);
    if (std_est.p_hat != rob_est.p_hat) ok = false;
    return VerifyReport{"eps-zero-collapse", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                        "zero-budget robust error equals standard error"};
}

VerifyReport check_threshold_identity(std::uint64_t seed, int threads) {
    (void)threads;
    auto rng = make_engine(RngSeed{seed, 1212});
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    bool ok = true;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> x(8), vertex(8), delta(8);
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = 5.0 * unif(rng);
            vertex[i] = coin(rng) == 0 ? -1.0 : 1.0;
            delta[i] = 0.9 * unif(rng);
        }
        const auto tx = threshold_map(x);
        if (threshold_map(tx) != tx) ok = false;
        std::vector<double> perturbed(8);
        for (std::size_t i = 0; i < 8; ++i) perturbed[i] = vertex[i] + delta[i];
        if (threshold_map(perturbed) != vertex) ok = false;
    }
    return VerifyReport{"threshold-identity", ok, ok ? 1.0 : 0.0, 1.0, 0.0,
                        "thresholding is idempotent and undoes sub-unit perturbations"};
}

using CheckFn = std::function<VerifyReport(std::uint64_t, int)>;

const std::vector<std::pair<std::string, CheckFn>>& check_table() {
    static const std::vector<std::pair<std::string, CheckFn>> table = {
        {"analytic-vs-mc", check_analytic_vs_mc},
        {"weighted-mean-upper", check_weighted_mean_upper},
        {"universal-lower-bound", check_universal_lower_bound},
        {"bernoulli-exact", check_bernoulli_exact},
        {"linear-robustness-limits", check_linear_limits},
        {"threshold-defense", check_threshold_defense},
        {"log-odds-tail", check_log_odds_tail},
        {"sqrt-d-scaling", check_sqrt_d_scaling},
        {"pgd-vs-optimal", check_pgd_vs_optimal},
        {"determinism", check_determinism},
        {"eps-zero-collapse", check_eps_zero_collapse},
        {"threshold-identity", check_threshold_identity},
    };
    return table;
}

}  // namespace

std::vector<std::string> verify_check_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : check_table()) {
        if (name == "eps-zero-collapse" || name == "threshold-identity") continue;
        names.push_back(name);
    }
    return names;
}

std::vector<std::string> resolve_verify_selection(const std::string& selection) {
    if (selection == "all") return verify_check_names();
    if (selection == "trivial") return {"eps-zero-collapse", "threshold-identity"};
    if (selection == "gaussian-lower") return {"universal-lower-bound"};
    for (const auto& [name, fn] : check_table()) {
        if (name == selection) return {name};
    }
    throw std::invalid_argument("unknown verify selection: " + selection);
}

std::vector<VerifyReport> run_verify(const std::string& selection, std::uint64_t seed,
                                     int threads) {
    const auto names = resolve_verify_selection(selection);
    std::vector<VerifyReport> reports;
    for (const auto& name : names) {
        for (const auto& [check_name, fn] : check_table()) {
            if (check_name == name) {
                reports.push_back(fn(seed, threads));
                break;
            }
        }
    }
    return reports;
}

std::string format_report(const VerifyReport& report) {
    std::ostringstream out;
    out << (report.pass ? "[PASS] " : "[FAIL] ") << report.check
        << " observed=" << format_double(report.observed)
        << " bound=" << format_double(report.bound)
        << " tolerance=" << format_double(report.tolerance);
    if (!report.detail.empty()) out << " | " << report.detail;
    return out.str();
}

}  // namespace robustlab
