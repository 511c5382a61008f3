#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "robustlab/analytic.hpp"
#include "robustlab/estimation.hpp"

using namespace robustlab;

namespace {

Learner weighted_mean() {
    return [](const Dataset& data) { return learn_weighted_mean(data); };
}

}  // namespace

TEST_CASE("error estimate construction") {
    const auto e = make_error_estimate(25, 100);
    CHECK(e.p_hat == doctest::Approx(0.25));
    CHECK(e.std_err == doctest::Approx(std::sqrt(0.25 * 0.75 / 100.0)).epsilon(1e-12));
    CHECK(e.ci_low >= 0.0);
    CHECK(e.ci_high <= 1.0);
    CHECK(e.ci_low < e.p_hat);
    CHECK(e.ci_high > e.p_hat);

    SUBCASE("single trial stays well formed") {
        for (std::uint64_t hits : {0ull, 1ull}) {
            const auto one = make_error_estimate(hits, 1);
            CHECK((one.p_hat == 0.0 || one.p_hat == 1.0));
            CHECK(one.ci_low >= 0.0);
            CHECK(one.ci_high <= 1.0);
            CHECK(one.ci_low <= one.ci_high);
        }
    }
    SUBCASE("extreme rates use the wilson fallback") {
        const auto rare = make_error_estimate(0, 100000);
        CHECK(rare.p_hat == 0.0);
        CHECK(rare.ci_high > 0.0);  // a degenerate [0, 0] interval would be wrong
        CHECK(rare.ci_high < 1e-3);
    }
    CHECK_THROWS_AS(make_error_estimate(0, 0), std::invalid_argument);
}

TEST_CASE("mc standard error against the analytic value") {
    const GaussianModelParams model({1.0, 1.0, 1.0, 1.0}, 2.0);
    const LinearClassifier clf({1.0, 1.0, 1.0, 1.0});
    const auto est = mc_standard_error(clf, model, 1000000, RngSeed{51, 0});
    const double exact = gaussian_standard_error(clf.weights(), model);
    CHECK(std::abs(est.p_hat - exact) <= 3.0 * est.std_err);

    SUBCASE("orthogonal weights sit at 1/2") {
        const GaussianModelParams m2({1.0, 1.0}, 1.0);
        const LinearClassifier orth({1.0, -1.0});
        const auto coin = mc_standard_error(orth, m2, 100000, RngSeed{51, 1});
        CHECK(std::abs(coin.p_hat - 0.5) <= 3.0 * coin.std_err);
    }
}

TEST_CASE("mc robust error with the exact attack") {
    const GaussianModelParams model({1.0, 1.0}, 1.0);
    const LinearClassifier clf({1.0, 1.0});
    const PerturbationBudget budget{0.5, NormKind::linf};
    const auto est = mc_robust_error(clf, model, budget, AttackSpec{}, 1000000, RngSeed{52, 0});
    const double exact = gaussian_robust_error(clf.weights(), model, budget);
    CHECK(std::abs(est.p_hat - exact) <= 3.0 * est.std_err);
    CHECK_FALSE(est.lower_bound_only);
}

TEST_CASE("zero budget replays the standard estimate exactly") {
    const GaussianModelParams model({1.0, -1.0, 2.0}, 1.5);
    const LinearClassifier clf({0.5, 0.1, 0.2});
    const RngSeed seed{53, 0};
    const auto std_est = mc_standard_error(clf, model, 20000, seed);
    const PerturbationBudget zero{0.0, NormKind::linf};

    const auto optimal = mc_robust_error(clf, model, zero, AttackSpec{}, 20000, seed);
    CHECK(optimal.p_hat == std_est.p_hat);

    AttackSpec pgd;
    pgd.kind = AttackKind::pgd;
    const auto via_pgd = mc_robust_error(clf, model, zero, pgd, 20000, seed);
    CHECK(via_pgd.p_hat == std_est.p_hat);
    CHECK(via_pgd.lower_bound_only);

    AttackSpec universal;
    universal.kind = AttackKind::universal;
    universal.universal_delta = {0.0, 0.0, 0.0};
    const auto via_universal = mc_robust_error(clf, model, zero, universal, 20000, seed);
    CHECK(via_universal.p_hat == std_est.p_hat);
}

TEST_CASE("thresholding removes sub-unit attacks on hypercube data") {
    const std::size_t d = 50;
    const auto theta = draw_prior_theta(ModelKind::bernoulli, d, RngSeed{54, 0});
    const BernoulliModelParams model(theta, 0.2);
    const auto data = sample_bernoulli(model, 1, RngSeed{54, 1});
    const auto clf = learn_weighted_mean(data, true, Preprocess::threshold);

    const RngSeed seed{54, 2};
    AttackSpec attack;
    attack.kind = AttackKind::threshold_exact;
    const auto rob = mc_robust_error(clf, model, {0.99, NormKind::linf}, attack, 20000, seed);
    const auto std_est = mc_standard_error(clf, model, 20000, seed);
    CHECK(rob.p_hat == std_est.p_hat);
}

TEST_CASE("optimal attack dominates pgd") {
    const GaussianModelParams model({1.0, 0.5, -0.5, 1.0}, 2.0);
    const LinearClassifier clf({0.8, -0.2, 0.4, 0.6});
    const PerturbationBudget budget{0.3, NormKind::linf};
    const RngSeed seed{55, 0};
    const auto optimal = mc_robust_error(clf, model, budget, AttackSpec{}, 50000, seed);
    AttackSpec pgd;
    pgd.kind = AttackKind::pgd;
    const auto via_pgd = mc_robust_error(clf, model, budget, pgd, 50000, seed);
    const double combined = std::sqrt(optimal.std_err * optimal.std_err +
                                      via_pgd.std_err * via_pgd.std_err);
    CHECK(optimal.p_hat >= via_pgd.p_hat - 3.0 * combined);
}

TEST_CASE("estimates are unbiased across a small parameter grid") {
    std::size_t cells = 0, passed = 0;
    for (std::size_t d : {2u, 4u, 8u}) {
        for (double sigma : {0.5, 1.0, 2.0}) {
            for (double eps : {0.0, 0.1, 0.5}) {
                const GaussianModelParams model(std::vector<double>(d, 1.0), sigma);
                const LinearClassifier clf(std::vector<double>(d, 1.0));
                const PerturbationBudget budget{eps, NormKind::linf};
                const double exact = gaussian_robust_error(clf.weights(), model, budget);
                const auto est = mc_robust_error(clf, model, budget, AttackSpec{}, 20000,
                                                 RngSeed{56, cells});
                const double se = std::sqrt(exact * (1.0 - exact) / 20000.0);
                if (se > 0.0 ? std::abs(est.p_hat - exact) <= 4.0 * se : est.p_hat == exact) {
                    ++passed;
                }
                ++cells;
            }
        }
    }
    CHECK(double(passed) / double(cells) >= 0.95);
}

TEST_CASE("a corrupted error formula is detectable") {
    // Swapping the two norms in the robust-error formula must land far
    // outside the Monte Carlo tolerance for weights with distinct norms.
    const GaussianModelParams model({1.0, 1.0, 1.0, 1.0}, 1.0);
    const LinearClassifier clf({1.0, 0.2, 0.2, 0.2});
    const PerturbationBudget budget{0.4, NormKind::linf};
    const auto est = mc_robust_error(clf, model, budget, AttackSpec{}, 100000, RngSeed{57, 0});

    const double ip = 1.6;
    const double l1 = 1.6, l2 = std::sqrt(1.0 + 3 * 0.04);
    const double right = normal_cdf((budget.epsilon * l1 - ip) / (1.0 * l2));
    const double wrong = normal_cdf((budget.epsilon * l2 - ip) / (1.0 * l1));
    const double se = std::sqrt(right * (1.0 - right) / 1e5);
    CHECK(std::abs(est.p_hat - right) <= 4.0 * se);
    CHECK(std::abs(est.p_hat - wrong) > 4.0 * se);
}

TEST_CASE("incompatible attack and classifier pairs are rejected") {
    const GaussianModelParams model({1.0, 1.0}, 1.0);
    const LinearClassifier plain({1.0, 1.0});
    const LinearClassifier thresholded({1.0, 1.0}, Preprocess::threshold);
    const PerturbationBudget budget{0.1, NormKind::linf};

    CHECK_THROWS_AS(
        mc_robust_error(thresholded, model, budget, AttackSpec{}, 10, RngSeed{58, 0}),
        std::invalid_argument);
    AttackSpec pgd;
    pgd.kind = AttackKind::pgd;
    CHECK_THROWS_AS(mc_robust_error(thresholded, model, budget, pgd, 10, RngSeed{58, 1}),
                    std::invalid_argument);
    AttackSpec texact;
    texact.kind = AttackKind::threshold_exact;
    CHECK_THROWS_AS(mc_robust_error(plain, model, budget, texact, 10, RngSeed{58, 2}),
                    std::invalid_argument);
    AttackSpec universal;
    universal.kind = AttackKind::universal;
    universal.universal_delta = {0.1};  // wrong dimension
    CHECK_THROWS_AS(mc_robust_error(plain, model, budget, universal, 10, RngSeed{58, 3}),
                    std::invalid_argument);
}

TEST_CASE("estimators are thread-count independent") {
    const GaussianModelParams model(std::vector<double>(8, 1.0), 1.0);
    const LinearClassifier clf(std::vector<double>(8, 0.35));
    const PerturbationBudget budget{0.2, NormKind::linf};
    const RngSeed seed{59, 0};
    const auto serial = mc_robust_error(clf, model, budget, AttackSpec{}, 30000, seed, 1);
    const auto two = mc_robust_error(clf, model, budget, AttackSpec{}, 30000, seed, 2);
    const auto eight = mc_robust_error(clf, model, budget, AttackSpec{}, 30000, seed, 8);
    CHECK(serial.p_hat == two.p_hat);
    CHECK(serial.p_hat == eight.p_hat);

    const auto lower_serial = expected_robust_error_lower_experiment(weighted_mean(), 4, 5, 2.0,
                                                                     1.0, 60, 40, seed, 1);
    const auto lower_parallel = expected_robust_error_lower_experiment(weighted_mean(), 4, 5, 2.0,
                                                                       1.0, 60, 40, seed, 4);
    CHECK(lower_serial.estimate.p_hat == lower_parallel.estimate.p_hat);
    CHECK(lower_serial.budget_exceeded_rate == lower_parallel.budget_exceeded_rate);
}

TEST_CASE("lower-bound experiment meets the analytic floor") {
    const std::size_t d = 5, n = 4;
    const double sigma = 2.0, eps = 1.0;
    const auto res = expected_robust_error_lower_experiment(weighted_mean(), n, d, sigma, eps,
                                                            400, 100, RngSeed{60, 0});
    const double bound = gaussian_lower_bound(n, sigma, eps, d);
    CHECK(res.estimate.p_hat >= bound - 3.0 * res.estimate.std_err);
    CHECK(res.estimate.lower_bound_only);
    CHECK(res.budget_exceeded_rate >= 0.0);
    CHECK(res.budget_exceeded_rate <= 1.0);
    // the exceed rate complements the in-budget probability 2 * bound
    CHECK(std::abs(res.budget_exceeded_rate - (1.0 - 2.0 * bound)) < 0.1);
}

TEST_CASE("lower-bound experiment edge regimes") {
    SUBCASE("zero budget: the perturbation almost never fits, the floor is zero") {
        const auto res = expected_robust_error_lower_experiment(weighted_mean(), 2, 4, 1.0, 0.0,
                                                                50, 20, RngSeed{61, 0});
        CHECK(gaussian_lower_bound(2, 1.0, 0.0, 4) == 0.0);
        CHECK(res.estimate.p_hat >= 0.0);
        CHECK(res.budget_exceeded_rate == 1.0);
    }
    SUBCASE("plentiful data drives the estimate well below 1/2") {
        const auto res = expected_robust_error_lower_experiment(weighted_mean(), 10000, 4, 1.0,
                                                                0.05, 50, 50, RngSeed{61, 1});
        CHECK(res.estimate.p_hat < 0.25);
    }
}
