#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <vector>

#include "robustlab/distributions.hpp"

using namespace robustlab;

namespace {

// Test-only posterior oracle: discretizes the standard-normal prior on a
// grid and applies Bayes' rule per coordinate.
double grid_posterior_mean(const std::vector<double>& z_coord, double sigma) {
    const int points = 10000;
    const double lo = -10.0, hi = 10.0;
    const double h = (hi - lo) / (points - 1);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < points; ++i) {
        const double theta = lo + i * h;
        double logw = -0.5 * theta * theta;
        for (double z : z_coord) {
            const double r = (z - theta) / sigma;
            logw += -0.5 * r * r;
        }
        const double w = std::exp(logw);
        num += theta * w;
        den += w;
    }
    return num / den;
}

}  // namespace

TEST_CASE("gaussian sampling collapses onto the class mean as sigma -> 0") {
    const GaussianModelParams params({1.0, 1.0}, 1e-12);
    const auto data = sample_gaussian(params, 50, RngSeed{1, 0});
    for (const auto& s : data) {
        CHECK(std::abs(s.x[0] - s.y * 1.0) < 1e-9);
        CHECK(std::abs(s.x[1] - s.y * 1.0) < 1e-9);
    }
}

TEST_CASE("gaussian sampling moment check at theta = 0") {
    const GaussianModelParams params({0.0}, 1.0);
    const std::size_t n = 100000;
    const auto data = sample_gaussian(params, n, RngSeed{2, 0});
    double mean_yx = 0.0, mean_x = 0.0, mean_x2 = 0.0;
    for (const auto& s : data) {
        mean_yx += s.y * s.x[0];
        mean_x += s.x[0];
        mean_x2 += s.x[0] * s.x[0];
    }
    mean_yx /= n;
    mean_x /= n;
    mean_x2 /= n;
    const double var = mean_x2 - mean_x * mean_x;
    CHECK(std::abs(mean_yx) < 3.0 / std::sqrt(double(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("gaussian sampling per-coordinate moments near theta") {
    const std::size_t d = 4;
    const double sigma = 1.5;
    const GaussianModelParams params(std::vector<double>(d, 1.0), sigma);
    const std::size_t n = 100000;
    const auto data = sample_gaussian(params, n, RngSeed{3, 0});
    for (std::size_t i = 0; i < d; ++i) {
        double mean = 0.0, sq = 0.0;
        for (const auto& s : data) {
            const double z = s.y * s.x[i];
            mean += z;
            sq += z * z;
        }
        mean /= n;
        sq /= n;
        CHECK(std::abs(mean - 1.0) < 4.0 * sigma / std::sqrt(double(n)));
        CHECK(sq - mean * mean == doctest::Approx(sigma * sigma).epsilon(0.10));
    }
}

TEST_CASE("gaussian sampling is deterministic under seed replay") {
    const GaussianModelParams params({0.5, -2.0, 1.0}, 0.7);
    const auto a = sample_gaussian(params, 3, RngSeed{42, 0});
    const auto b = sample_gaussian(params, 3, RngSeed{42, 0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].x == b[i].x);
    }
}

TEST_CASE("gaussian params reject bad input") {
    CHECK_THROWS_AS(GaussianModelParams({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GaussianModelParams({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GaussianModelParams({std::nan("")}, 1.0), std::invalid_argument);
}

TEST_CASE("bernoulli sampling at near-deterministic bias") {
    const BernoulliModelParams params({1.0, -1.0, 1.0, 1.0}, 0.499999);
    std::size_t matches = 0, total = 0;
    auto rng = make_engine(RngSeed{4, 0});
    for (int rep = 0; rep < 1000; ++rep) {
        const auto data = sample_bernoulli(params, 10, rng);
        for (const auto& s : data) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (s.x[i] == s.y * params.theta_star()[i]) ++matches;
                ++total;
            }
        }
    }
    CHECK(double(matches) / double(total) >= 0.99);
}

TEST_CASE("bernoulli sampling binomial moment check") {
    const BernoulliModelParams params({1.0}, 0.25);
    const std::size_t n = 100000;
    const auto data = sample_bernoulli(params, n, RngSeed{5, 0});
    std::size_t agree = 0;
    for (const auto& s : data) {
        if (s.x[0] == s.y * 1.0) ++agree;
    }
    const double freq = double(agree) / double(n);
    CHECK(std::abs(freq - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / double(n)));
}

TEST_CASE("bernoulli samples live on the hypercube") {
    const BernoulliModelParams params({1.0, -1.0, -1.0}, 0.1);
    const auto data = sample_bernoulli(params, 200, RngSeed{6, 0});
    for (const auto& s : data) {
        CHECK((s.y == 1 || s.y == -1));
        for (double v : s.x) CHECK((v == 1.0 || v == -1.0));
    }
}

TEST_CASE("bernoulli params reject tau outside (0, 1/2)") {
    CHECK_THROWS_AS(BernoulliModelParams({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliModelParams({1.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliModelParams({0.5}, 0.25), std::invalid_argument);
}

TEST_CASE("prior draws match their distributions") {
    SUBCASE("bernoulli kind has zero-mean coordinates") {
        const std::size_t draws = 10000, d = 20;
        std::vector<double> mean(d, 0.0);
        for (std::size_t t = 0; t < draws; ++t) {
            const auto theta = draw_prior_theta(ModelKind::bernoulli, d, RngSeed{7, t});
            for (std::size_t i = 0; i < d; ++i) {
                CHECK((theta[i] == 1.0 || theta[i] == -1.0));
                mean[i] += theta[i];
            }
        }
        for (double m : mean) CHECK(std::abs(m / draws) < 3.0 / std::sqrt(double(draws)));
    }
    SUBCASE("gaussian kind is symmetric about zero") {
        const std::size_t draws = 100000;
        std::size_t nonpositive = 0;
        auto rng = make_engine(RngSeed{8, 0});
        for (std::size_t t = 0; t < draws; ++t) {
            if (draw_prior_theta(ModelKind::gaussian, 1, rng)[0] <= 0.0) ++nonpositive;
        }
        CHECK(std::abs(double(nonpositive) / draws - 0.5) < 3.0 * 0.5 / std::sqrt(double(draws)));
    }
    SUBCASE("replay is exact") {
        CHECK(draw_prior_theta(ModelKind::gaussian, 6, RngSeed{9, 3}) ==
              draw_prior_theta(ModelKind::gaussian, 6, RngSeed{9, 3}));
    }
}

TEST_CASE("gaussian posterior closed form") {
    // oriented samples z1 = (1, 0), z2 = (3, 2) with sigma^2 = 2
    const Dataset data = {{{1.0, 0.0}, 1}, {{-3.0, -2.0}, -1}};
    const auto post = gaussian_posterior(std::sqrt(2.0), data);
    CHECK(post.mu_prime[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.mu_prime[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post.var_prime == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post.predictive_var == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("gaussian posterior of all-zero data is zero") {
    const Dataset data = {{{0.0, 0.0}, 1}, {{0.0, 0.0}, -1}};
    for (double sigma : {0.5, 1.0, 3.0}) {
        const auto post = gaussian_posterior(sigma, data);
        CHECK(post.mu_prime[0] == 0.0);
        CHECK(post.mu_prime[1] == 0.0);
    }
}

TEST_CASE("gaussian posterior concentrates with more data") {
    const double sigma = 1.3;
    double prev_var = 1.0;
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
        Dataset data;
        for (std::size_t i = 0; i < n; ++i) data.push_back({{2.0}, 1});
        const auto post = gaussian_posterior(sigma, data);
        CHECK(post.var_prime < prev_var);
        prev_var = post.var_prime;
        // mean approaches the oriented sample mean
        const double expected = 2.0 * n / (sigma * sigma + n);
        CHECK(post.mu_prime[0] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("gaussian posterior matches the grid oracle") {
    const double sigma = std::sqrt(2.0);
    const Dataset data = {{{1.0, 0.0}, 1}, {{3.0, 2.0}, 1}};
    const auto post = gaussian_posterior(sigma, data);
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> z_coord;
        for (const auto& s : data) z_coord.push_back(s.y * s.x[i]);
        CHECK(std::abs(post.mu_prime[i] - grid_posterior_mean(z_coord, sigma)) < 1e-6);
    }
}

TEST_CASE("gaussian posterior rejects empty data") {
    CHECK_THROWS_AS(gaussian_posterior(1.0, Dataset{}), std::invalid_argument);
}
