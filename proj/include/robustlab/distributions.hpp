#pragma once

#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "robustlab/rng.hpp"

namespace robustlab {

struct LabeledSample {
    std::vector<double> x;
    int y;  // -1 or +1
};

using Dataset = std::vector<LabeledSample>;

enum class ModelKind { gaussian, bernoulli };

/// Two-component spherical Gaussian mixture: y uniform on {-1,+1},
/// x | y ~ N(y * theta_star, sigma^2 I).
class GaussianModelParams {
public:
    GaussianModelParams(std::vector<double> theta_star, double sigma);

    const std::vector<double>& theta_star() const { return theta_star_; }
    double sigma() const { return sigma_; }
    std::size_t dim() const { return theta_star_.size(); }

private:
    std::vector<double> theta_star_;
    double sigma_;
};

/// Hypercube model: y uniform on {-1,+1}, each coordinate equals
/// y * theta_star_i with probability 1/2 + tau and -y * theta_star_i
/// otherwise, independently.
class BernoulliModelParams {
public:
    BernoulliModelParams(std::vector<double> theta_star, double tau);

    const std::vector<double>& theta_star() const { return theta_star_; }
    double tau() const { return tau_; }
    std::size_t dim() const { return theta_star_.size(); }

private:
    std::vector<double> theta_star_;  // every entry exactly -1 or +1
    double tau_;                      // in (0, 1/2)
};

using ModelParams = std::variant<GaussianModelParams, BernoulliModelParams>;

std::size_t model_dim(const ModelParams& params);
ModelKind model_kind(const ModelParams& params);

/// Gaussian posterior over the mean vector given n oriented samples
/// z_i = y_i * x_i, under the N(0, I) prior:
///   mu_prime      = (sum_i z_i) / (sigma^2 + n)
///   var_prime     = sigma^2 / (sigma^2 + n)       (per coordinate)
///   predictive_var = var_prime + sigma^2           (fresh oriented sample)
struct PosteriorParams {
    std::vector<double> mu_prime;
    double var_prime;
    double predictive_var;
};

// Engine-based samplers compose into larger per-trial streams; the RngSeed
// overloads are the public deterministic entry points.
LabeledSample sample_one(const GaussianModelParams& params, std::mt19937_64& rng);
LabeledSample sample_one(const BernoulliModelParams& params, std::mt19937_64& rng);
LabeledSample sample_one(const ModelParams& params, std::mt19937_64& rng);

Dataset sample_gaussian(const GaussianModelParams& params, std::size_t n, std::mt19937_64& rng);
Dataset sample_gaussian(const GaussianModelParams& params, std::size_t n, RngSeed seed);

Dataset sample_bernoulli(const BernoulliModelParams& params, std::size_t n, std::mt19937_64& rng);
Dataset sample_bernoulli(const BernoulliModelParams& params, std::size_t n, RngSeed seed);

Dataset sample_dataset(const ModelParams& params, std::size_t n, RngSeed seed);

/// Draws model parameters from the prior used by the lower-bound
/// experiments: N(0, I) for the Gaussian kind, uniform hypercube vertex for
/// the Bernoulli kind.
std::vector<double> draw_prior_theta(ModelKind kind, std::size_t d, std::mt19937_64& rng);
std::vector<double> draw_prior_theta(ModelKind kind, std::size_t d, RngSeed seed);

/// Computes the posterior from a labeled dataset; samples are oriented
/// internally as z_i = y_i * x_i. Rejects empty data.
PosteriorParams gaussian_posterior(double sigma, const Dataset& data);

}  // namespace robustlab
