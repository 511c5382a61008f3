#include "robustlab/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace robustlab {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + " has a non-finite coordinate");
        }
    }
}

int draw_label(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    return coin(rng) == 0 ? -1 : 1;
}

}  // namespace

GaussianModelParams::GaussianModelParams(std::vector<double> theta_star, double sigma)
    : theta_star_(std::move(theta_star)), sigma_(sigma) {
    if (theta_star_.empty()) throw std::invalid_argument("theta_star must have dimension >= 1");
    check_finite(theta_star_, "theta_star");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
        throw std::invalid_argument("sigma must be positive and finite");
    }
}

BernoulliModelParams::BernoulliModelParams(std::vector<double> theta_star, double tau)
    : theta_star_(std::move(theta_star)), tau_(tau) {
    if (theta_star_.empty()) throw std::invalid_argument("theta_star must have dimension >= 1");
    for (double t : theta_star_) {
        if (t != 1.0 && t != -1.0) {
            throw std::invalid_argument("Bernoulli theta_star coordinates must be exactly -1 or +1");
        }
    }
    if (!(tau_ > 0.0) || !(tau_ < 0.5)) {
        throw std::invalid_argument("tau must lie in the open interval (0, 1/2)");
    }
}

std::size_t model_dim(const ModelParams& params) {
    return std::visit([](const auto& p) { return p.dim(); }, params);
}

ModelKind model_kind(const ModelParams& params) {
    return std::holds_alternative<GaussianModelParams>(params) ? ModelKind::gaussian
                                                               : ModelKind::bernoulli;
}

LabeledSample sample_one(const GaussianModelParams& params, std::mt19937_64& rng) {
    const int y = draw_label(rng);
    std::normal_distribution<double> noise(0.0, params.sigma());
    LabeledSample s;
    s.y = y;
    s.x.resize(params.dim());
    const auto& theta = params.theta_star();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        s.x[i] = y * theta[i] + noise(rng);
    }
    return s;
}

LabeledSample sample_one(const BernoulliModelParams& params, std::mt19937_64& rng) {
    const int y = draw_label(rng);
    std::bernoulli_distribution keep(0.5 + params.tau());
    LabeledSample s;
    s.y = y;
    s.x.resize(params.dim());
    const auto& theta = params.theta_star();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        s.x[i] = keep(rng) ? y * theta[i] : -y * theta[i];
    }
    return s;
}

LabeledSample sample_one(const ModelParams& params, std::mt19937_64& rng) {
    return std::visit([&rng](const auto& p) { return sample_one(p, rng); }, params);
}

Dataset sample_gaussian(const GaussianModelParams& params, std::size_t n, std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");
    Dataset data;
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.push_back(sample_one(params, rng));
    return data;
}

Dataset sample_gaussian(const GaussianModelParams& params, std::size_t n, RngSeed seed) {
    auto rng = make_engine(seed);
    return sample_gaussian(params, n, rng);
}

Dataset sample_bernoulli(const BernoulliModelParams& params, std::size_t n, std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");
    Dataset data;
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.push_back(sample_one(params, rng));
    return data;
}

Dataset sample_bernoulli(const BernoulliModelParams& params, std::size_t n, RngSeed seed) {
    auto rng = make_engine(seed);
    return sample_bernoulli(params, n, rng);
}

Dataset sample_dataset(const ModelParams& params, std::size_t n, RngSeed seed) {
    auto rng = make_engine(seed);
    Dataset data;
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.push_back(sample_one(params, rng));
    return data;
}

std::vector<double> draw_prior_theta(ModelKind kind, std::size_t d, std::mt19937_64& rng) {
    if (d == 0) throw std::invalid_argument("dimension must be >= 1");
    std::vector<double> theta(d);
    if (kind == ModelKind::gaussian) {
        std::normal_distribution<double> std_normal(0.0, 1.0);
        for (auto& t : theta) t = std_normal(rng);
    } else {
        std::uniform_int_distribution<int> coin(0, 1);
        for (auto& t : theta) t = coin(rng) == 0 ? -1.0 : 1.0;
    }
    return theta;
}

std::vector<double> draw_prior_theta(ModelKind kind, std::size_t d, RngSeed seed) {
    auto rng = make_engine(seed);
    return draw_prior_theta(kind, d, rng);
}

PosteriorParams gaussian_posterior(double sigma, const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("posterior requires at least one sample");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be positive and finite");
    }
    const std::size_t d = data.front().x.size();
    const double n = static_cast<double>(data.size());
    const double sigma2 = sigma * sigma;

    PosteriorParams post;
    post.mu_prime.assign(d, 0.0);
    for (const auto& s : data) {
        if (s.x.size() != d) throw std::invalid_argument("inconsistent sample dimensions");
        for (std::size_t i = 0; i < d; ++i) post.mu_prime[i] += s.y * s.x[i];
    }
    for (auto& m : post.mu_prime) m /= (sigma2 + n);
    post.var_prime = sigma2 / (sigma2 + n);
    post.predictive_var = post.var_prime + sigma2;
    return post;
}

}  // namespace robustlab
