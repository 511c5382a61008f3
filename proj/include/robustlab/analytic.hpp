#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustlab/attacks.hpp"
#include "robustlab/distributions.hpp"

namespace robustlab {

/// Standard normal CDF evaluated through erfc; absolute error is far below
/// the 1e-12 budget assumed by the analytic tolerances.
double normal_cdf(double x);

/// Exact misclassification probability P[<w, y x> <= 0] of a linear
/// classifier in the Gaussian model: Phi(-<w, theta*> / (sigma ||w||_2)).
/// A zero margin counts as an error.
double gaussian_standard_error(std::span<const double> w, const GaussianModelParams& params);

/// Exact l_p^eps-robust classification error of a linear classifier in the
/// Gaussian model: Phi((eps ||w||_dual - <w, theta*>) / (sigma ||w||_2)),
/// with dual norm l1 for l-inf budgets and l2 for l2 budgets.
double gaussian_robust_error(std::span<const double> w, const GaussianModelParams& params,
                             const PerturbationBudget& budget);

enum class BernoulliErrorMethod { auto_select, enumeration, binomial };

/// Exact l-inf robust error P[<w, y x> - eps ||w||_1 <= 0] in the Bernoulli
/// model. Two exact evaluation paths exist: full enumeration of agreement
/// patterns (any w, at most 24 nonzero coordinates so the oracle stays
/// around a second) and a binomial-CDF path that needs all nonzero |w_i|
/// equal (any dimension). auto_select prefers the binomial path.
double bernoulli_error_exact(std::span<const double> w, const BernoulliModelParams& params,
                             const PerturbationBudget& budget,
                             BernoulliErrorMethod method = BernoulliErrorMethod::auto_select);

/// Closed form of the information-theoretic floor on the expected l-inf
/// robust error after n samples in dimension d with prior-drawn means:
/// (1/2) * (2 Phi(eps * sqrt((sigma^2+n)/n)) - 1)^d.
double gaussian_lower_bound(std::size_t n, double sigma, double epsilon, std::size_t d);

/// Posterior log odds of a single hypercube coordinate given oriented
/// observations z_i = y_i x_i, under the uniform prior:
/// tau_hat * sum_i z_i with tau_hat = log((1+2 tau)/(1-2 tau)).
double log_odds_bernoulli(std::span<const int> oriented_coordinate_samples, double tau);
double log_odds_bernoulli(double sum_z, double tau);

/// One evaluable catalog entry: the statement's numeric value plus, where
/// the statement carries one, its failure probability.
struct BoundSpec {
    std::string name;
    std::map<std::string, double> params;
    double value;
    std::optional<double> failure_prob;
};

/// Evaluates the named catalog entry with the given parameters. Throws on
/// unknown names or missing/invalid parameters.
BoundSpec evaluate_bound(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> bound_names();

struct BestEpsBounds {
    double robust_error_bound;     // error of w = theta* at eps < tau
    double nonrobust_error_lower;  // error of w = theta* at eps > 3 tau
    double universal_linear_lower; // error floor for every linear w at eps > 3 tau
};

/// The three robustness landmarks of the hypercube model at noise tau:
/// (2 exp(-tau^2 d / 2), 1 - 2 exp(-tau^2 d / 2), 1/6).
BestEpsBounds linear_besteps_bounds(const BernoulliModelParams& params);

}  // namespace robustlab
