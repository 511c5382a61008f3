#include "robustlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace robustlab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_w(std::span<const double> w, std::size_t d) {
    if (w.size() != d) throw std::invalid_argument("classifier/model dimension mismatch");
    for (double wi : w) {
        if (wi != 0.0) return;
    }
    throw std::invalid_argument("zero weight vector");
}

double binom_pmf(std::size_t n, double p, std::size_t k) {
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    const double log_pmf = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
                           std::lgamma(double(n - k) + 1.0) + double(k) * std::log(p) +
                           double(n - k) * std::log1p(-p);
    return std::exp(log_pmf);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double gaussian_standard_error(std::span<const double> w, const GaussianModelParams& params) {
    check_w(w, params.dim());
    const double ip = dot(w, params.theta_star());
    return normal_cdf(-ip / (params.sigma() * l2_norm(w)));
}

double gaussian_robust_error(std::span<const double> w, const GaussianModelParams& params,
                             const PerturbationBudget& budget) {
    check_w(w, params.dim());
    if (!(budget.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    const double ip = dot(w, params.theta_star());
    const double dual = budget.norm_kind == NormKind::linf ? l1_norm(w) : l2_norm(w);
    return normal_cdf((budget.epsilon * dual - ip) / (params.sigma() * l2_norm(w)));
}

namespace {

// Enumerates every agreement pattern over the nonzero coordinates. When the
// magnitudes are constant the margin is formed as c * (signed count) so that
// boundary decisions match the binomial path bit for bit; the general case
// sums the contributions directly.
double bernoulli_error_enumeration(const std::vector<double>& a, double p_agree, double threshold,
                                   bool constant_magnitude) {
    const std::size_t m = a.size();
    const double c = std::abs(a.front());
    double total = 0.0;
    const double q = 1.0 - p_agree;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
        double margin = 0.0;
        long long units = 0;
        double prob = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double sign = (mask & (std::uint64_t(1) << i)) ? 1.0 : -1.0;
            prob *= sign > 0.0 ? p_agree : q;
            if (constant_magnitude) {
                units += (a[i] > 0.0 ? 1 : -1) * (sign > 0.0 ? 1 : -1);
            } else {
                margin += sign * a[i];
            }
        }
        if (constant_magnitude) margin = c * static_cast<double>(units);
        if (margin <= threshold) total += prob;
    }
    return total;
}

// Constant-|w| path. With c = |w_i| the margin is c * (2M - m) where M
// counts coordinates drawn toward the classifier: Bin(m+, 1/2+tau) on the
// coordinates where w_i theta*_i > 0 convolved with Bin(m-, 1/2-tau) on the
// rest. Sign-aligned w (m- = 0) reduces to the plain binomial CDF.
double bernoulli_error_binomial(const std::vector<double>& a, double tau, double threshold) {
    const std::size_t m = a.size();
    const double c = std::abs(a.front());
    std::size_t m_plus = 0;
    for (double ai : a) {
        if (ai > 0.0) ++m_plus;
    }
    const std::size_t m_minus = m - m_plus;

    // Largest M with c * (2M - m) <= threshold, using the same floating
    // comparison the enumeration path performs.
    std::size_t m_star = 0;
    bool any = false;
    {
        double guess = (threshold / c + double(m)) / 2.0;
        long long k = std::min<long long>(static_cast<long long>(std::floor(guess)) + 2,
                                          static_cast<long long>(m));
        while (k >= 0 && c * (2.0 * double(k) - double(m)) > threshold) --k;
        if (k >= 0) {
            any = true;
            m_star = static_cast<std::size_t>(k);
        }
    }
    if (!any) return 0.0;

    const double p = 0.5 + tau;
    if (m_minus == 0) {
        double cdf = 0.0;
        for (std::size_t k = 0; k <= m_star; ++k) cdf += binom_pmf(m, p, k);
        return std::min(cdf, 1.0);
    }

    // 1 - p is the agreement probability on the sign-flipped coordinates.
    std::vector<double> cdf_minus(m_minus + 1);
    {
        double acc = 0.0;
        for (std::size_t k = 0; k <= m_minus; ++k) {
            acc += binom_pmf(m_minus, 1.0 - p, k);
            cdf_minus[k] = std::min(acc, 1.0);
        }
    }
    double total = 0.0;
    for (std::size_t j = 0; j <= std::min(m_plus, m_star); ++j) {
        const std::size_t rem = m_star - j;
        const double tail = rem >= m_minus ? 1.0 : cdf_minus[rem];
        total += binom_pmf(m_plus, p, j) * tail;
    }
    return std::min(total, 1.0);
}

}  // namespace

double bernoulli_error_exact(std::span<const double> w, const BernoulliModelParams& params,
                             const PerturbationBudget& budget, BernoulliErrorMethod method) {
    check_w(w, params.dim());
    if (budget.norm_kind != NormKind::linf) {
        throw std::invalid_argument("bernoulli_error_exact is defined for l-inf budgets only");
    }
    if (!(budget.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");

    const auto& theta = params.theta_star();
    std::vector<double> a;  // per-coordinate margin contribution w_i * theta*_i
    a.reserve(w.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0.0) {
            a.push_back(w[i] * theta[i]);
            l1 += std::abs(w[i]);
        }
    }
    const double threshold = budget.epsilon * l1;
    const std::size_t m = a.size();

    bool constant_magnitude = true;
    for (double ai : a) {
        if (std::abs(ai) != std::abs(a.front())) {
            constant_magnitude = false;
            break;
        }
    }

    switch (method) {
        case BernoulliErrorMethod::binomial:
            if (!constant_magnitude) {
                throw std::invalid_argument("binomial path needs constant |w_i| over its support");
            }
            return bernoulli_error_binomial(a, params.tau(), threshold);
        case BernoulliErrorMethod::enumeration:
            if (m > 24) {
                throw std::invalid_argument("enumeration path limited to 24 nonzero coordinates");
            }
            return bernoulli_error_enumeration(a, 0.5 + params.tau(), threshold,
                                               constant_magnitude);
        case BernoulliErrorMethod::auto_select:
            if (constant_magnitude) return bernoulli_error_binomial(a, params.tau(), threshold);
            if (m <= 24) {
                return bernoulli_error_enumeration(a, 0.5 + params.tau(), threshold, false);
            }
            throw std::invalid_argument(
                "dimension too large for enumeration with non-constant |w|; no exact path");
    }
    throw std::logic_error("unreachable");
}

double gaussian_lower_bound(std::size_t n, double sigma, double epsilon, std::size_t d) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (d == 0) throw std::invalid_argument("d must be >= 1");
    const double scale = std::sqrt((sigma * sigma + double(n)) / double(n));
    const double per_coord = 2.0 * normal_cdf(epsilon * scale) - 1.0;
    return 0.5 * std::pow(per_coord, double(d));
}

double log_odds_bernoulli(double sum_z, double tau) {
    if (!(tau > 0.0) || !(tau < 0.5)) throw std::invalid_argument("tau must lie in (0, 1/2)");
    const double tau_hat = std::log1p(2.0 * tau) - std::log1p(-2.0 * tau);
    return tau_hat * sum_z;
}

double log_odds_bernoulli(std::span<const int> oriented_coordinate_samples, double tau) {
    double sum = 0.0;
    for (int z : oriented_coordinate_samples) {
        if (z != 1 && z != -1) throw std::invalid_argument("oriented samples must be +/-1");
        sum += z;
    }
    return log_odds_bernoulli(sum, tau);
}

BestEpsBounds linear_besteps_bounds(const BernoulliModelParams& params) {
    const double tau = params.tau();
    const double d = static_cast<double>(params.dim());
    const double concentration = 2.0 * std::exp(-tau * tau * d / 2.0);
    BestEpsBounds b;
    b.robust_error_bound = std::min(concentration, 1.0);
    b.nonrobust_error_lower = std::max(1.0 - concentration, 0.0);
    b.universal_linear_lower = 1.0 / 6.0;
    return b;
}

namespace {

struct CatalogEntry {
    std::vector<std::string> required;
    std::function<double(const std::map<std::string, double>&)> value;
    std::function<std::optional<double>(const std::map<std::string, double>&)> failure_prob;
};

double need(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing parameter: " + key);
    return it->second;
}

std::optional<double> clamp_prob(double v) { return std::min(v, 1.0); }

double check_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
    return v;
}

double check_prob_param(double v, const char* what) {
    if (!(v > 0.0) || !(v < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0,1)");
    return v;
}

double unit_ip_failure(double sigma, double d) {
    return std::min(2.0 * std::exp(-d / (8.0 * (sigma * sigma + 1.0))), 1.0);
}

const std::map<std::string, CatalogEntry>& catalog() {
    static const std::map<std::string, CatalogEntry> entries = [] {
        std::map<std::string, CatalogEntry> c;

        c["fact_gaussian_norm"] = {
            {"sigma", "d", "t"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                return sigma * std::sqrt(need(p, "d")) + need(p, "t");
            },
            [](const auto& p) {
                const double sigma = need(p, "sigma");
                const double t = need(p, "t");
                return clamp_prob(std::exp(-t * t / (2.0 * sigma * sigma)));
            }};

        c["lemma_gaussian_norm"] = {
            {"sigma", "d", "n", "mu_norm", "delta"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double delta = check_prob_param(need(p, "delta"), "delta");
                return need(p, "mu_norm") +
                       sigma * (std::sqrt(need(p, "d")) + std::sqrt(2.0 * std::log(1.0 / delta))) /
                           std::sqrt(check_positive(need(p, "n"), "n"));
            },
            [](const auto& p) { return clamp_prob(need(p, "delta")); }};

        c["lemma_gaussian_norm2"] = {
            {"sigma", "d", "n"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                return (1.0 + 2.0 * sigma / std::sqrt(check_positive(need(p, "n"), "n"))) *
                       std::sqrt(need(p, "d"));
            },
            [](const auto& p) { return clamp_prob(std::exp(-need(p, "d") / 2.0)); }};

        c["lemma_gaussian_ip1"] = {
            {"sigma", "n", "mu_norm", "delta"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double delta = check_prob_param(need(p, "delta"), "delta");
                const double mu_norm = need(p, "mu_norm");
                return mu_norm * mu_norm -
                       sigma * mu_norm *
                           std::sqrt(2.0 * std::log(1.0 / delta) / check_positive(need(p, "n"), "n"));
            },
            [](const auto& p) { return clamp_prob(need(p, "delta")); }};

        c["lemma_unit_ip"] = {
            {"sigma", "d", "n"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double rn = std::sqrt(check_positive(need(p, "n"), "n"));
                return (2.0 * rn - 1.0) / (2.0 * rn + 4.0 * sigma) * std::sqrt(need(p, "d"));
            },
            [](const auto& p) { return unit_ip_failure(need(p, "sigma"), need(p, "d")); }};

        c["lemma_gaussian_classification"] = {
            {"sigma", "ip", "rho"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double gap = need(p, "ip") - need(p, "rho");
                if (gap < 0.0) throw std::invalid_argument("requires ip >= rho");
                return std::min(std::exp(-gap * gap / (2.0 * sigma * sigma)), 1.0);
            },
            [](const auto&) { return std::nullopt; }};

        c["thm_gaussian_standard"] = {
            {"sigma", "d", "n"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double rn = std::sqrt(check_positive(need(p, "n"), "n"));
                const double num = (2.0 * rn - 1.0) * (2.0 * rn - 1.0) * need(p, "d");
                const double den = 2.0 * (2.0 * rn + 4.0 * sigma) * (2.0 * rn + 4.0 * sigma) *
                                   sigma * sigma;
                return std::min(std::exp(-num / den), 1.0);
            },
            [](const auto& p) { return unit_ip_failure(need(p, "sigma"), need(p, "d")); }};

        c["cor_single_sample"] = {
            {"d", "beta", "sigma"},
            [](const auto& p) {
                const double beta = check_prob_param(need(p, "beta"), "beta");
                return std::pow(need(p, "d"), 0.25) / (5.0 * std::sqrt(std::log(1.0 / beta)));
            },
            [](const auto& p) { return unit_ip_failure(need(p, "sigma"), need(p, "d")); }};

        c["lemma_robustupper"] = {
            {"sigma", "ip", "eps", "dual_norm"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double gap = need(p, "ip") - need(p, "eps") * need(p, "dual_norm");
                if (gap < 0.0) throw std::invalid_argument("requires ip >= eps * dual_norm");
                return std::min(std::exp(-gap * gap / (2.0 * sigma * sigma)), 1.0);
            },
            [](const auto&) { return std::nullopt; }};

        c["thm_gausslinf"] = {
            {"sigma", "d", "n", "beta"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double beta = check_prob_param(need(p, "beta"), "beta");
                const double rn = std::sqrt(check_positive(need(p, "n"), "n"));
                return (2.0 * rn - 1.0) / (2.0 * rn + 4.0 * sigma) -
                       sigma * std::sqrt(2.0 * std::log(1.0 / beta)) / std::sqrt(need(p, "d"));
            },
            [](const auto& p) { return unit_ip_failure(need(p, "sigma"), need(p, "d")); }};

        c["cor_gausslinf_n"] = {
            {"eps", "d"},
            [](const auto& p) {
                const double eps = need(p, "eps");
                const double d = check_positive(need(p, "d"), "d");
                if (eps <= 0.25 * std::pow(d, -0.25)) return 1.0;
                return 64.0 * eps * eps * std::sqrt(d);
            },
            [](const auto&) { return std::nullopt; }};

        c["cor_gaussian_robust_n"] = {
            {"eps", "sigma", "d"},
            [](const auto& p) {
                const double sigma = check_positive(need(p, "sigma"), "sigma");
                const double d = need(p, "d");
                if (!(d > 1.0)) throw std::invalid_argument("d must exceed 1");
                const double eps = need(p, "eps");
                return eps * eps * sigma * sigma / (8.0 * std::log(d));
            },
            [](const auto&) { return std::nullopt; }};

        c["lemma_bernoulli_ip1"] = {
            {"tau", "d", "delta"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                const double d = need(p, "d");
                const double delta = check_prob_param(need(p, "delta"), "delta");
                return 2.0 * tau * d - std::sqrt(2.0 * d * std::log(1.0 / delta));
            },
            [](const auto& p) { return clamp_prob(need(p, "delta")); }};

        c["lemma_bernoulli_unit_ip"] = {
            {"tau", "d"},
            [](const auto& p) { return need(p, "tau") * std::sqrt(need(p, "d")); },
            [](const auto& p) {
                const double tau = need(p, "tau");
                return clamp_prob(std::exp(-tau * tau * need(p, "d") / 2.0));
            }};

        c["lemma_bernoulli_classification"] = {
            {"tau", "ip"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                const double ip = need(p, "ip");
                if (ip < 0.0) throw std::invalid_argument("requires ip >= 0");
                return std::min(std::exp(-2.0 * tau * tau * ip * ip), 1.0);
            },
            [](const auto&) { return std::nullopt; }};

        c["thm_bernoulli_standard"] = {
            {"tau", "d"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                return std::min(std::exp(-2.0 * std::pow(tau, 4.0) * need(p, "d")), 1.0);
            },
            [](const auto& p) {
                const double tau = need(p, "tau");
                return clamp_prob(std::exp(-tau * tau * need(p, "d") / 2.0));
            }};

        c["cor_bernoulli_single_sample"] = {
            {"d", "beta", "tau"},
            [](const auto& p) {
                const double beta = check_prob_param(need(p, "beta"), "beta");
                return std::pow(std::log(1.0 / beta) / (2.0 * need(p, "d")), 0.25);
            },
            [](const auto& p) {
                const double tau = need(p, "tau");
                return clamp_prob(std::exp(-tau * tau * need(p, "d") / 2.0));
            }};

        c["lemma_bb_one_d"] = {
            {"tau", "n", "delta"},
            [](const auto& p) {
                const double delta = check_prob_param(need(p, "delta"), "delta");
                return 15.0 * need(p, "tau") *
                       std::sqrt(2.0 * need(p, "n") * std::log(2.0 / delta));
            },
            [](const auto& p) { return clamp_prob(need(p, "delta")); }};

        c["lemma_linear_besteps_robust"] = {
            {"tau", "d"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                return std::min(2.0 * std::exp(-tau * tau * need(p, "d") / 2.0), 1.0);
            },
            [](const auto&) { return std::nullopt; }};

        c["lemma_linear_besteps_nonrobust"] = {
            {"tau", "d"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                return std::max(1.0 - 2.0 * std::exp(-tau * tau * need(p, "d") / 2.0), 0.0);
            },
            [](const auto&) { return std::nullopt; }};

        c["lemma_linear_besteps_universal"] = {
            {},
            [](const auto&) { return 1.0 / 6.0; },
            [](const auto&) { return std::nullopt; }};

        c["thm_bern_lin_lb_n"] = {
            {"eps", "gamma", "tau", "d"},
            [](const auto& p) {
                const double eps = need(p, "eps");
                const double gamma = check_prob_param(need(p, "gamma"), "gamma");
                const double tau = check_positive(need(p, "tau"), "tau");
                const double d = check_positive(need(p, "d"), "d");
                return eps * eps * gamma * gamma /
                       (5000.0 * std::pow(tau, 4.0) * std::log(4.0 * d / gamma));
            },
            [](const auto&) { return std::nullopt; }};

        c["bern_an"] = {
            {"tau", "n", "d", "gamma"},
            [](const auto& p) {
                const double tau = need(p, "tau");
                const double gamma = check_prob_param(need(p, "gamma"), "gamma");
                return 30.0 * tau * tau *
                       std::sqrt(2.0 * need(p, "n") * std::log(4.0 * need(p, "d") / gamma));
            },
            [](const auto&) { return std::nullopt; }};

        return c;
    }();
    return entries;
}

}  // namespace

BoundSpec evaluate_bound(const std::string& name, const std::map<std::string, double>& params) {
    const auto& entries = catalog();
    auto it = entries.find(name);
    if (it == entries.end()) throw std::invalid_argument("unknown bound name: " + name);
    for (const auto& key : it->second.required) need(params, key);

    BoundSpec spec;
    spec.name = name;
    spec.params = params;
    spec.value = it->second.value(params);
    if (!std::isfinite(spec.value)) throw std::invalid_argument("bound value is not finite");
    spec.failure_prob = it->second.failure_prob(params);
    return spec;
}

std::vector<std::string> bound_names() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : catalog()) names.push_back(name);
    return names;
}

}  // namespace robustlab
