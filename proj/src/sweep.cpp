#include "robustlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "robustlab/analytic.hpp"
#include "robustlab/parallel.hpp"

namespace robustlab {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::gaussian ? "gaussian" : "bernoulli";
}

std::string to_string(ThetaMode mode) {
    return mode == ThetaMode::fixed_norm ? "fixed_norm" : "prior";
}

std::string to_string(ClassifierKind kind) {
    return kind == ClassifierKind::plain ? "plain" : "thresholded";
}

void SweepConfig::validate() const {
    if (d_list.empty()) throw std::invalid_argument("d_list must be nonempty");
    if (noise_list.empty()) throw std::invalid_argument("noise_list must be nonempty");
    if (epsilon_list.empty()) throw std::invalid_argument("epsilon_list must be nonempty");
    if (classifier_kinds.empty()) throw std::invalid_argument("classifier_kinds must be nonempty");
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    for (std::size_t d : d_list) {
        if (d == 0) throw std::invalid_argument("dimensions must be >= 1");
    }
    for (double noise : noise_list) {
        if (!(noise > 0.0)) throw std::invalid_argument("noise values must be positive");
        if (model_kind == ModelKind::bernoulli && !(noise < 0.5)) {
            throw std::invalid_argument("tau must lie in (0, 1/2)");
        }
    }
    for (double eps : epsilon_list) {
        if (!(eps >= 0.0)) throw std::invalid_argument("epsilon values must be nonnegative");
    }
    const auto grid = effective_n_grid();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (grid[i] >= grid[i + 1]) throw std::invalid_argument("n_grid must be strictly increasing");
    }
    if (!grid.empty() && grid.front() == 0) throw std::invalid_argument("n values must be >= 1");
}

std::vector<std::uint64_t> SweepConfig::effective_n_grid() const {
    if (!n_grid.empty()) return n_grid;
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = 1; n <= 16384; n *= 2) grid.push_back(n);
    return grid;
}

const char* const kSweepCsvPreamble = "# robustlab sweep csv v1";
const char* const kSweepCsvHeader =
    "model,d,noise,eps,n,trial,classifier,std_err_analytic,std_err_mc,"
    "rob_err_analytic,rob_err_mc,ci_low,ci_high,seed";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string to_csv_line(const SweepRecord& r) {
    std::string line;
    line.reserve(160);
    line += r.model;
    line += ',';
    line += std::to_string(r.d);
    line += ',';
    line += format_double(r.noise);
    line += ',';
    line += format_double(r.eps);
    line += ',';
    line += std::to_string(r.n);
    line += ',';
    line += std::to_string(r.trial);
    line += ',';
    line += r.classifier;
    line += ',';
    line += format_double(r.std_err_analytic);
    line += ',';
    line += format_double(r.std_err_mc);
    line += ',';
    line += format_double(r.rob_err_analytic);
    line += ',';
    line += format_double(r.rob_err_mc);
    line += ',';
    line += format_double(r.ci_low);
    line += ',';
    line += format_double(r.ci_high);
    line += ',';
    line += std::to_string(r.seed);
    return line;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::invalid_argument("bad numeric field: " + s);
    return v;
}

std::uint64_t parse_uint_field(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad integer field: " + s);
    }
    return std::stoull(s);
}

}  // namespace

SweepRecord parse_csv_line(const std::string& line) {
    const auto f = split_csv(line);
    if (f.size() != 14) throw std::invalid_argument("expected 14 csv fields");
    SweepRecord r;
    r.model = f[0];
    r.d = parse_uint_field(f[1]);
    r.noise = parse_double_field(f[2]);
    r.eps = parse_double_field(f[3]);
    r.n = parse_uint_field(f[4]);
    r.trial = parse_uint_field(f[5]);
    r.classifier = f[6];
    r.std_err_analytic = parse_double_field(f[7]);
    r.std_err_mc = parse_double_field(f[8]);
    r.rob_err_analytic = parse_double_field(f[9]);
    r.rob_err_mc = parse_double_field(f[10]);
    r.ci_low = parse_double_field(f[11]);
    r.ci_high = parse_double_field(f[12]);
    r.seed = parse_uint_field(f[13]);
    return r;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << kSweepCsvPreamble << '\n' << kSweepCsvHeader << '\n';
    for (const auto& r : records) out << to_csv_line(r) << '\n';
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::vector<SweepRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kSweepCsvHeader) throw std::invalid_argument("unexpected csv header");
            header_seen = true;
            continue;
        }
        records.push_back(parse_csv_line(line));
    }
    return records;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> fixed_norm_theta(ModelKind kind, std::size_t d) {
    // All-ones: l2 norm sqrt(d) for the Gaussian model, a hypercube vertex
    // for the Bernoulli model.
    (void)kind;
    return std::vector<double>(d, 1.0);
}

struct AnalyticErrors {
    double std_err = kNaN;
    double rob_err = kNaN;
};

AnalyticErrors analytic_errors(const LinearClassifier& clf, const ModelParams& model, double eps) {
    AnalyticErrors out;
    const PerturbationBudget rob_budget{eps, NormKind::linf};
    const PerturbationBudget std_budget{0.0, NormKind::linf};
    if (const auto* g = std::get_if<GaussianModelParams>(&model)) {
        if (clf.preprocess() == Preprocess::identity) {
            out.std_err = gaussian_standard_error(clf.weights(), *g);
            out.rob_err = gaussian_robust_error(clf.weights(), *g, rob_budget);
        }
        // No closed form for thresholded classifiers on Gaussian data.
        return out;
    }
    const auto& b = std::get<BernoulliModelParams>(model);
    try {
        const double std_exact = bernoulli_error_exact(clf.weights(), b, std_budget);
        if (clf.preprocess() == Preprocess::identity) {
            out.std_err = std_exact;
            out.rob_err = bernoulli_error_exact(clf.weights(), b, rob_budget);
        } else {
            // Thresholding is the identity on hypercube points, and for
            // eps < 1 it removes any in-budget perturbation.
            out.std_err = std_exact;
            if (eps < 1.0) out.rob_err = std_exact;
        }
    } catch (const std::invalid_argument&) {
        // No exact path for this weight pattern/dimension; leave NaN.
    }
    return out;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config, int threads) {
    config.validate();
    const auto n_grid = config.effective_n_grid();
    const std::size_t num_d = config.d_list.size();
    const std::size_t num_noise = config.noise_list.size();
    const std::size_t num_eps = config.epsilon_list.size();
    const std::size_t num_n = n_grid.size();
    const std::size_t num_trials = config.trials;
    const std::size_t num_kinds = config.classifier_kinds.size();

    const std::size_t rows_per_unit = num_eps * num_n * num_kinds;
    const std::size_t num_units = num_d * num_noise * num_trials;
    std::vector<SweepRecord> rows(num_units * rows_per_unit);

    // Row order: d, noise, eps, n, trial, classifier. One work unit covers a
    // (d, noise, trial) triple so the nested training prefix is drawn once.
    const auto row_index = [&](std::size_t di, std::size_t ni, std::size_t ei, std::size_t gi,
                               std::size_t ti, std::size_t ci) {
        return ((((di * num_noise + ni) * num_eps + ei) * num_n + gi) * num_trials + ti) *
                   num_kinds +
               ci;
    };

    const RngSeed root{config.base_seed, 0};

    std::vector<double> unit_done;  // dummy sink for the parallel fill
    par::fill(
        num_units, unit_done,
        [&](std::size_t u) -> double {
            const std::size_t di = u / (num_noise * num_trials);
            const std::size_t ni = (u / num_trials) % num_noise;
            const std::size_t ti = u % num_trials;
            const std::size_t d = config.d_list[di];
            const double noise = config.noise_list[ni];

            const RngSeed unit_seed = child_seed(root, u);
            auto rng = make_engine(unit_seed);

            std::vector<double> theta =
                config.theta_mode == ThetaMode::fixed_norm
                    ? fixed_norm_theta(config.model_kind, d)
                    : draw_prior_theta(config.model_kind, d, rng);
            ModelParams model =
                config.model_kind == ModelKind::gaussian
                    ? ModelParams(GaussianModelParams(theta, noise))
                    : ModelParams(BernoulliModelParams(theta, noise));

            // Nested prefix: the first n samples of one stream serve every
            // grid point of this trial.
            std::vector<double> weight_sum(d, 0.0);
            std::uint64_t drawn = 0;

            for (std::size_t gi = 0; gi < num_n; ++gi) {
                const std::uint64_t n = n_grid[gi];
                while (drawn < n) {
                    const auto s = sample_one(model, rng);
                    for (std::size_t i = 0; i < d; ++i) weight_sum[i] += s.y * s.x[i];
                    ++drawn;
                }
                std::vector<double> w_mean(d);
                for (std::size_t i = 0; i < d; ++i) {
                    w_mean[i] = weight_sum[i] / static_cast<double>(n);
                }

                for (std::size_t ci = 0; ci < num_kinds; ++ci) {
                    const auto kind = config.classifier_kinds[ci];
                    std::optional<LinearClassifier> clf;
                    try {
                        clf.emplace(w_mean,
                                    kind == ClassifierKind::plain ? Preprocess::identity
                                                                  : Preprocess::threshold);
                    } catch (const std::invalid_argument&) {
                        // Degenerate all-zero mean; the rows keep NaN errors.
                    }

                    for (std::size_t ei = 0; ei < num_eps; ++ei) {
                        const double eps = config.epsilon_list[ei];
                        SweepRecord& r = rows[row_index(di, ni, ei, gi, ti, ci)];
                        r.model = to_string(config.model_kind);
                        r.d = d;
                        r.noise = noise;
                        r.eps = eps;
                        r.n = n;
                        r.trial = ti;
                        r.classifier = to_string(kind);
                        r.std_err_analytic = kNaN;
                        r.std_err_mc = kNaN;
                        r.rob_err_analytic = kNaN;
                        r.rob_err_mc = kNaN;
                        r.ci_low = kNaN;
                        r.ci_high = kNaN;

                        const std::size_t row_local = (ei * num_n + gi) * num_kinds + ci;
                        const RngSeed row_seed = child_seed(unit_seed, row_local);
                        r.seed = stream_key(row_seed);
                        if (!clf) continue;

                        const auto analytic = analytic_errors(*clf, model, eps);
                        r.std_err_analytic = analytic.std_err;
                        r.rob_err_analytic = analytic.rob_err;

                        if (config.mc_trials > 0) {
                            const auto std_est = mc_standard_error(*clf, model, config.mc_trials,
                                                                   row_seed, /*threads=*/1);
                            AttackSpec attack;
                            attack.kind = kind == ClassifierKind::plain
                                              ? AttackKind::optimal
                                              : AttackKind::threshold_exact;
                            const auto rob_est = mc_robust_error(
                                *clf, model, PerturbationBudget{eps, NormKind::linf}, attack,
                                config.mc_trials, row_seed, /*threads=*/1);
                            r.std_err_mc = std_est.p_hat;
                            r.rob_err_mc = rob_est.p_hat;
                            r.ci_low = rob_est.ci_low;
                            r.ci_high = rob_est.ci_high;
                        }
                    }
                }
            }
            return 0.0;
        },
        threads);

    return rows;
}

namespace {

// Minimal TOML reader covering the flat sweep configs: scalar and
// single-line array values, quoted strings, booleans, # comments.
class MiniToml {
public:
    explicit MiniToml(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::ios_base::failure("cannot open config: " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            strip_comment(line);
            trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') continue;  // tables are not used
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
            }
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            trim(key);
            trim(value);
            if (key.empty() || value.empty()) {
                throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
            }
            values_[key] = value;
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::vector<std::string> keys_seen() const {
        std::vector<std::string> keys;
        for (const auto& [k, v] : values_) keys.push_back(k);
        return keys;
    }

    std::string get_string(const std::string& key) const {
        auto raw = at(key);
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            return raw.substr(1, raw.size() - 2);
        }
        throw std::runtime_error("config key " + key + ": expected a quoted string");
    }

    double get_double(const std::string& key) const { return to_double(at(key), key); }

    std::uint64_t get_uint(const std::string& key) const { return to_uint(at(key), key); }

    std::vector<std::string> get_array(const std::string& key) const {
        auto raw = at(key);
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
            throw std::runtime_error("config key " + key + ": expected an array");
        }
        std::vector<std::string> items;
        std::string item;
        for (char ch : raw.substr(1, raw.size() - 2)) {
            if (ch == ',') {
                push_item(items, item);
            } else {
                item += ch;
            }
        }
        push_item(items, item);
        return items;
    }

    static double to_double(std::string raw, const std::string& key) {
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0') {
            throw std::runtime_error("config key " + key + ": bad number " + raw);
        }
        return v;
    }

    static std::uint64_t to_uint(std::string raw, const std::string& key) {
        if (raw.empty() || raw.find_first_not_of("0123456789") != std::string::npos) {
            throw std::runtime_error("config key " + key + ": bad nonnegative integer " + raw);
        }
        return std::stoull(raw);
    }

    static std::string unquote(std::string raw, const std::string& key) {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            return raw.substr(1, raw.size() - 2);
        }
        throw std::runtime_error("config key " + key + ": expected a quoted string");
    }

private:
    static void strip_comment(std::string& line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line.erase(i);
                return;
            }
        }
    }

    static void trim(std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        const auto end = s.find_last_not_of(" \t\r");
        s = begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    }

    static void push_item(std::vector<std::string>& items, std::string& item) {
        trim(item);
        if (!item.empty()) items.push_back(item);
        item.clear();
    }

    std::string at(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw std::runtime_error("config key missing: " + key);
        return it->second;
    }

    std::map<std::string, std::string> values_;
};

ModelKind parse_model_kind(const std::string& s) {
    if (s == "gaussian") return ModelKind::gaussian;
    if (s == "bernoulli") return ModelKind::bernoulli;
    throw std::runtime_error("unknown model_kind: " + s);
}

ThetaMode parse_theta_mode(const std::string& s) {
    if (s == "fixed_norm") return ThetaMode::fixed_norm;
    if (s == "prior") return ThetaMode::prior;
    throw std::runtime_error("unknown theta_mode: " + s);
}

ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "plain") return ClassifierKind::plain;
    if (s == "thresholded") return ClassifierKind::thresholded;
    throw std::runtime_error("unknown classifier kind: " + s);
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
    MiniToml toml(path);
    static const std::vector<std::string> known = {
        "model_kind", "d_list",      "noise_list",       "epsilon_list",
        "n_grid",     "trials",      "mc_trials",        "theta_mode",
        "classifier_kinds", "base_seed", "output_path"};
    for (const auto& key : toml.keys_seen()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::runtime_error("unknown config key: " + key);
        }
    }

    SweepConfig config;
    config.model_kind = parse_model_kind(toml.get_string("model_kind"));
    for (const auto& item : toml.get_array("d_list")) {
        config.d_list.push_back(MiniToml::to_uint(item, "d_list"));
    }
    config.noise_list.clear();
    for (const auto& item : toml.get_array("noise_list")) {
        config.noise_list.push_back(MiniToml::to_double(item, "noise_list"));
    }
    for (const auto& item : toml.get_array("epsilon_list")) {
        config.epsilon_list.push_back(MiniToml::to_double(item, "epsilon_list"));
    }
    if (toml.has("n_grid")) {
        for (const auto& item : toml.get_array("n_grid")) {
            config.n_grid.push_back(MiniToml::to_uint(item, "n_grid"));
        }
    }
    if (toml.has("trials")) config.trials = toml.get_uint("trials");
    if (toml.has("mc_trials")) config.mc_trials = toml.get_uint("mc_trials");
    if (toml.has("theta_mode")) config.theta_mode = parse_theta_mode(toml.get_string("theta_mode"));
    if (toml.has("classifier_kinds")) {
        config.classifier_kinds.clear();
        for (const auto& item : toml.get_array("classifier_kinds")) {
            config.classifier_kinds.push_back(
                parse_classifier_kind(MiniToml::unquote(item, "classifier_kinds")));
        }
    }
    if (toml.has("base_seed")) config.base_seed = toml.get_uint("base_seed");
    if (toml.has("output_path")) config.output_path = toml.get_string("output_path");
    config.validate();
    return config;
}

namespace {

double median_of(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double row_error(const SweepRecord& r, ErrorColumn column) {
    const double analytic = column == ErrorColumn::robust ? r.rob_err_analytic : r.std_err_analytic;
    const double mc = column == ErrorColumn::robust ? r.rob_err_mc : r.std_err_mc;
    return std::isfinite(analytic) ? analytic : mc;
}

}  // namespace

std::vector<MinNResult> find_min_n(const SweepConfig& config, double target_error,
                                   ErrorColumn column, int threads) {
    if (!(target_error >= 0.0) || !(target_error <= 1.0)) {
        throw std::invalid_argument("target error must lie in [0, 1]");
    }
    const auto rows = run_sweep(config, threads);
    const auto n_grid = config.effective_n_grid();
    const std::size_t num_noise = config.noise_list.size();
    const std::size_t num_eps = config.epsilon_list.size();
    const std::size_t num_n = n_grid.size();
    const std::size_t num_trials = config.trials;
    const std::size_t num_kinds = config.classifier_kinds.size();
    const auto row_index = [&](std::size_t di, std::size_t ni, std::size_t ei, std::size_t gi,
                               std::size_t ti, std::size_t ci) {
        return ((((di * num_noise + ni) * num_eps + ei) * num_n + gi) * num_trials + ti) *
                   num_kinds +
               ci;
    };

    std::vector<MinNResult> results;
    for (std::size_t di = 0; di < config.d_list.size(); ++di) {
        for (std::size_t ni = 0; ni < num_noise; ++ni) {
            for (std::size_t ei = 0; ei < num_eps; ++ei) {
                MinNResult res;
                res.d = config.d_list[di];
                res.noise = config.noise_list[ni];
                res.eps = config.epsilon_list[ei];
                for (std::size_t gi = 0; gi < num_n; ++gi) {
                    std::vector<double> per_trial;
                    for (std::size_t ti = 0; ti < num_trials; ++ti) {
                        // Best over classifier kinds for this row group.
                        double best = std::numeric_limits<double>::quiet_NaN();
                        for (std::size_t ci = 0; ci < num_kinds; ++ci) {
                            const double err =
                                row_error(rows[row_index(di, ni, ei, gi, ti, ci)], column);
                            if (std::isfinite(err) && !(best <= err)) best = err;
                        }
                        if (std::isfinite(best)) per_trial.push_back(best);
                    }
                    if (per_trial.empty()) continue;
                    if (median_of(per_trial) <= target_error) {
                        res.min_n = n_grid[gi];
                        break;
                    }
                }
                results.push_back(res);
            }
        }
    }
    return results;
}

ScalingFit scaling_fit(const std::vector<MinNResult>& results) {
    std::vector<double> xs, ys;
    for (const auto& r : results) {
        if (!r.min_n) continue;
        xs.push_back(std::log(static_cast<double>(r.d)));
        ys.push_back(std::log(static_cast<double>(*r.min_n)));
    }
    if (xs.size() < 4) {
        throw std::invalid_argument("scaling fit needs at least four resolved (d, min_n) points");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("degenerate d values in scaling fit");

    ScalingFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += resid * resid;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace robustlab
