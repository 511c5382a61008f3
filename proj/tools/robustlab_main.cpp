// Command-line front end: data generation, training, evaluation, attacks,
// bound lookups, parameter sweeps and the verification suite.
//
// Exit codes: 0 success, 1 verification-check failure, 2 usage error,
// 3 I/O error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "robustlab/analytic.hpp"
#include "robustlab/attacks.hpp"
#include "robustlab/classifiers.hpp"
#include "robustlab/distributions.hpp"
#include "robustlab/estimation.hpp"
#include "robustlab/sweep.hpp"
#include "robustlab/verify.hpp"

namespace {

using nlohmann::json;
using namespace robustlab;

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    std::string format = "csv";
    std::string config;
};

class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    if (values.empty()) throw std::invalid_argument("empty vector argument");
    return values;
}

ModelParams make_model(const std::string& model, std::size_t d, double sigma, double tau,
                       const std::string& theta_mode, RngSeed seed) {
    std::vector<double> theta;
    const ModelKind kind = model == "gaussian" ? ModelKind::gaussian : ModelKind::bernoulli;
    if (theta_mode == "ones") {
        theta.assign(d, 1.0);
    } else if (theta_mode == "prior") {
        theta = draw_prior_theta(kind, d, seed);
    } else {
        throw std::invalid_argument("unknown theta mode: " + theta_mode);
    }
    if (kind == ModelKind::gaussian) return GaussianModelParams(std::move(theta), sigma);
    return BernoulliModelParams(std::move(theta), tau);
}

json estimate_to_json(const ErrorEstimate& est) {
    return json{{"p_hat", est.p_hat},
                {"trials", est.trials},
                {"std_err", est.std_err},
                {"ci95", {est.ci_low, est.ci_high}},
                {"estimator", est.lower_bound_only ? "lower-bound" : "exact"}};
}

json attack_result_to_json(const AttackResult& result) {
    return json{{"x_prime", result.x_prime},
                {"worst_margin", result.worst_margin},
                {"misclassified", result.misclassified}};
}

void write_dataset(std::ostream& out, const Dataset& data, const std::string& format) {
    if (format == "json") {
        json j = json::array();
        for (const auto& s : data) j.push_back({{"y", s.y}, {"x", s.x}});
        out << j.dump() << '\n';
        return;
    }
    out << "# robustlab dataset v1\n";
    for (const auto& s : data) {
        out << s.y;
        for (double v : s.x) out << ',' << format_double(v);
        out << '\n';
    }
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open dataset: " + path);
    Dataset data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::stringstream ss(line);
        std::string item;
        LabeledSample s;
        bool first = true;
        while (std::getline(ss, item, ',')) {
            if (first) {
                s.y = std::stoi(item);
                first = false;
            } else {
                s.x.push_back(std::stod(item));
            }
        }
        if (s.y != 1 && s.y != -1) throw std::invalid_argument("labels must be +/-1");
        data.push_back(std::move(s));
    }
    if (data.empty()) throw std::invalid_argument("dataset is empty: " + path);
    return data;
}

LinearClassifier read_classifier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open classifier: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return classifier_from_json(buf.str());
}

NormKind parse_norm(const std::string& name) {
    if (name == "linf") return NormKind::linf;
    if (name == "l2") return NormKind::l2;
    throw std::invalid_argument("unknown norm: " + name);
}

int run_sample(const GlobalOpts& g, const std::string& model, std::size_t d, double sigma,
               double tau, const std::string& theta_mode, std::size_t n) {
    const auto params = make_model(model, d, sigma, tau, theta_mode, RngSeed{g.seed, 1});
    const auto data = sample_dataset(params, n, RngSeed{g.seed, 0});
    OutputStream out(g.out);
    write_dataset(out.get(), data, g.format);
    return 0;
}

int run_train(const GlobalOpts& g, const std::string& input, bool no_normalize,
              const std::string& preprocess) {
    const auto data = read_dataset(input);
    const auto clf = learn_weighted_mean(
        data, !no_normalize,
        preprocess == "threshold" ? Preprocess::threshold : Preprocess::identity);
    OutputStream out(g.out);
    out.get() << classifier_to_json(clf) << '\n';
    return 0;
}

AttackSpec make_attack_spec(const std::string& kind, const std::string& delta_text,
                            int pgd_steps, double pgd_step_size, bool pgd_no_random_init,
                            const std::string& pgd_loss) {
    AttackSpec spec;
    if (kind == "optimal") {
        spec.kind = AttackKind::optimal;
    } else if (kind == "pgd") {
        spec.kind = AttackKind::pgd;
    } else if (kind == "universal") {
        spec.kind = AttackKind::universal;
        if (delta_text.empty()) throw std::invalid_argument("universal attack needs --delta");
        spec.universal_delta = parse_vector(delta_text);
    } else if (kind == "threshold") {
        spec.kind = AttackKind::threshold_exact;
    } else {
        throw std::invalid_argument("unknown attack kind: " + kind);
    }
    spec.pgd.steps = pgd_steps;
    spec.pgd.step_size = pgd_step_size;
    spec.pgd.random_init = !pgd_no_random_init;
    spec.pgd.loss = pgd_loss == "neg_margin" ? LossKind::neg_margin : LossKind::logistic;
    return spec;
}

int run_eval(const GlobalOpts& g, const std::string& classifier_path, const std::string& model,
             double sigma, double tau, const std::string& theta_mode, double eps,
             const std::string& norm, const std::string& attack_kind,
             const std::string& delta_text, std::size_t trials) {
    const auto clf = read_classifier(classifier_path);
    const auto params =
        make_model(model, clf.dim(), sigma, tau, theta_mode, RngSeed{g.seed, 1});
    const PerturbationBudget budget{eps, parse_norm(norm)};

    json result;
    const auto std_est =
        mc_standard_error(clf, params, trials, RngSeed{g.seed, 2}, g.threads);
    result["standard_mc"] = estimate_to_json(std_est);
    if (attack_kind != "none") {
        const auto attack =
            make_attack_spec(attack_kind, delta_text, 20, 0.0, false, "logistic");
        const auto rob_est =
            mc_robust_error(clf, params, budget, attack, trials, RngSeed{g.seed, 2}, g.threads);
        result["robust_mc"] = estimate_to_json(rob_est);
    }
    if (const auto* gp = std::get_if<GaussianModelParams>(&params)) {
        if (clf.preprocess() == Preprocess::identity) {
            result["standard_analytic"] = gaussian_standard_error(clf.weights(), *gp);
            result["robust_analytic"] = gaussian_robust_error(clf.weights(), *gp, budget);
        }
    } else if (budget.norm_kind == NormKind::linf && clf.preprocess() == Preprocess::identity) {
        const auto& bp = std::get<BernoulliModelParams>(params);
        try {
            result["standard_analytic"] =
                bernoulli_error_exact(clf.weights(), bp, PerturbationBudget{0.0, NormKind::linf});
            result["robust_analytic"] = bernoulli_error_exact(clf.weights(), bp, budget);
        } catch (const std::invalid_argument&) {
            // no exact path for this weight pattern; report MC only
        }
    }
    OutputStream out(g.out);
    out.get() << result.dump() << '\n';
    return 0;
}

int run_attack(const GlobalOpts& g, const std::string& classifier_path, const std::string& x_text,
               int y, double eps, const std::string& norm, const std::string& attack_kind,
               const std::string& delta_text, int pgd_steps, double pgd_step_size,
               bool pgd_no_random_init, const std::string& pgd_loss) {
    const auto clf = read_classifier(classifier_path);
    const LabeledSample sample{parse_vector(x_text), y};
    const PerturbationBudget budget{eps, parse_norm(norm)};

    AttackResult result;
    if (attack_kind == "optimal") {
        result = optimal_linear_attack(clf, sample, budget);
    } else if (attack_kind == "threshold") {
        result = optimal_threshold_attack(clf, sample, budget);
    } else if (attack_kind == "pgd") {
        PgdOptions options;
        options.steps = pgd_steps;
        options.step_size = pgd_step_size;
        options.random_init = !pgd_no_random_init;
        options.loss = pgd_loss == "neg_margin" ? LossKind::neg_margin : LossKind::logistic;
        result = pgd_attack(clf, sample, budget, options, RngSeed{g.seed, 0});
    } else if (attack_kind == "universal") {
        if (delta_text.empty()) throw std::invalid_argument("universal attack needs --delta");
        result = apply_universal(clf, sample, parse_vector(delta_text));
    } else {
        throw std::invalid_argument("unknown attack kind: " + attack_kind);
    }
    OutputStream out(g.out);
    out.get() << attack_result_to_json(result).dump() << '\n';
    return 0;
}

int run_bounds(const GlobalOpts& g, const std::string& name,
               const std::vector<std::string>& param_args, bool list) {
    OutputStream out(g.out);
    if (list) {
        out.get() << json(bound_names()).dump() << '\n';
        return 0;
    }
    std::map<std::string, double> params;
    for (const auto& kv : param_args) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected --param key=value, got: " + kv);
        }
        params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    const auto spec = evaluate_bound(name, params);
    json j{{"name", spec.name}, {"params", spec.params}, {"value", spec.value}};
    if (spec.failure_prob) {
        j["failure_prob"] = *spec.failure_prob;
    } else {
        j["failure_prob"] = "n/a";
    }
    out.get() << j.dump() << '\n';
    return 0;
}

json record_to_json(const SweepRecord& r) {
    return json{{"model", r.model},
                {"d", r.d},
                {"noise", r.noise},
                {"eps", r.eps},
                {"n", r.n},
                {"trial", r.trial},
                {"classifier", r.classifier},
                {"std_err_analytic", r.std_err_analytic},
                {"std_err_mc", r.std_err_mc},
                {"rob_err_analytic", r.rob_err_analytic},
                {"rob_err_mc", r.rob_err_mc},
                {"ci_low", r.ci_low},
                {"ci_high", r.ci_high},
                {"seed", r.seed}};
}

int run_sweep_cmd(const GlobalOpts& g) {
    if (g.config.empty()) throw std::invalid_argument("sweep requires --config");
    auto config = load_sweep_config(g.config);
    if (g.seed != 0) config.base_seed = g.seed;
    const auto records = run_sweep(config, g.threads);
    const std::string out_path = !g.out.empty() ? g.out : config.output_path;
    OutputStream out(out_path);
    if (g.format == "json") {
        json j = json::array();
        for (const auto& r : records) j.push_back(record_to_json(r));
        out.get() << j.dump() << '\n';
    } else {
        write_sweep_csv(out.get(), records);
    }
    return 0;
}

int run_find_min_n(const GlobalOpts& g, double target, const std::string& column, bool fit) {
    if (g.config.empty()) throw std::invalid_argument("find-min-n requires --config");
    auto config = load_sweep_config(g.config);
    if (g.seed != 0) config.base_seed = g.seed;
    const auto col = column == "standard" ? ErrorColumn::standard : ErrorColumn::robust;
    const auto results = find_min_n(config, target, col, g.threads);

    OutputStream out(g.out);
    if (g.format == "json") {
        json j;
        j["results"] = json::array();
        for (const auto& r : results) {
            json item{{"d", r.d}, {"noise", r.noise}, {"eps", r.eps}};
            if (r.min_n) {
                item["min_n"] = *r.min_n;
            } else {
                item["min_n"] = "not reached";
            }
            j["results"].push_back(item);
        }
        if (fit) {
            const auto f = scaling_fit(results);
            j["fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
        }
        out.get() << j.dump() << '\n';
    } else {
        out.get() << "d,noise,eps,min_n\n";
        for (const auto& r : results) {
            out.get() << r.d << ',' << format_double(r.noise) << ',' << format_double(r.eps)
                      << ',' << (r.min_n ? std::to_string(*r.min_n) : std::string("not_reached"))
                      << '\n';
        }
        if (fit) {
            const auto f = scaling_fit(results);
            out.get() << "# fit slope=" << format_double(f.slope)
                      << " intercept=" << format_double(f.intercept)
                      << " residual=" << format_double(f.residual) << '\n';
        }
    }
    return 0;
}

int run_verify_cmd(const GlobalOpts& g, const std::string& selection) {
    const auto reports = run_verify(selection, g.seed, g.threads);
    OutputStream out(g.out);
    bool all_pass = true;
    if (g.format == "json") {
        json j = json::array();
        for (const auto& r : reports) {
            j.push_back({{"check", r.check},
                         {"pass", r.pass},
                         {"observed", r.observed},
                         {"bound", r.bound},
                         {"tolerance", r.tolerance},
                         {"detail", r.detail}});
            all_pass = all_pass && r.pass;
        }
        out.get() << j.dump() << '\n';
    } else {
        for (const auto& r : reports) {
            out.get() << format_report(r) << '\n';
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation lab for standard vs adversarially robust generalization"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Base seed for every random stream");
    app.add_option("--threads", g.threads, "Worker threads (1 = serial reference, 0 = default)");
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", g.config, "TOML sweep configuration file");

    // sample
    auto* sample = app.add_subcommand("sample", "Draw labeled samples from a model");
    std::string model = "gaussian", theta_mode = "ones";
    std::size_t dim = 10, count = 10;
    double sigma = 1.0, tau = 0.25;
    sample->add_option("--model", model)->check(CLI::IsMember({"gaussian", "bernoulli"}));
    sample->add_option("--d", dim, "Dimension");
    sample->add_option("--sigma", sigma, "Gaussian noise level");
    sample->add_option("--tau", tau, "Bernoulli bias");
    sample->add_option("--theta", theta_mode)->check(CLI::IsMember({"ones", "prior"}));
    sample->add_option("--n", count, "Number of samples");

    // train
    auto* train = app.add_subcommand("train", "Fit the class-weighted mean classifier");
    std::string train_in, train_pre = "identity";
    bool no_normalize = false;
    train->add_option("--in", train_in, "Input dataset (csv)")->required();
    train->add_flag("--no-normalize", no_normalize, "Keep the raw mean vector");
    train->add_option("--preprocess", train_pre)->check(CLI::IsMember({"identity", "threshold"}));

    // eval
    auto* eval = app.add_subcommand("eval", "Estimate standard and robust error");
    std::string eval_clf, eval_attack = "optimal", eval_norm = "linf", eval_delta;
    double eval_eps = 0.1;
    std::size_t eval_trials = 100000;
    eval->add_option("--classifier", eval_clf, "Classifier json file")->required();
    eval->add_option("--model", model)->check(CLI::IsMember({"gaussian", "bernoulli"}));
    eval->add_option("--sigma", sigma);
    eval->add_option("--tau", tau);
    eval->add_option("--theta", theta_mode)->check(CLI::IsMember({"ones", "prior"}));
    eval->add_option("--eps", eval_eps);
    eval->add_option("--norm", eval_norm)->check(CLI::IsMember({"linf", "l2"}));
    eval->add_option("--attack", eval_attack)
        ->check(CLI::IsMember({"optimal", "pgd", "universal", "threshold", "none"}));
    eval->add_option("--delta", eval_delta, "Universal perturbation (comma separated)");
    eval->add_option("--trials", eval_trials);

    // attack
    auto* attack = app.add_subcommand("attack", "Attack one labeled point");
    std::string atk_clf, atk_x, atk_kind = "optimal", atk_norm = "linf", atk_delta;
    std::string atk_loss = "logistic";
    int atk_y = 1, atk_steps = 20;
    double atk_eps = 0.1, atk_step_size = 0.0;
    bool atk_no_random_init = false;
    attack->add_option("--classifier", atk_clf)->required();
    attack->add_option("--x", atk_x, "Point (comma separated)")->required();
    attack->add_option("--y", atk_y)->check(CLI::IsMember({-1, 1}));
    attack->add_option("--eps", atk_eps);
    attack->add_option("--norm", atk_norm)->check(CLI::IsMember({"linf", "l2"}));
    attack->add_option("--attack", atk_kind)
        ->check(CLI::IsMember({"optimal", "pgd", "universal", "threshold"}));
    attack->add_option("--delta", atk_delta);
    attack->add_option("--pgd-steps", atk_steps);
    attack->add_option("--pgd-step-size", atk_step_size, "0 selects 2.5*eps/steps");
    attack->add_flag("--pgd-no-random-init", atk_no_random_init);
    attack->add_option("--pgd-loss", atk_loss)->check(CLI::IsMember({"logistic", "neg_margin"}));

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Evaluate a named bound as json");
    std::string bound_name;
    std::vector<std::string> bound_params;
    bool bound_list = false;
    bounds->add_option("--name", bound_name);
    bounds->add_option("--param", bound_params, "key=value (repeatable)");
    bounds->add_flag("--list", bound_list, "List known bound names");

    // sweep
    app.add_subcommand("sweep", "Run the sweep described by --config");

    // find-min-n
    auto* minn = app.add_subcommand("find-min-n", "Smallest n reaching a target error");
    double target = 0.01;
    std::string column = "robust";
    bool fit = false;
    minn->add_option("--target", target, "Target error");
    minn->add_option("--column", column)->check(CLI::IsMember({"robust", "standard"}));
    minn->add_flag("--fit", fit, "Append a log-log scaling fit");

    // verify
    auto* verify = app.add_subcommand("verify", "Run verification checks");
    std::string selection = "all";
    verify->add_option("selection", selection, "Suite or check name");

    try {
        app.parse(argc, argv);
        if (sample->parsed()) return run_sample(g, model, dim, sigma, tau, theta_mode, count);
        if (train->parsed()) return run_train(g, train_in, no_normalize, train_pre);
        if (eval->parsed()) {
            return run_eval(g, eval_clf, model, sigma, tau, theta_mode, eval_eps, eval_norm,
                            eval_attack, eval_delta, eval_trials);
        }
        if (attack->parsed()) {
            return run_attack(g, atk_clf, atk_x, atk_y, atk_eps, atk_norm, atk_kind, atk_delta,
                              atk_steps, atk_step_size, atk_no_random_init, atk_loss);
        }
        if (bounds->parsed()) return run_bounds(g, bound_name, bound_params, bound_list);
        if (app.get_subcommand("sweep")->parsed()) return run_sweep_cmd(g);
        if (minn->parsed()) return run_find_min_n(g, target, column, fit);
        if (verify->parsed()) return run_verify_cmd(g, selection);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
