#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "robustlab/sweep.hpp"

using namespace robustlab;

namespace {

SweepConfig small_gaussian_config() {
    SweepConfig config;
    config.model_kind = ModelKind::gaussian;
    config.d_list = {16};
    config.noise_list = {1.0};
    config.epsilon_list = {0.0};
    config.n_grid = {1};
    config.trials = 3;
    config.mc_trials = 2000;
    config.base_seed = 7;
    return config;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents)
        : path("robustlab_test_" + name) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config validation") {
    SweepConfig config = small_gaussian_config();
    config.d_list.clear();
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_gaussian_config();
    config.n_grid = {4, 2};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_gaussian_config();
    config.model_kind = ModelKind::bernoulli;
    config.noise_list = {0.6};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_gaussian_config();
    config.n_grid.clear();
    CHECK(config.effective_n_grid().front() == 1);
    CHECK(config.effective_n_grid().back() == 16384);
}

TEST_CASE("zero budget rows collapse robust onto standard") {
    auto config = small_gaussian_config();
    const auto rows = run_sweep(config);
    CHECK(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.rob_err_mc == r.std_err_mc);
        CHECK(r.rob_err_analytic == r.std_err_analytic);
        CHECK(r.eps == 0.0);
        CHECK(r.n == 1);
    }
}

TEST_CASE("thresholded bernoulli rows ignore sub-unit budgets") {
    SweepConfig config;
    config.model_kind = ModelKind::bernoulli;
    config.d_list = {24};
    config.noise_list = {0.2};
    config.epsilon_list = {0.5};
    config.n_grid = {1, 4};
    config.trials = 3;
    config.mc_trials = 1500;
    config.theta_mode = ThetaMode::prior;
    config.classifier_kinds = {ClassifierKind::thresholded};
    config.base_seed = 11;
    const auto rows = run_sweep(config);
    CHECK(rows.size() == 2 * 3);
    for (const auto& r : rows) {
        CHECK(r.rob_err_mc == r.std_err_mc);
    }
}

TEST_CASE("sweep output is deterministic and thread-count independent") {
    auto config = small_gaussian_config();
    config.epsilon_list = {0.0, 0.25};
    config.n_grid = {1, 2};
    config.classifier_kinds = {ClassifierKind::plain, ClassifierKind::thresholded};

    auto csv_of = [&](int threads) {
        std::ostringstream out;
        write_sweep_csv(out, run_sweep(config, threads));
        return out.str();
    };
    const auto a = csv_of(1);
    CHECK(a == csv_of(1));
    CHECK(a == csv_of(4));
}

TEST_CASE("csv lines round trip bit-identically") {
    auto config = small_gaussian_config();
    config.classifier_kinds = {ClassifierKind::plain, ClassifierKind::thresholded};
    config.epsilon_list = {0.0, 0.1};
    const auto rows = run_sweep(config);
    for (const auto& r : rows) {
        const auto line = to_csv_line(r);
        const auto parsed = parse_csv_line(line);
        CHECK(to_csv_line(parsed) == line);
    }

    // thresholded gaussian rows carry NaN analytic columns and still round trip
    const bool has_nan = std::any_of(rows.begin(), rows.end(), [](const SweepRecord& r) {
        return std::isnan(r.rob_err_analytic);
    });
    CHECK(has_nan);

    std::ostringstream out;
    write_sweep_csv(out, rows);
    std::istringstream in(out.str());
    const auto back = read_sweep_csv(in);
    REQUIRE(back.size() == rows.size());
    std::ostringstream out2;
    write_sweep_csv(out2, back);
    CHECK(out.str() == out2.str());
}

TEST_CASE("csv parser rejects malformed lines") {
    CHECK_THROWS_AS(parse_csv_line("gaussian,1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv_line("gaussian,x,1,0,1,0,plain,0,0,0,0,0,0,1"),
                    std::invalid_argument);
}

TEST_CASE("find_min_n on a calibrated gaussian slice") {
    SweepConfig config;
    config.model_kind = ModelKind::gaussian;
    config.d_list = {10000};
    config.noise_list = {0.3125};
    config.epsilon_list = {0.1, 0.025};
    config.n_grid = {1, 2, 4, 8, 16, 32, 64};
    config.trials = 5;
    config.mc_trials = 0;  // analytic errors only
    config.base_seed = 3;

    const auto robust = find_min_n(config, 0.01, ErrorColumn::robust);
    REQUIRE(robust.size() == 2);
    REQUIRE(robust[0].min_n.has_value());
    CHECK(*robust[0].min_n <= 64);  // eps = 0.1
    REQUIRE(robust[1].min_n.has_value());
    CHECK(*robust[1].min_n == 1);  // eps = 0.025

    SUBCASE("looser targets never need more samples") {
        const auto loose = find_min_n(config, 0.5, ErrorColumn::robust);
        for (std::size_t i = 0; i < robust.size(); ++i) {
            REQUIRE(loose[i].min_n.has_value());
            CHECK(*loose[i].min_n <= *robust[i].min_n);
        }
    }
}

TEST_CASE("monte carlo sweep columns agree with the calibrated regime") {
    // High-dimensional low-noise slice: the learned classifier is robust at
    // eps = 0.1 with n = 64 samples, and the Monte Carlo column sees it.
    SweepConfig config;
    config.model_kind = ModelKind::gaussian;
    config.d_list = {10000};
    config.noise_list = {0.3125};
    config.epsilon_list = {0.1};
    config.n_grid = {64};
    config.trials = 3;
    config.mc_trials = 1000;
    config.base_seed = 17;
    const auto rows = run_sweep(config);
    std::vector<double> mc;
    for (const auto& r : rows) mc.push_back(r.rob_err_mc);
    std::sort(mc.begin(), mc.end());
    CHECK(mc[rows.size() / 2] <= 0.01);
}

TEST_CASE("find_min_n reports unreachable targets") {
    SweepConfig config;
    config.model_kind = ModelKind::gaussian;
    config.d_list = {4};
    config.noise_list = {8.0};  // far too noisy for the tiny grid
    config.epsilon_list = {0.25};
    config.n_grid = {1, 2};
    config.trials = 3;
    config.mc_trials = 0;
    config.base_seed = 5;
    const auto res = find_min_n(config, 1e-6, ErrorColumn::robust);
    CHECK_FALSE(res[0].min_n.has_value());
}

TEST_CASE("scaling fit recovers synthetic power laws") {
    std::vector<MinNResult> results;
    for (std::size_t d : {16u, 64u, 256u, 1024u}) {
        MinNResult r;
        r.d = d;
        r.min_n = static_cast<std::uint64_t>(std::llround(std::sqrt(double(d))));
        results.push_back(r);
    }
    const auto fit = scaling_fit(results);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.residual < 1e-6);

    for (auto& r : results) r.min_n = 7;
    const auto flat = scaling_fit(results);
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));

    results.resize(3);
    CHECK_THROWS_AS(scaling_fit(results), std::invalid_argument);

    std::vector<MinNResult> unresolved(6);
    for (auto& r : unresolved) r.d = 8;  // min_n left empty
    CHECK_THROWS_AS(scaling_fit(unresolved), std::invalid_argument);
}

TEST_CASE("toml config loading") {
    const std::string text = R"(# sweep configuration
model_kind = "bernoulli"
d_list = [8, 16]          # dimensions
noise_list = [0.1, 0.25]
epsilon_list = [0.0, 0.3]
n_grid = [1, 2, 4]
trials = 6
mc_trials = 500
theta_mode = "prior"
classifier_kinds = ["plain", "thresholded"]
base_seed = 99
output_path = "rows.csv"
)";
    const TempFile file("config.toml", text);
    const auto config = load_sweep_config(file.path);
    CHECK(config.model_kind == ModelKind::bernoulli);
    CHECK(config.d_list == std::vector<std::size_t>{8, 16});
    CHECK(config.noise_list == std::vector<double>{0.1, 0.25});
    CHECK(config.epsilon_list == std::vector<double>{0.0, 0.3});
    CHECK(config.n_grid == std::vector<std::uint64_t>{1, 2, 4});
    CHECK(config.trials == 6);
    CHECK(config.mc_trials == 500);
    CHECK(config.theta_mode == ThetaMode::prior);
    CHECK(config.classifier_kinds ==
          std::vector<ClassifierKind>{ClassifierKind::plain, ClassifierKind::thresholded});
    CHECK(config.base_seed == 99);
    CHECK(config.output_path == "rows.csv");

    const TempFile bad("bad.toml", "model_kind = \"gaussian\"\nunknown_key = 3\n");
    CHECK_THROWS(load_sweep_config(bad.path));
    CHECK_THROWS_AS(load_sweep_config("does_not_exist.toml"), std::ios_base::failure);
}

TEST_CASE("rows carry distinct stream keys") {
    auto config = small_gaussian_config();
    config.epsilon_list = {0.0, 0.1};
    config.n_grid = {1, 2};
    const auto rows = run_sweep(config);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            CHECK(rows[i].seed != rows[j].seed);
        }
    }
}
