// Compares the serial reference kernels against their OpenMP counterparts
// on representative estimator workloads.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "robustlab/classifiers.hpp"
#include "robustlab/distributions.hpp"
#include "robustlab/estimation.hpp"

using namespace robustlab;

namespace {

double time_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());

    {
        const std::size_t d = 256;
        const GaussianModelParams model(std::vector<double>(d, 1.0), 2.0);
        const LinearClassifier clf(std::vector<double>(d, 1.0 / 16.0));
        const PerturbationBudget budget{0.1, NormKind::linf};
        const std::uint64_t trials = 400000;
        double p_serial = 0.0, p_parallel = 0.0;
        const double ts = time_seconds([&] {
            p_serial = mc_robust_error(clf, model, budget, AttackSpec{}, trials, RngSeed{1, 0}, 1)
                           .p_hat;
        });
        const double tp = time_seconds([&] {
            p_parallel =
                mc_robust_error(clf, model, budget, AttackSpec{}, trials, RngSeed{1, 0}, 0).p_hat;
        });
        report("mc_robust_error (optimal)", ts, tp);
        if (p_serial != p_parallel) {
            std::printf("MISMATCH: serial %.17g vs parallel %.17g\n", p_serial, p_parallel);
            return 1;
        }
    }

    {
        const std::size_t d = 200;
        AttackSpec attack;
        attack.kind = AttackKind::pgd;
        const GaussianModelParams model(std::vector<double>(d, 1.0), 4.0);
        const LinearClassifier clf(std::vector<double>(d, 1.0));
        const PerturbationBudget budget{0.2, NormKind::linf};
        const std::uint64_t trials = 20000;
        double p_serial = 0.0, p_parallel = 0.0;
        const double ts = time_seconds([&] {
            p_serial =
                mc_robust_error(clf, model, budget, attack, trials, RngSeed{2, 0}, 1).p_hat;
        });
        const double tp = time_seconds([&] {
            p_parallel =
                mc_robust_error(clf, model, budget, attack, trials, RngSeed{2, 0}, 0).p_hat;
        });
        report("mc_robust_error (pgd)", ts, tp);
        if (p_serial != p_parallel) {
            std::printf("MISMATCH: serial %.17g vs parallel %.17g\n", p_serial, p_parallel);
            return 1;
        }
    }

    {
        const auto learner = [](const Dataset& data) { return learn_weighted_mean(data); };
        double p_serial = 0.0, p_parallel = 0.0;
        const double ts = time_seconds([&] {
            p_serial = expected_robust_error_lower_experiment(learner, 8, 64, 4.0, 1.5, 400, 200,
                                                              RngSeed{3, 0}, 1)
                           .estimate.p_hat;
        });
        const double tp = time_seconds([&] {
            p_parallel = expected_robust_error_lower_experiment(learner, 8, 64, 4.0, 1.5, 400,
                                                                200, RngSeed{3, 0}, 0)
                             .estimate.p_hat;
        });
        report("lower-bound experiment", ts, tp);
        if (p_serial != p_parallel) {
            std::printf("MISMATCH: serial %.17g vs parallel %.17g\n", p_serial, p_parallel);
            return 1;
        }
    }

    std::printf("serial and parallel kernels agree on every workload\n");
    return 0;
}
