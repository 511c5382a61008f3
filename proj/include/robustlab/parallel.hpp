#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

namespace robustlab::par {

// Trial loops come in two flavors: a serial reference implementation and an
// OpenMP kernel. Both must produce identical results because every trial
// draws from its own random stream and results reduce by exact integer (or
// order-fixed floating) sums. Tests compare the two paths; the benchmark
// target compares their throughput.
//
// threads == 1 selects the serial reference, threads <= 0 the OpenMP
// default team, threads > 1 an explicit team size.

template <typename Fn>
std::uint64_t count_hits_serial(std::uint64_t trials, Fn&& hit) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (hit(t)) ++hits;
    }
    return hits;
}

template <typename Fn>
std::uint64_t count_hits_omp(std::uint64_t trials, Fn&& hit, int threads) {
    const int team = threads > 0 ? threads : omp_get_max_threads();
    const long long n = static_cast<long long>(trials);
    std::uint64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) num_threads(team) schedule(static)
    for (long long t = 0; t < n; ++t) {
        if (hit(static_cast<std::uint64_t>(t))) ++hits;
    }
    return hits;
}

template <typename Fn>
std::uint64_t count_hits(std::uint64_t trials, Fn&& hit, int threads) {
    if (threads == 1) return count_hits_serial(trials, hit);
    return count_hits_omp(trials, hit, threads);
}

/// Fills out[i] = f(i) for i in [0, n). The output slot is fixed per index,
/// so the fill order cannot affect the result.
template <typename Fn>
void fill_serial(std::size_t n, std::vector<double>& out, Fn&& f) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
}

template <typename Fn>
void fill_omp(std::size_t n, std::vector<double>& out, Fn&& f, int threads) {
    out.resize(n);
    const int team = threads > 0 ? threads : omp_get_max_threads();
    const long long m = static_cast<long long>(n);
#pragma omp parallel for num_threads(team) schedule(static)
    for (long long i = 0; i < m; ++i) {
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    }
}

template <typename Fn>
void fill(std::size_t n, std::vector<double>& out, Fn&& f, int threads) {
    if (threads == 1) {
        fill_serial(n, out, f);
    } else {
        fill_omp(n, out, f, threads);
    }
}

}  // namespace robustlab::par
