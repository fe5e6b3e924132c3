#pragma once

// Random fixtures shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "shapetest/histogram.hpp"
#include "shapetest/sampling.hpp"

namespace shapetest::testing {

inline Histogram random_pmf(std::size_t n, Engine& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    for (auto& x : w) x = e(rng);
    return Histogram::from_weights(std::move(w));
}

// Masses on a grid of `units` steps, drawn uniformly over compositions.
inline Histogram random_grid_pmf(std::size_t n, int units, Engine& rng) {
    std::vector<int> cuts(n - 1);
    std::uniform_int_distribution<int> u(0, units);
    for (auto& c : cuts) c = u(rng);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> m(n);
    int prev = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m[i] = static_cast<double>(cuts[i] - prev) / units;
        prev = cuts[i];
    }
    m[n - 1] = static_cast<double>(units - prev) / units;
    return Histogram(std::move(m));
}

inline Histogram random_monotone(std::size_t n, Engine& rng) {
    std::vector<double> w = random_pmf(n, rng).masses();
    std::sort(w.begin(), w.end(), std::greater<>());
    return Histogram(std::move(w));
}

// exp of a random concave sequence.
inline Histogram random_logconcave(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> steps(n);
    for (auto& s : steps) s = 4.0 * (u(rng) - 0.5);
    std::sort(steps.begin(), steps.end(), std::greater<>());
    std::vector<double> w(n);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(x);
        x += steps[i];
    }
    return Histogram::from_weights(std::move(w));
}

// Masses with non-increasing increments, clipped at zero on the ends only.
inline Histogram random_concave(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        std::vector<double> inc(n);
        for (auto& s : inc) s = u(rng) - 0.5;
        std::sort(inc.begin(), inc.end(), std::greater<>());
        std::vector<double> w(n);
        double x = 1.0 + u(rng);
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = x;
            ok = ok && x > 0.0;
            x += inc[i];
        }
        if (ok) return Histogram::from_weights(std::move(w));
    }
}

// Non-increasing hazard complement gives an MHR pmf: h_i non-decreasing.
inline Histogram random_mhr(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> h(n);
    for (auto& x : h) x = 0.2 * u(rng);
    std::sort(h.begin(), h.end());
    h[n - 1] = 1.0;
    std::vector<double> w(n);
    double surv = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = surv * h[i];
        surv *= 1.0 - h[i];
    }
    return Histogram::from_weights(std::move(w));
}

inline Partition random_partition(std::size_t n, std::size_t pieces, Engine& rng) {
    std::vector<std::size_t> all(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) all[i] = i + 1;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> ends(all.begin(), all.begin() + static_cast<long>(std::min(pieces, n) - 1));
    ends.push_back(n);
    std::sort(ends.begin(), ends.end());
    return Partition::from_right_ends(ends);
}

}  // namespace shapetest::testing
