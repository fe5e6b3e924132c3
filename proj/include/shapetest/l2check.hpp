#pragma once

// Check-Small-L2: is a distribution on I close to uniform in L2?
//
// Each round Poissonizes the sample, computes
//   Z = sum_k (X_k - m/|I|)^2 - X_k,
// whose mean is m^2 ||D - U||_2^2, and says yes iff Z < (3/4) m^2 eps^2 / |I|.
// The answer is the majority over ceil(18 ln(1/delta)) rounds.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sampling.hpp"

namespace shapetest {

struct L2CheckConfig {
    double epsilon = 0.5;
    double delta = 0.1;
    double c_stat = 10.0;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("l2check: epsilon must be in (0,1]");
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("l2check: delta must be in (0,1)");
        if (!(c_stat > 0.0)) throw std::invalid_argument("l2check: c_stat must be positive");
    }
    // Per-round expected sample count.
    double m(std::size_t size_I) const {
        return std::max(1.0, std::ceil(c_stat * std::sqrt(static_cast<double>(size_I)) / (epsilon * epsilon)));
    }
    std::size_t repetitions() const {
        return static_cast<std::size_t>(std::ceil(18.0 * std::log(1.0 / delta)));
    }
};

inline double z_statistic(const std::vector<std::uint64_t>& counts, double m, std::size_t n) {
    if (counts.size() != n) throw std::invalid_argument("z_statistic: counts length must equal n");
    const double mu = m / static_cast<double>(n);
    double z = 0.0;
    for (auto c : counts) {
        const double x = static_cast<double>(c);
        z += (x - mu) * (x - mu) - x;
    }
    return z;
}

inline double l2_threshold(double m, double epsilon, std::size_t n) {
    return 0.75 * m * m * epsilon * epsilon / static_cast<double>(n);
}

inline std::uint64_t required_samples_l2(std::size_t size_I, double epsilon, double delta,
                                         double c_stat = 10.0) {
    const L2CheckConfig cfg{epsilon, delta, c_stat};
    cfg.validate();
    return static_cast<std::uint64_t>(cfg.m(size_I)) * cfg.repetitions();
}

// Source-driven version: every round draws N ~ Poisson(m) fresh samples.
template <SampleSource S>
bool check_small_l2(S& src, std::size_t size_I, const L2CheckConfig& cfg, Engine& rng) {
    cfg.validate();
    if (src.n() != size_I) throw std::invalid_argument("check_small_l2: source domain differs from |I|");
    if (size_I == 1) return true;
    const double m = cfg.m(size_I);
    const std::size_t rounds = cfg.repetitions();
    const double tau = l2_threshold(m, cfg.epsilon, size_I);
    std::poisson_distribution<long long> pois(m);
    std::size_t yes = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        const auto N = static_cast<std::uint64_t>(pois(rng));
        const auto counts = src.draw_counts(N);
        if (z_statistic(counts, m, size_I) < tau) ++yes;
    }
    return 2 * yes > rounds;
}

// Fixed-multiset version used inside the recursive decomposition. The counts
// are first thinned by 1/2 and the survivors dealt uniformly into one group
// per round, so each round sees independent Poisson-like counts with mean
// m_I / (2 * rounds).
inline bool check_small_l2_counts(const std::vector<std::uint64_t>& counts, const L2CheckConfig& cfg,
                                  Engine& rng) {
    cfg.validate();
    const std::size_t size_I = counts.size();
    if (size_I <= 1) return true;
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const std::size_t rounds = cfg.repetitions();
    const double m_round = static_cast<double>(total) / (2.0 * static_cast<double>(rounds));
    if (m_round <= 0.0) return true;
    const double tau = l2_threshold(m_round, cfg.epsilon, size_I);

    std::vector<std::vector<std::uint64_t>> groups(rounds, std::vector<std::uint64_t>(size_I, 0));
    for (std::size_t k = 0; k < size_I; ++k) {
        if (counts[k] == 0) continue;
        std::binomial_distribution<long long> half(static_cast<long long>(counts[k]), 0.5);
        auto left = static_cast<std::uint64_t>(half(rng));
        for (std::size_t g = 0; g < rounds && left > 0; ++g) {
            const std::size_t remaining = rounds - g;
            std::uint64_t take = left;
            if (remaining > 1) {
                std::binomial_distribution<long long> bin(static_cast<long long>(left),
                                                          1.0 / static_cast<double>(remaining));
                take = static_cast<std::uint64_t>(bin(rng));
            }
            groups[g][k] = take;
            left -= take;
        }
    }
    std::size_t yes = 0;
    for (const auto& g : groups)
        if (z_statistic(g, m_round, size_I) < tau) ++yes;
    return 2 * yes > rounds;
}

}  // namespace shapetest
