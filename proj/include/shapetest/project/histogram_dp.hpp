#pragma once

// Approximate distance to t-histograms: a greedy eta-granular decomposition
// followed by a DP over its endpoints.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "../histogram.hpp"

namespace shapetest {

struct GranularDecomposition {
    Partition partition;
    std::vector<bool> heavy;  // singleton with mass > eta
    double eta = 0.0;

    std::size_t size() const { return partition.size(); }
};

namespace detail {

// Right ends (1-based) of the greedy packing: a point heavier than eta is
// its own piece; otherwise points are packed while the piece mass stays <= eta.
inline std::vector<std::size_t> granular_right_ends(const std::vector<double>& m, double eta) {
    std::vector<std::size_t> ends;
    std::size_t i = 0;
    while (i < m.size()) {
        std::size_t j = i;
        if (m[i] <= eta) {
            double mass = m[i];
            while (j + 1 < m.size() && m[j + 1] <= eta && mass + m[j + 1] <= eta) mass += m[++j];
        }
        ends.push_back(j + 1);
        i = j + 1;
    }
    return ends;
}

}  // namespace detail

inline GranularDecomposition granular_decomposition(const Histogram& h, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("granular_decomposition: eta must be in (0,1]");
    GranularDecomposition g;
    g.eta = eta;
    g.partition = Partition::from_right_ends(detail::granular_right_ends(h.masses(), eta));
    for (const auto& I : g.partition) g.heavy.push_back(I.size() == 1 && h(I.lo) > eta);
    return g;
}

namespace detail {

// sum_{x in [a,b]} |h(x) - h([a,b])/(b-a+1)|.
inline double flatten_cost(const Histogram& h, std::size_t a, std::size_t b) {
    const double mean = h.mass({a, b}) / static_cast<double>(b - a + 1);
    double c = 0.0;
    for (std::size_t x = a; x <= b; ++x) c += std::abs(h(x) - mean);
    return c;
}

// Minimum total segment cost over partitions into at most t segments whose
// ends are drawn from `ends` (sorted right ends, the last being n).
template <class Cost>
double segment_dp(const std::vector<std::size_t>& ends, int t, Cost&& cost) {
    const std::size_t E = ends.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    // ends_ext[0] = 0 denotes the empty prefix.
    std::vector<std::size_t> pos(E + 1, 0);
    for (std::size_t k = 0; k < E; ++k) pos[k + 1] = ends[k];
    std::vector<std::vector<double>> seg(E + 1, std::vector<double>(E + 1, inf));
    for (std::size_t a = 0; a < E; ++a)
        for (std::size_t b = a + 1; b <= E; ++b) seg[a][b] = cost(pos[a] + 1, pos[b]);
    std::vector<double> best(E + 1, inf), next(E + 1, inf);
    best[0] = 0.0;
    double answer = inf;
    for (int s = 1; s <= t; ++s) {
        std::fill(next.begin(), next.end(), inf);
        for (std::size_t b = 1; b <= E; ++b)
            for (std::size_t a = 0; a < b; ++a)
                if (best[a] < inf) next[b] = std::min(next[b], best[a] + seg[a][b]);
        best.swap(next);
        answer = std::min(answer, best[E]);
    }
    return answer;
}

}  // namespace detail

// Delta with OPT <= Delta <= 4 OPT + epsilon: the best flattening of h onto at
// most t intervals whose ends are granular endpoints, eta = epsilon/(4t).
inline double dist_to_histogram_t(const Histogram& h, int t, double epsilon) {
    if (t < 1) throw std::invalid_argument("dist_to_histogram_t: t must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("dist_to_histogram_t: epsilon must be positive");
    const double eta = std::min(1.0, epsilon / (4.0 * t));
    const auto g = granular_decomposition(h, eta);
    return detail::segment_dp(g.partition.right_ends(), t,
                              [&](std::size_t a, std::size_t b) { return detail::flatten_cost(h, a, b); });
}

}  // namespace shapetest
