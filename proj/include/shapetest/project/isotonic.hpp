#pragma once

// L1 fits of piecewise-constant data by monotone sequences under a unit-mass
// constraint, solved through the Lagrangian of the mass row.
//
// Data are pieces with per-point value h_j and width w_j. For a multiplier
// lambda in [-1,1],
//   g(lambda) = min_{v monotone, v >= 0} sum_j w_j (|h_j - v_j| + lambda v_j) - lambda
// is concave and piecewise linear, and its maximum is the constrained optimum.
// The inner problem is separable, so pool-adjacent-violators with weighted
// quantiles at level (1 - lambda)/2 solves it exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "../histogram.hpp"

namespace shapetest {

struct Pieces {
    std::vector<double> h;  // per-point value
    std::vector<double> w;  // number of points

    std::size_t size() const { return h.size(); }

    // Maximal runs of exactly equal masses.
    static Pieces from_histogram(const Histogram& d) {
        Pieces p;
        const auto& m = d.masses();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!p.h.empty() && m[i] == p.h.back()) {
                p.w.back() += 1.0;
            } else {
                p.h.push_back(m[i]);
                p.w.push_back(1.0);
            }
        }
        return p;
    }

    Pieces slice(std::size_t lo, std::size_t hi) const {  // [lo, hi)
        Pieces p;
        p.h.assign(h.begin() + static_cast<long>(lo), h.begin() + static_cast<long>(hi));
        p.w.assign(w.begin() + static_cast<long>(lo), w.begin() + static_cast<long>(hi));
        return p;
    }

    Pieces reversed() const {
        Pieces p{h, w};
        std::reverse(p.h.begin(), p.h.end());
        std::reverse(p.w.begin(), p.w.end());
        return p;
    }
};

namespace detail {

struct IsoBlock {
    std::vector<std::pair<double, double>> el;  // (h, w), sorted by h
    double weight = 0.0;
    double value = 0.0;
    double cost = 0.0;
};

inline void iso_evaluate(IsoBlock& b, double lambda) {
    const double target = 0.5 * (1.0 - lambda) * b.weight;
    double cum = 0.0;
    b.value = b.el.back().first;
    for (const auto& [h, w] : b.el) {
        cum += w;
        if (cum >= target - 1e-15 * b.weight) {
            b.value = h;
            break;
        }
    }
    double c = lambda * b.weight * b.value;
    for (const auto& [h, w] : b.el) c += w * std::abs(h - b.value);
    b.cost = c;
}

}  // namespace detail

// Costs sum_j w_j(|h_j - v_j| + lambda v_j) of the best monotone fit of
// every prefix; out[k] covers the first k pieces.
inline std::vector<double> prefix_fit_costs(const Pieces& p, bool increasing, double lambda) {
    std::vector<double> out(p.size() + 1, 0.0);
    std::vector<detail::IsoBlock> stack;
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        detail::IsoBlock b;
        b.el.push_back({p.h[j], p.w[j]});
        b.weight = p.w[j];
        detail::iso_evaluate(b, lambda);
        total += b.cost;
        stack.push_back(std::move(b));
        while (stack.size() >= 2) {
            auto& top = stack.back();
            auto& prev = stack[stack.size() - 2];
            const bool violates = increasing ? prev.value > top.value : prev.value < top.value;
            if (!violates) break;
            total -= prev.cost + top.cost;
            std::vector<std::pair<double, double>> merged;
            merged.reserve(prev.el.size() + top.el.size());
            std::merge(prev.el.begin(), prev.el.end(), top.el.begin(), top.el.end(),
                       std::back_inserter(merged));
            prev.el = std::move(merged);
            prev.weight += top.weight;
            detail::iso_evaluate(prev, lambda);
            total += prev.cost;
            stack.pop_back();
        }
        out[j + 1] = total;
    }
    return out;
}

inline double fit_cost(const Pieces& p, bool increasing, double lambda) {
    return prefix_fit_costs(p, increasing, lambda).back();
}

// Maximum of a concave function on [-1, 1] by golden-section search.
template <class F>
double maximize_concave(F&& g, double tol = 1e-12) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = -1.0, b = 1.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    double best = std::max({g(-1.0), g(1.0), f1, f2});
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
            best = std::max(best, f2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
            best = std::max(best, f1);
        }
    }
    return best;
}

// One monotone segment per entry of `segments`, given as [lo, hi) piece ranges
// with a direction. Returns the exact constrained optimum.
struct Segment {
    std::size_t lo = 0, hi = 0;
    bool increasing = false;
};

inline double segmented_fit_distance(const Pieces& p, const std::vector<Segment>& segments) {
    std::vector<Pieces> parts;
    for (const auto& s : segments) parts.push_back(p.slice(s.lo, s.hi));
    return maximize_concave([&](double lambda) {
        double c = -lambda;
        for (std::size_t k = 0; k < parts.size(); ++k)
            if (parts[k].size() > 0) c += fit_cost(parts[k], segments[k].increasing, lambda);
        return c;
    });
}

inline double monotone_fit_distance(const Pieces& p, bool increasing) {
    return segmented_fit_distance(p, {{0, p.size(), increasing}});
}

// Single-peak fits: nondecreasing on the first k pieces, nonincreasing after.
// Each split gives a lower bound on a grid of multipliers; splits are then
// solved exactly in order of their bound, skipping those that cannot win.
// Returns as soon as a split reaches a value <= stop_below.
inline double unimodal_fit_distance(const Pieces& p, double stop_below = -1.0) {
    const std::size_t l = p.size();
    const Pieces r = p.reversed();
    std::vector<double> lb(l + 1, -INFINITY);
    for (int g = 0; g <= 20; ++g) {
        const double lambda = -1.0 + 0.1 * g;
        const auto inc = prefix_fit_costs(p, true, lambda);
        const auto dec_rev = prefix_fit_costs(r, true, lambda);
        for (std::size_t k = 0; k <= l; ++k) lb[k] = std::max(lb[k], inc[k] + dec_rev[l - k] - lambda);
    }
    std::vector<std::size_t> order(l + 1);
    for (std::size_t k = 0; k <= l; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lb[a] < lb[b]; });
    double best = INFINITY;
    for (std::size_t k : order) {
        if (lb[k] >= best - 1e-12) break;
        const double v = segmented_fit_distance(p, {{0, k, true}, {k, l, false}});
        best = std::min(best, v);
        if (best <= stop_below) break;
    }
    return best;
}

}  // namespace shapetest
