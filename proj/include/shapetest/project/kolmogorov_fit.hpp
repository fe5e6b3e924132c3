#pragma once

// Closest pmf to d in L1 whose CDF stays within alpha of a witness CDF,
// optionally restricted to a single-peak shape with a given split. Shared
// first stage of the MHR and log-concave checkers.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "../histogram.hpp"
#include "../lp.hpp"
#include "isotonic.hpp"

namespace shapetest {

// Outcome of an efficient checker.
struct CheckResult {
    bool yes = false;
    std::string reason;                   // why a no was returned
    double stage1_distance = 0.0;         // ||D'' - d||_1
    std::optional<Histogram> certificate;  // member of the class, on yes
    double certificate_distance = 0.0;    // ||d - certificate||_1
};

struct KolmogorovFit {
    bool feasible = false;
    double distance = 0.0;
    std::vector<double> x;  // the fitted pmf
};

// LP in CDF variables C_0..C_n with C_0 = 0, C_n = 1 and
// |C_k - W_k| <= alpha; x_k = C_k - C_{k-1} = d_k + a_k - b_k, 0 <= b_k <= d_k.
// With split s set, x is non-decreasing on [1,s] and non-increasing on [s+1,n].
inline KolmogorovFit kolmogorov_fit(const Histogram& d, const Histogram& witness, double alpha,
                                    std::optional<std::size_t> split = std::nullopt) {
    require_same_domain(d, witness);
    const std::size_t n = d.n();
    const std::size_t ia = n + 1, ib = 2 * n + 1;
    lp::LinearProgram prog(3 * n + 1);
    prog.set_bounds(0, 0.0, 0.0);
    prog.set_bounds(n, 1.0, 1.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double lo = std::max(0.0, witness.cdf(k) - alpha), hi = std::min(1.0, witness.cdf(k) + alpha);
        if (lo > hi) return {};
        prog.set_bounds(k, lo, hi);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        prog.set_cost(ia + k - 1, 1.0);
        prog.set_cost(ib + k - 1, 1.0);
        prog.set_bounds(ib + k - 1, 0.0, d(k));
        prog.add_row({{k, 1.0}, {k - 1, -1.0}, {ia + k - 1, -1.0}, {ib + k - 1, 1.0}}, lp::Rel::Eq, d(k));
    }
    if (split) {
        // x_{i+1} - x_i = C_{i+1} - 2 C_i + C_{i-1}.
        const std::size_t s = *split;
        for (std::size_t i = 1; i + 1 <= n; ++i) {
            if (i == s) continue;
            prog.add_row({{i + 1, 1.0}, {i, -2.0}, {i - 1, 1.0}}, i < s ? lp::Rel::Ge : lp::Rel::Le, 0.0);
        }
    }
    const auto res = lp::solve(prog);
    if (res.status == lp::Status::Infeasible) return {};
    if (res.status != lp::Status::Optimal) throw lp::NumericalFailure("kolmogorov_fit: LP not optimal");
    KolmogorovFit out;
    out.feasible = true;
    out.distance = res.objective;
    out.x.resize(n);
    for (std::size_t k = 1; k <= n; ++k) out.x[k - 1] = std::max(0.0, res.x[k] - res.x[k - 1]);
    return out;
}

// First single-peak Kolmogorov fit with distance <= budget. Splits are tried in
// order of a Lagrangian lower bound on their unconstrained cost, and those
// whose bound already exceeds the budget are skipped.
inline KolmogorovFit unimodal_kolmogorov_fit(const Histogram& d, const Histogram& witness, double alpha,
                                             double budget) {
    const std::size_t n = d.n();
    Pieces pts;
    pts.h = d.masses();
    pts.w.assign(n, 1.0);
    const Pieces rev = pts.reversed();
    std::vector<double> lb(n + 1, -INFINITY);
    for (int g = 0; g <= 20; ++g) {
        const double lambda = -1.0 + 0.1 * g;
        const auto inc = prefix_fit_costs(pts, true, lambda);
        const auto dec = prefix_fit_costs(rev, true, lambda);
        for (std::size_t s = 0; s <= n; ++s) lb[s] = std::max(lb[s], inc[s] + dec[n - s] - lambda);
    }
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s <= n; ++s)
        if (lb[s] <= budget + 1e-12) order.push_back(s);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lb[a] < lb[b]; });
    for (std::size_t s : order) {
        auto fit = kolmogorov_fit(d, witness, alpha, s);
        if (fit.feasible && fit.distance <= budget) return fit;
    }
    return {};
}

}  // namespace shapetest
