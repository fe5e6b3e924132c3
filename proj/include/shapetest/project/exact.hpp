#pragma once

// Exact L1 distances to the monotone, unimodal, t-modal, convex and concave
// classes.
//
// The first three work on the constant runs of the input: averaging a fit
// over a run keeps its shape and does not raise the L1 cost, so an optimal
// fit is constant on every run. Convex and concave fits are not, and are
// solved pointwise over every candidate support.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "../histogram.hpp"
#include "../lp.hpp"
#include "isotonic.hpp"

namespace shapetest {

struct Projection {
    double distance = 0.0;
    Histogram q;
};

inline double dist_to_monotone(const Histogram& h, bool increasing = false) {
    return monotone_fit_distance(Pieces::from_histogram(h), increasing);
}

// Closest monotone pmf, from the run-level LP
//   min sum w_j (a_j + b_j)  s.t.  v_j = h_j + a_j - b_j monotone,
//   sum w_j (a_j - b_j) = 0,  0 <= b_j <= h_j.
inline Projection project_monotone(const Histogram& h, bool increasing = false) {
    const Pieces p = Pieces::from_histogram(h);
    const std::size_t l = p.size();
    lp::LinearProgram prog(2 * l);
    std::vector<double> cost(2 * l);
    for (std::size_t j = 0; j < l; ++j) {
        cost[j] = p.w[j];
        cost[l + j] = p.w[j];
        prog.set_bounds(l + j, 0.0, p.h[j]);
    }
    prog.set_objective(cost);
    for (std::size_t j = 0; j + 1 < l; ++j) {
        // v_j - v_{j+1} >= 0 for non-increasing, <= 0 for non-decreasing.
        const double rhs = p.h[j + 1] - p.h[j];
        prog.add_row({{j, 1.0}, {l + j, -1.0}, {j + 1, -1.0}, {l + j + 1, 1.0}},
                     increasing ? lp::Rel::Le : lp::Rel::Ge, rhs);
    }
    std::vector<std::pair<std::size_t, double>> mass;
    for (std::size_t j = 0; j < l; ++j) {
        mass.push_back({j, p.w[j]});
        mass.push_back({l + j, -p.w[j]});
    }
    prog.add_row(std::move(mass), lp::Rel::Eq, 0.0);
    const auto res = lp::solve(prog);
    if (res.status != lp::Status::Optimal) throw lp::NumericalFailure("project_monotone: LP not optimal");
    std::vector<double> q;
    for (std::size_t j = 0; j < l; ++j) {
        const double v = std::max(0.0, p.h[j] + res.x[j] - res.x[l + j]);
        for (std::size_t k = 0; k < static_cast<std::size_t>(p.w[j]); ++k) q.push_back(v);
    }
    return {res.objective, Histogram::from_weights(std::move(q))};
}

inline double dist_to_unimodal(const Histogram& h, double stop_below = -1.0) {
    return unimodal_fit_distance(Pieces::from_histogram(h), stop_below);
}

namespace detail {

inline void enumerate_cuts(std::size_t l, std::size_t max_cuts, std::size_t from,
                           std::vector<std::size_t>& cuts,
                           const std::function<void(const std::vector<std::size_t>&)>& visit) {
    visit(cuts);
    if (cuts.size() == max_cuts) return;
    for (std::size_t c = from; c < l; ++c) {
        cuts.push_back(c);
        enumerate_cuts(l, max_cuts, c + 1, cuts, visit);
        cuts.pop_back();
    }
}

}  // namespace detail

// At most t turning points: up to t+1 alternating monotone segments over the
// runs. Exhaustive over cut positions, so meant for small inputs.
inline double dist_to_tmodal(const Histogram& h, int t) {
    if (t < 0) throw std::invalid_argument("dist_to_tmodal: t must be non-negative");
    const Pieces p = Pieces::from_histogram(h);
    const std::size_t l = p.size();
    if (l <= 1) return 0.0;
    const std::size_t max_cuts = std::min<std::size_t>(static_cast<std::size_t>(t), l - 1);
    double configs = 0.0, binom = 1.0;
    for (std::size_t r = 0; r <= max_cuts; ++r) {
        configs += binom;
        binom = binom * static_cast<double>(l - 1 - r) / static_cast<double>(r + 1);
    }
    if (configs > 2e5) throw std::invalid_argument("dist_to_tmodal: too many cut configurations");
    double best = INFINITY;
    std::vector<std::size_t> cuts;
    detail::enumerate_cuts(l, max_cuts, 1, cuts, [&](const std::vector<std::size_t>& c) {
        for (int first = 0; first < 2; ++first) {
            std::vector<Segment> segs;
            std::size_t lo = 0;
            bool inc = first == 1;
            for (std::size_t k = 0; k <= c.size(); ++k) {
                const std::size_t hi = k < c.size() ? c[k] : l;
                segs.push_back({lo, hi, inc});
                inc = !inc;
                lo = hi;
            }
            best = std::min(best, segmented_fit_distance(p, segs));
            if (best <= 0.0) return;
        }
    });
    return best;
}

namespace detail {

// Best fit supported on [a, b] (1-based) with concave or convex shape there.
inline double curvature_fit_on_support(const Histogram& h, std::size_t a, std::size_t b, bool concave) {
    const std::size_t k = b - a + 1;
    double outside = 0.0;
    for (std::size_t i = 1; i <= h.n(); ++i)
        if (i < a || i > b) outside += h(i);
    // q_i = h_i + up_i - down_i, 0 <= down_i <= h_i.
    lp::LinearProgram prog(2 * k);
    std::vector<double> cost(2 * k, 1.0);
    prog.set_objective(cost);
    for (std::size_t j = 0; j < k; ++j) prog.set_bounds(k + j, 0.0, h(a + j));
    for (std::size_t j = 1; j + 1 < k; ++j) {
        // 2 q_j - q_{j-1} - q_{j+1} >= 0 (concave) or <= 0 (convex).
        const double rhs = -(2.0 * h(a + j) - h(a + j - 1) - h(a + j + 1));
        prog.add_row({{j, 2.0}, {k + j, -2.0}, {j - 1, -1.0}, {k + j - 1, 1.0}, {j + 1, -1.0}, {k + j + 1, 1.0}},
                     concave ? lp::Rel::Ge : lp::Rel::Le, rhs);
    }
    std::vector<std::pair<std::size_t, double>> mass;
    for (std::size_t j = 0; j < k; ++j) {
        mass.push_back({j, 1.0});
        mass.push_back({k + j, -1.0});
    }
    prog.add_row(std::move(mass), lp::Rel::Eq, outside);
    const auto res = lp::solve(prog);
    if (res.status == lp::Status::Infeasible) return INFINITY;
    if (res.status != lp::Status::Optimal) throw lp::NumericalFailure("curvature fit: LP not optimal");
    return res.objective + outside;
}

inline double curvature_distance(const Histogram& h, bool concave) {
    double best = INFINITY;
    for (std::size_t a = 1; a <= h.n(); ++a)
        for (std::size_t b = a; b <= h.n(); ++b) best = std::min(best, curvature_fit_on_support(h, a, b, concave));
    return best;
}

}  // namespace detail

inline double dist_to_concave(const Histogram& h) { return detail::curvature_distance(h, true); }
inline double dist_to_convex(const Histogram& h) { return detail::curvature_distance(h, false); }

}  // namespace shapetest
