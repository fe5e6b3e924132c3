#pragma once

// Grid brute force: the smallest L1 distance from d to a pmf whose masses are
// multiples of grid_step and which passes is_member. Depth-first over the
// masses with two prunings: a prefix that already breaks the shape, and the
// bound cost_so_far + |remaining mass of d - remaining grid mass|.
//
// Histograms and piecewise-linear pmfs are rarely grid pmfs, so for those the
// grid is put on the piece masses instead: each piece gets a multiple of
// grid_step and, for degree 1, the slope that fits d best at that mass. A
// member loses at most t * grid_step when its piece masses are rounded.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "../histogram.hpp"
#include "../shape.hpp"

namespace shapetest {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Whether the prefix q[0..k] can still extend to a member. Conservative: it
// only rejects prefixes that no completion can repair.
inline bool prefix_ok(const std::vector<double>& q, std::size_t k, const ShapeClass& c) {
    const auto at = [&](std::size_t i) { return q[i]; };
    switch (c.kind) {
        case Kind::Monotone:
            if (k == 0) return true;
            return c.increasing ? at(k) >= at(k - 1) - prob_tol : at(k) <= at(k - 1) + prob_tol;
        case Kind::Unimodal: {
            std::vector<double> p(q.begin(), q.begin() + static_cast<long>(k + 1));
            return is_single_peak(p);
        }
        case Kind::TModal: {
            std::vector<double> p(q.begin(), q.begin() + static_cast<long>(k + 1));
            return turning_points(p) <= c.t;
        }
        case Kind::HistogramT: {
            std::vector<double> p(q.begin(), q.begin() + static_cast<long>(k + 1));
            return constant_runs(p) <= static_cast<std::size_t>(c.t);
        }
        case Kind::PiecewisePoly: {
            std::vector<double> p(q.begin(), q.begin() + static_cast<long>(k + 1));
            return polynomial_pieces(p, c.d) <= static_cast<std::size_t>(c.t);
        }
        case Kind::Concave:
        case Kind::Convex:
        case Kind::LogConcave: {
            // A positive mass after a zero that follows a positive mass breaks
            // the support interval.
            if (k >= 1 && at(k) > 0.0) {
                bool seen_pos = false, gap = false;
                for (std::size_t i = 0; i < k; ++i) {
                    if (at(i) > 0.0) {
                        if (gap) return false;
                        seen_pos = true;
                    } else if (seen_pos) {
                        gap = true;
                    }
                }
                if (gap) return false;
            }
            if (k < 2) return true;
            const double a = at(k - 2), b = at(k - 1), e = at(k);
            if (c.kind == Kind::LogConcave) return b * b >= a * e - 1e-9 * std::max(b * b, a * e) - 1e-300;
            if (!(a > 0.0 && e > 0.0)) return true;
            const double gap2 = 2.0 * b - a - e;
            return c.kind == Kind::Concave ? gap2 >= -prob_tol : gap2 <= prob_tol;
        }
        default: return true;
    }
}

struct BruteState {
    const std::vector<double>* d = nullptr;
    ShapeClass cls;
    double step = 0.0;
    long units = 0;
    std::vector<double> suffix_d;  // mass of d from index k on
    std::vector<double> q;
    double best = INFINITY;
    std::uint64_t nodes = 0, budget = 0;
};

inline void brute_recurse(BruteState& s, std::size_t k, long left, double cost) {
    if (++s.nodes > s.budget) throw BudgetExceeded("brute_force_distance: node budget exceeded");
    const std::size_t n = s.d->size();
    if (k + 1 == n) {
        s.q[k] = static_cast<double>(left) * s.step;
        const double total = cost + std::abs((*s.d)[k] - s.q[k]);
        if (total >= s.best || !prefix_ok(s.q, k, s.cls)) return;
        if (!is_member(Histogram(s.q), s.cls)) return;
        s.best = total;
        return;
    }
    // Values nearest to d_k first, so good incumbents appear early.
    const long centre = std::min(left, std::max(0L, std::lround((*s.d)[k] / s.step)));
    for (long off = 0; off <= left; ++off) {
        bool any = false;
        for (int side = 0; side < 2; ++side) {
            if (off == 0 && side == 1) continue;
            const long u = side == 0 ? centre + off : centre - off;
            if (u < 0 || u > left) continue;
            any = true;
            s.q[k] = static_cast<double>(u) * s.step;
            const double c2 = cost + std::abs((*s.d)[k] - s.q[k]);
            const double rest = static_cast<double>(left - u) * s.step;
            if (c2 + std::abs(s.suffix_d[k + 1] - rest) >= s.best) continue;
            if (!prefix_ok(s.q, k, s.cls)) continue;
            brute_recurse(s, k + 1, left - u, c2);
        }
        if (!any) break;
    }
}

// min over slopes b of sum |d_i - (M/len + b x_i)|, x_i centred on the
// piece, subject to every mass staying nonnegative. Convex in b, so the
// minimum sits on a breakpoint or a feasibility end.
inline double linear_piece_cost(const std::vector<double>& d, std::size_t lo, std::size_t hi, double M, int degree) {
    const std::size_t len = hi - lo;
    const double level = M / static_cast<double>(len), c = 0.5 * static_cast<double>(len - 1);
    const auto cost = [&](double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += std::abs(d[lo + i] - level - b * (static_cast<double>(i) - c));
        return s;
    };
    if (degree == 0 || len == 1) return cost(0.0);
    const double bmax = level / c;
    double best = std::min(cost(-bmax), cost(bmax));
    for (std::size_t i = 0; i < len; ++i) {
        const double x = static_cast<double>(i) - c;
        if (x == 0.0) continue;
        best = std::min(best, cost(std::clamp((d[lo + i] - level) / x, -bmax, bmax)));
    }
    return best;
}

// Knapsack over grid piece masses, once per set of breakpoints.
inline double structured_brute(const std::vector<double>& d, int t, int degree, long units, double step) {
    const std::size_t n = d.size();
    double best = INFINITY;
    // Every subset of the n - 1 gaps with at most t - 1 cuts.
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        if (std::popcount(mask) > t - 1) continue;
        std::vector<double> f(static_cast<std::size_t>(units) + 1, INFINITY);
        f[0] = 0.0;
        std::size_t lo = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 < n && !(mask >> i & 1u)) continue;
            std::vector<double> piece(static_cast<std::size_t>(units) + 1);
            for (long u = 0; u <= units; ++u)
                piece[static_cast<std::size_t>(u)] = linear_piece_cost(d, lo, i + 1, static_cast<double>(u) * step, degree);
            std::vector<double> g(f.size(), INFINITY);
            for (long a = 0; a <= units; ++a) {
                if (!std::isfinite(f[static_cast<std::size_t>(a)])) continue;
                for (long u = 0; a + u <= units; ++u)
                    g[static_cast<std::size_t>(a + u)] = std::min(g[static_cast<std::size_t>(a + u)],
                                                                  f[static_cast<std::size_t>(a)] + piece[static_cast<std::size_t>(u)]);
            }
            f.swap(g);
            lo = i + 1;
        }
        best = std::min(best, f[static_cast<std::size_t>(units)]);
    }
    return best;
}

}  // namespace detail

inline double brute_force_distance(const Histogram& d, const ShapeClass& c, double grid_step,
                                   std::uint64_t node_budget = 400'000'000ULL) {
    if (d.n() > 10) throw BudgetExceeded("brute_force_distance: n must be at most 10");
    if (grid_step < 0.01 - 1e-12) throw BudgetExceeded("brute_force_distance: grid_step must be >= 0.01");
    if (c.kind == Kind::PBD || c.kind == Kind::Binomial)
        throw UnsupportedClass("brute_force_distance: grid pmfs are not dense in this class");
    const long units = std::lround(1.0 / grid_step);
    if (std::abs(static_cast<double>(units) * grid_step - 1.0) > 1e-9)
        throw std::invalid_argument("brute_force_distance: 1/grid_step must be an integer");
    if (c.kind == Kind::HistogramT) return detail::structured_brute(d.masses(), c.t, 0, units, grid_step);
    if (c.kind == Kind::PiecewisePoly && c.d <= 1)
        return detail::structured_brute(d.masses(), c.t, c.d, units, grid_step);
    detail::BruteState s;
    s.d = &d.masses();
    s.cls = c;
    s.step = grid_step;
    s.units = units;
    s.q.assign(d.n(), 0.0);
    s.suffix_d.assign(d.n() + 1, 0.0);
    for (std::size_t i = d.n(); i-- > 0;) s.suffix_d[i] = s.suffix_d[i + 1] + d.masses()[i];
    s.budget = node_budget;
    detail::brute_recurse(s, 0, units, 0.0);
    return s.best;
}

}  // namespace shapetest
