#pragma once

// Certified lower bounds on L1(d, C), used to label "far" fixtures.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "histogram.hpp"
#include "project/exact.hpp"
#include "project/poly.hpp"
#include "shape.hpp"

namespace shapetest {

namespace detail {

// Best t-piece fit with free (unnormalized) levels; each piece uses its
// median. The normalized optimum can only cost more.
inline double unnormalized_histogram_fit(const Histogram& d, int t) {
    const std::size_t n = d.n();
    const auto& m = d.masses();
    // cost[a][b]: sum |m_i - median| over [a, b), 0-based.
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, 0.0));
    std::vector<double> buf;
    for (std::size_t a = 0; a < n; ++a) {
        buf.clear();
        for (std::size_t b = a + 1; b <= n; ++b) {
            buf.insert(std::upper_bound(buf.begin(), buf.end(), m[b - 1]), m[b - 1]);
            const double med = buf[(buf.size() - 1) / 2];
            double c = 0.0;
            for (double v : buf) c += std::abs(v - med);
            cost[a][b] = c;
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(n + 1, inf), cur(n + 1, inf);
    prev[0] = 0.0;
    double best = inf;
    for (int k = 1; k <= t; ++k) {
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t b = 1; b <= n; ++b)
            for (std::size_t a = 0; a < b; ++a)
                if (prev[a] < inf) cur[b] = std::min(cur[b], prev[a] + cost[a][b]);
        best = std::min(best, cur[n]);
        prev.swap(cur);
    }
    return best;
}

// Any MHR law has log-concave survival S on {S > 0}. Kolmogorov distance
// delta moves each S(i) by at most delta, so the smallest delta that
// rescues S(j) >= S(i)^a S(k)^b bounds L1 >= 2 delta.
inline double mhr_survival_bound(const Histogram& d) {
    const std::size_t n = d.n();
    if (n < 3) return 0.0;
    std::vector<double> S(n + 2, 0.0);
    for (std::size_t i = n; i >= 1; --i) S[i] = S[i + 1] + d(i);
    const std::size_t step = std::max<std::size_t>(1, n / 64);
    std::vector<std::size_t> grid;
    for (std::size_t i = 1; i <= n; i += step) grid.push_back(i);
    if (grid.back() != n) grid.push_back(n);
    const auto ok = [&](std::size_t i, std::size_t j, std::size_t k, double delta) {
        const double a = static_cast<double>(k - j) / static_cast<double>(k - i), b = 1.0 - a;
        const double si = S[i] - delta, sk = S[k] - delta;
        if (si <= 0.0 || sk <= 0.0) return true;
        return S[j] + delta >= std::pow(si, a) * std::pow(sk, b);
    };
    double best = 0.0;
    for (std::size_t x = 0; x < grid.size(); ++x)
        for (std::size_t z = x + 2; z < grid.size(); ++z)
            for (std::size_t y = x + 1; y < z; ++y) {
                const std::size_t i = grid[x], j = grid[y], k = grid[z];
                if (ok(i, j, k, best)) continue;
                double lo = best, hi = 1.0;
                for (int it = 0; it < 40; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (ok(i, j, k, mid) ? hi : lo) = mid;
                }
                best = lo;
            }
    return 2.0 * best;
}

// A PBD on N trials keeps mass >= 1 - 2 exp(-2 t^2/N) within t of its mean,
// so L1 >= 2 (1 - 2 exp(-2 t^2/N) - max mass of d on 2t+1 points).
inline double pbd_concentration_bound(const Histogram& d) {
    const std::size_t n = d.n();
    const double N = static_cast<double>(n - 1);
    if (N <= 0.0) return 0.0;
    const auto& m = d.masses();
    double best = 0.0;
    for (std::size_t w = 1; w <= n; w += 2) {
        const double t = static_cast<double>(w - 1) / 2.0;
        double run = 0.0, mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            run += m[i];
            if (i >= w) run -= m[i - w];
            mx = std::max(mx, run);
        }
        best = std::max(best, 2.0 * (1.0 - 2.0 * std::exp(-2.0 * t * t / N) - mx));
    }
    return best;
}

}  // namespace detail

// A value v with v <= L1(d, C). Exact where the class has an exact oracle.
inline double certified_distance_lower_bound(const Histogram& d, const ShapeClass& c) {
    switch (c.kind) {
        case Kind::Monotone: return dist_to_monotone(d, c.increasing);
        case Kind::Unimodal: return dist_to_unimodal(d);
        case Kind::TModal: return dist_to_tmodal(d, c.t);
        case Kind::Convex: return dist_to_convex(d);
        case Kind::Concave: return dist_to_concave(d);
        case Kind::LogConcave: return dist_to_unimodal(d);
        case Kind::MHR: return detail::mhr_survival_bound(d);
        case Kind::HistogramT: return detail::unnormalized_histogram_fit(d, c.t);
        case Kind::PiecewisePoly: {
            const double eo = 1e-3;
            return std::max(0.0, (dist_to_piecewise_poly(d, c.t, c.d, eo) - eo) / 3.0);
        }
        case Kind::PBD:
        case Kind::Binomial: return detail::pbd_concentration_bound(d);
    }
    return 0.0;
}

}  // namespace shapetest
