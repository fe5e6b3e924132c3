#pragma once

// Degree-d polynomial fits.
//
// project_single_poly works on a sub-histogram laid out on [-1,1), point r of
// k occupying the cell [-1 + 2r/k, -1 + 2(r+1)/k). It solves the Chebyshev
// CDF program and mixes the resulting quasi-density with the uniform one.
// The CDF box and density grids are enforced lazily: the LP is re-solved with
// the most violated grid points added until none is violated, which gives
// the optimum of the full program.
//
// dist_to_piecewise_poly scores segments with the exact discrete fit instead,
// so its value is attained by a member of the discrete class.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "../histogram.hpp"
#include "../lp.hpp"
#include "histogram_dp.hpp"

namespace shapetest {

namespace detail {

// T_0..T_{deg}(x).
inline std::vector<double> chebyshev_t(int deg, double x) {
    std::vector<double> t(static_cast<std::size_t>(deg) + 1);
    t[0] = 1.0;
    if (deg >= 1) t[1] = x;
    for (int i = 2; i <= deg; ++i) t[i] = 2.0 * x * t[i - 1] - t[i - 2];
    return t;
}

// T'_0..T'_{deg}(x), from T'_i = i U_{i-1}.
inline std::vector<double> chebyshev_dt(int deg, double x) {
    std::vector<double> u(static_cast<std::size_t>(deg) + 1, 0.0), dt(static_cast<std::size_t>(deg) + 1, 0.0);
    if (deg >= 1) u[0] = 1.0;
    if (deg >= 2) u[1] = 2.0 * x;
    for (int i = 2; i < deg; ++i) u[i] = 2.0 * x * u[i - 1] - u[i - 2];
    for (int i = 1; i <= deg; ++i) dt[i] = i * u[i - 1];
    return dt;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// q(u) = mix * mass / 2 + (1 - mix) F'(u) on [-1,1), F = sum c_i T_i.
struct PolyDensity {
    int d = 0;
    std::vector<double> c;  // d+2 CDF coefficients
    double mix = 0.0;
    double mass = 0.0;
    std::size_t k = 1;  // number of cells

    double density(double u) const {
        return mix * mass / 2.0 + (1.0 - mix) * detail::dot(c, detail::chebyshev_dt(d + 1, u));
    }
    double cdf(double u) const {
        const double F = detail::dot(c, detail::chebyshev_t(d + 1, u));
        return mix * mass * (u + 1.0) / 2.0 + (1.0 - mix) * F;
    }
    double cell_lo(std::size_t r) const { return -1.0 + 2.0 * static_cast<double>(r) / static_cast<double>(k); }
    double cell_mass(std::size_t r) const { return cdf(cell_lo(r + 1)) - cdf(cell_lo(r)); }

    // Integral of |q - p| where p is the step density of the cell masses.
    double l1_to(const std::vector<double>& p) const {
        double total = 0.0;
        const int sub = 4 * (d + 1) + 2;
        for (std::size_t r = 0; r < k; ++r) {
            const double a = cell_lo(r), b = cell_lo(r + 1);
            const double level = p[r] * static_cast<double>(k) / 2.0;
            const auto g = [&](double u) { return density(u) - level; };
            const auto G = [&](double u) { return cdf(u) - level * u; };
            std::vector<double> cuts{a};
            double prev_u = a, prev_g = g(a);
            for (int s = 1; s <= sub; ++s) {
                const double u = a + (b - a) * s / sub;
                const double gu = g(u);
                if ((prev_g < 0.0) != (gu < 0.0)) {
                    double lo = prev_u, hi = u;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if ((g(mid) < 0.0) == (prev_g < 0.0)) lo = mid; else hi = mid;
                    }
                    cuts.push_back(0.5 * (lo + hi));
                }
                prev_u = u;
                prev_g = gu;
            }
            cuts.push_back(b);
            for (std::size_t j = 0; j + 1 < cuts.size(); ++j) total += std::abs(G(cuts[j + 1]) - G(cuts[j]));
        }
        return total;
    }
};

struct SinglePolyFit {
    PolyDensity q;
    double tau = 0.0;
    std::size_t lp_rounds = 0;
};

struct SinglePolyGrids {
    std::size_t J = 0, K = 0;  // 0 selects the defaults below

    static std::size_t default_J(int d) {
        const double v = std::pow(d + 2.0, 4.0) * 100.0;
        return static_cast<std::size_t>(std::min(v, 5000.0));
    }
    static std::size_t default_K(int d, double eps) {
        return static_cast<std::size_t>(std::min(std::ceil((d + 1.0) * (d + 1.0) / eps), 5000.0));
    }
};

// p: non-negative cell masses (a sub-distribution). eta defaults to eps/(d+1).
inline SinglePolyFit project_single_poly(const std::vector<double>& p, int d, double eps, double eta = -1.0,
                                         SinglePolyGrids grids = {}) {
    if (p.empty()) throw std::invalid_argument("project_single_poly: empty interval");
    if (d < 0) throw std::invalid_argument("project_single_poly: negative degree");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("project_single_poly: eps must be in (0,1]");
    if (eta <= 0.0) eta = eps / (d + 1.0);
    const std::size_t k = p.size();
    const int D = d + 1;  // CDF degree
    const std::size_t nc = static_cast<std::size_t>(D) + 1;
    double mass = 0.0;
    for (double x : p) mass += x;

    const auto ends = detail::granular_right_ends(p, eta);
    const std::size_t z = ends.size();
    std::vector<double> cut(z + 1), cum(z + 1, 0.0);
    cut[0] = -1.0;
    {
        std::size_t r = 0;
        for (std::size_t j = 0; j < z; ++j) {
            double m = 0.0;
            for (; r < ends[j]; ++r) m += p[r];
            cum[j + 1] = cum[j] + m;
            cut[j + 1] = -1.0 + 2.0 * static_cast<double>(ends[j]) / static_cast<double>(k);
        }
        cut[z] = 1.0;
    }

    // Variables: c (nc), w (z), y (z), tau.
    const std::size_t iw = nc, iy = nc + z, itau = nc + 2 * z;
    lp::LinearProgram base(itau + 1);
    const double box = std::sqrt(2.0);
    for (std::size_t i = 0; i < nc; ++i) base.set_bounds(i, -box, box);
    for (std::size_t l = 0; l < z; ++l) base.set_bounds(iw + l, -lp::inf, lp::inf);
    base.set_cost(itau, 1.0);
    const auto cdf_row = [&](double u) {
        const auto t = detail::chebyshev_t(D, u);
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t i = 0; i < nc; ++i) row.push_back({i, t[i]});
        return row;
    };
    base.add_row(cdf_row(-1.0), lp::Rel::Eq, 0.0);
    base.add_row(cdf_row(1.0), lp::Rel::Eq, mass);
    for (std::size_t j = 0; j < z; ++j)
        for (std::size_t kk = j + 1; kk <= z; ++kk) {
            const auto tk = detail::chebyshev_t(D, cut[kk]), tj = detail::chebyshev_t(D, cut[j]);
            std::vector<std::pair<std::size_t, double>> row;
            for (std::size_t i = 0; i < nc; ++i) row.push_back({i, tk[i] - tj[i]});
            for (std::size_t l = j; l < kk; ++l) row.push_back({iw + l, -1.0});
            const double r = std::sqrt(eps * static_cast<double>(kk - j)) * eta;
            const double target = cum[kk] - cum[j];
            base.add_row(row, lp::Rel::Le, target + r);
            base.add_row(std::move(row), lp::Rel::Ge, target - r);
        }
    {
        std::vector<std::pair<std::size_t, double>> sum_w, sum_y;
        for (std::size_t l = 0; l < z; ++l) {
            sum_w.push_back({iw + l, 1.0});
            sum_y.push_back({iy + l, 1.0});
            base.add_row({{iw + l, 1.0}, {iy + l, -1.0}}, lp::Rel::Le, 0.0);
            base.add_row({{iw + l, -1.0}, {iy + l, -1.0}}, lp::Rel::Le, 0.0);
        }
        base.add_row(std::move(sum_w), lp::Rel::Eq, 0.0);
        sum_y.push_back({itau, -1.0});
        base.add_row(std::move(sum_y), lp::Rel::Le, 0.0);
    }

    const std::size_t nJ = grids.J ? grids.J : SinglePolyGrids::default_J(d);
    const std::size_t nK = grids.K ? grids.K : SinglePolyGrids::default_K(d, eps);
    const auto grid_point = [](std::size_t i, std::size_t count) {
        return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(count);
    };
    std::vector<bool> inJ(nJ, false), inK(nK, false);
    const auto seed = [&](std::vector<bool>& in, std::size_t count) {
        const std::size_t step = std::max<std::size_t>(1, count / (2 * nc + 2));
        for (std::size_t i = 0; i < count; i += step) in[i] = true;
    };
    seed(inJ, nJ);
    seed(inK, nK);

    SinglePolyFit out;
    for (;;) {
        ++out.lp_rounds;
        lp::LinearProgram prog = base;
        for (std::size_t i = 0; i < nJ; ++i)
            if (inJ[i]) {
                auto row = cdf_row(grid_point(i, nJ));
                prog.add_row(row, lp::Rel::Ge, 0.0);
                prog.add_row(std::move(row), lp::Rel::Le, 1.0);
            }
        for (std::size_t i = 0; i < nK; ++i)
            if (inK[i]) {
                const auto dt = detail::chebyshev_dt(D, grid_point(i, nK));
                std::vector<std::pair<std::size_t, double>> row;
                for (std::size_t j = 0; j < nc; ++j) row.push_back({j, dt[j]});
                prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
            }
        const auto res = lp::solve(prog);
        if (res.status != lp::Status::Optimal)
            throw lp::NumericalFailure("project_single_poly: LP not optimal");
        const std::vector<double> c(res.x.begin(), res.x.begin() + static_cast<long>(nc));
        // Add the worst violators of each grid.
        std::vector<std::pair<double, std::size_t>> vj, vk;
        for (std::size_t i = 0; i < nJ; ++i) {
            if (inJ[i]) continue;
            const double F = detail::dot(c, detail::chebyshev_t(D, grid_point(i, nJ)));
            const double v = std::max(-F, F - 1.0);
            if (v > 1e-9) vj.push_back({v, i});
        }
        for (std::size_t i = 0; i < nK; ++i) {
            if (inK[i]) continue;
            const double f = detail::dot(c, detail::chebyshev_dt(D, grid_point(i, nK)));
            if (-f > 1e-9) vk.push_back({-f, i});
        }
        if (vj.empty() && vk.empty()) {
            out.q = PolyDensity{d, c, eps, mass, k};
            out.tau = res.objective;
            return out;
        }
        const auto take = [](std::vector<std::pair<double, std::size_t>>& v, std::vector<bool>& in) {
            std::sort(v.begin(), v.end(), std::greater<>());
            for (std::size_t i = 0; i < std::min<std::size_t>(v.size(), 8); ++i) in[v[i].second] = true;
        };
        take(vj, inJ);
        take(vk, inK);
    }
}

namespace detail {

// Exact min sum_x |h_x - q_x| over degree-d q >= 0 on the points [a,b] with
// sum q = h([a,b]); q_x = h_x + up_x - dn_x with 0 <= dn_x <= h_x.
inline double discrete_poly_fit(const Histogram& h, std::size_t a, std::size_t b, int d) {
    const std::size_t k = b - a + 1;
    if (k <= static_cast<std::size_t>(d) + 1) return 0.0;
    const std::size_t nb = static_cast<std::size_t>(d) + 1;
    lp::LinearProgram prog(nb + 2 * k);
    for (std::size_t i = 0; i < nb; ++i) prog.set_bounds(i, -lp::inf, lp::inf);
    std::vector<std::pair<std::size_t, double>> mass;
    std::vector<double> col_sum(nb, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
        const double u = -1.0 + (2.0 * static_cast<double>(x) + 1.0) / static_cast<double>(k);
        const auto t = chebyshev_t(d, u);
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t i = 0; i < nb; ++i) {
            row.push_back({i, t[i]});
            col_sum[i] += t[i];
        }
        const std::size_t up = nb + x, dn = nb + k + x;
        prog.set_cost(up, 1.0);
        prog.set_cost(dn, 1.0);
        prog.set_bounds(dn, 0.0, h(a + x));
        row.push_back({up, -1.0});
        row.push_back({dn, 1.0});
        prog.add_row(std::move(row), lp::Rel::Eq, h(a + x));
    }
    for (std::size_t i = 0; i < nb; ++i) mass.push_back({i, col_sum[i]});
    prog.add_row(std::move(mass), lp::Rel::Eq, h.mass({a, b}));
    const auto res = lp::solve(prog);
    if (res.status != lp::Status::Optimal) throw lp::NumericalFailure("discrete_poly_fit: LP not optimal");
    return res.objective;
}

}  // namespace detail

// DP over granular endpoints (eta = eps/(4t(d+1))) with exact discrete
// degree-d segment fits. OPT <= Delta.
inline double dist_to_piecewise_poly(const Histogram& h, int t, int d, double epsilon) {
    if (t < 1 || d < 0) throw std::invalid_argument("dist_to_piecewise_poly: need t >= 1, d >= 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("dist_to_piecewise_poly: epsilon must be positive");
    if (d == 0) {
        // Degree 0 pieces are flattenings.
        const double eta = std::min(1.0, epsilon / (4.0 * t));
        return detail::segment_dp(detail::granular_right_ends(h.masses(), eta), t,
                                  [&](std::size_t a, std::size_t b) { return detail::flatten_cost(h, a, b); });
    }
    const double eta = std::min(1.0, epsilon / (4.0 * t * (d + 1.0)));
    return detail::segment_dp(detail::granular_right_ends(h.masses(), eta), t,
                              [&](std::size_t a, std::size_t b) { return detail::discrete_poly_fit(h, a, b, d); });
}

}  // namespace shapetest
