#pragma once

// Efficient log-concave checker: single-peak Kolmogorov fit, alpha-trimmed
// support, heavy points and light pieces, then a feasibility LP over
// x_i = ln P(i).

#include <algorithm>
#include <cmath>
#include <vector>

#include "../histogram.hpp"
#include "../lp.hpp"
#include "../shape.hpp"
#include "kolmogorov_fit.hpp"

namespace shapetest {

struct LogConcaveCheckOptions {
    // Negative values select eps^2/ln^2(1/eps), eps^2/ln(1/eps), eps^2/10.
    double alpha = -1.0;
    double beta = -1.0;
    double gamma = -1.0;
    double certificate_factor = 100.0;
};

// Stage 2 layout over [a,b]: heavy singletons, light pieces, and the two end
// intervals that carry no constraint.
struct LogConcaveLayout {
    Interval support;
    std::vector<std::size_t> heavy;  // points with D''(x) >= beta
    std::vector<Interval> light;     // pieces with per-piece mean constraints
    Interval head{1, 0}, tail{1, 0};  // empty when hi < lo
};

namespace detail {

// Light pieces of [lo,hi] packed from `from_left` side: closed once their mass
// reaches gamma/10. A short remainder is merged into the last piece, or
// returned through `leftover` when there is none.
inline std::vector<Interval> pack_light(const Histogram& D, std::size_t lo, std::size_t hi, double gamma,
                                        bool from_left, bool& leftover) {
    std::vector<Interval> out;
    leftover = false;
    if (hi < lo) return out;
    const std::size_t len = hi - lo + 1;
    std::size_t start = 0;
    double mass = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t x = from_left ? lo + k : hi - k;
        mass += D(x);
        if (mass >= gamma / 10.0) {
            const std::size_t s = from_left ? lo + start : hi - k;
            const std::size_t e = from_left ? x : hi - start;
            out.push_back({s, e});
            start = k + 1;
            mass = 0.0;
        }
    }
    if (start < len) {
        const std::size_t s = from_left ? lo + start : lo;
        const std::size_t e = from_left ? hi : hi - start;
        if (out.empty()) {
            leftover = true;
        } else if (from_left) {
            out.back().hi = e;
        } else {
            out.back().lo = s;
        }
    }
    if (!from_left) std::reverse(out.begin(), out.end());
    return out;
}

// Smallest end segment of [lo,hi] with mass >= target, from the given side.
inline Interval end_segment(const Histogram& D, std::size_t lo, std::size_t hi, double target, bool from_left) {
    if (hi < lo) return {1, 0};
    double mass = 0.0;
    for (std::size_t k = 0; k <= hi - lo; ++k) {
        const std::size_t x = from_left ? lo + k : hi - k;
        mass += D(x);
        if (mass >= target) return from_left ? Interval{lo, x} : Interval{x, hi};
    }
    return {lo, hi};
}

inline bool empty_interval(const Interval& I) { return I.hi < I.lo; }

}  // namespace detail

inline LogConcaveLayout logconcave_layout(const Histogram& D, double eps, double alpha, double beta, double gamma) {
    const std::size_t n = D.n();
    LogConcaveLayout lay;
    std::size_t a = 1, b = n;
    while (a < n && D.cdf(a) <= alpha) ++a;
    while (b > a && D.tail(b) <= alpha) --b;
    lay.support = {a, b};

    std::size_t s_lo = 0, s_hi = 0;
    for (std::size_t x = a; x <= b; ++x)
        if (D(x) >= beta) {
            if (!s_lo) s_lo = x;
            s_hi = x;
        }
    // Head runs up to the heavy block, or to the peak when there is none.
    std::size_t head_hi, tail_lo;
    if (s_lo) {
        for (std::size_t x = s_lo; x <= s_hi; ++x) lay.heavy.push_back(x);
        head_hi = s_lo - 1;
        tail_lo = s_hi + 1;
    } else {
        std::size_t c = a;
        for (std::size_t x = a; x <= b; ++x)
            if (D(x) > D(c)) c = x;
        head_hi = c;
        tail_lo = c + 1;
    }
    const double end_mass = std::max(0.0, eps / 10.0 - beta);
    if (head_hi >= a) {
        lay.head = detail::end_segment(D, a, head_hi, end_mass, true);
        bool left = false;
        auto pieces = detail::pack_light(D, lay.head.hi + 1, head_hi, gamma, true, left);
        if (left) lay.head.hi = head_hi;
        lay.light.insert(lay.light.end(), pieces.begin(), pieces.end());
    }
    if (tail_lo <= b) {
        lay.tail = detail::end_segment(D, tail_lo, b, end_mass, false);
        bool left = false;
        auto pieces = detail::pack_light(D, tail_lo, lay.tail.lo - 1, gamma, false, left);
        if (left) lay.tail.lo = tail_lo;
        lay.light.insert(lay.light.end(), pieces.begin(), pieces.end());
    }
    return lay;
}

inline CheckResult logconcave_check(const Histogram& d, const Histogram& witness, double eps,
                                    LogConcaveCheckOptions opt = {}) {
    require_same_domain(d, witness);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("logconcave_check: eps must be in (0,1)");
    const double L = std::log(1.0 / eps);
    const double alpha = opt.alpha > 0.0 ? opt.alpha : eps * eps / (L * L);
    const double beta = opt.beta > 0.0 ? opt.beta : eps * eps / L;
    const double gamma = opt.gamma > 0.0 ? opt.gamma : eps * eps / 10.0;
    const std::size_t n = d.n();
    CheckResult out;

    const auto fit = unimodal_kolmogorov_fit(d, witness, alpha / 2.0, eps);
    if (!fit.feasible) {
        out.reason = "no single-peak pmf within eps is alpha/2-close to the witness";
        return out;
    }
    out.stage1_distance = fit.distance;
    const Histogram D(fit.x);
    const auto lay = logconcave_layout(D, eps, alpha, beta, gamma);
    const std::size_t a = lay.support.lo, b = lay.support.hi;
    const std::size_t k = b - a + 1;

    // Variables x_a..x_b, then u_i = eps_i/D''(i) per heavy point.
    lp::LinearProgram prog(k + lay.heavy.size());
    const auto xv = [&](std::size_t i) { return i - a; };
    for (std::size_t i = a; i <= b; ++i) prog.set_bounds(xv(i), -lp::inf, 0.0);
    const double band = std::log1p(2.0 * eps);
    for (const auto& J : lay.light) {
        const double mu = std::log(D.mass(J) / static_cast<double>(J.size()));
        for (std::size_t i = J.lo; i <= J.hi; ++i) {
            const double hi = std::min(0.0, mu + band);
            if (mu - band > hi) {
                out.reason = "light piece band is empty";
                return out;
            }
            prog.set_bounds(xv(i), mu - band, hi);
        }
    }
    for (std::size_t i = a + 1; i < b; ++i)
        prog.add_row({{xv(i - 1), 1.0}, {xv(i), -2.0}, {xv(i + 1), 1.0}}, lp::Rel::Le, 0.0);
    std::vector<std::pair<std::size_t, double>> sum_eps;
    for (std::size_t h = 0; h < lay.heavy.size(); ++h) {
        const std::size_t i = lay.heavy[h], e = k + h;
        const double Di = D(i), lnD = std::log(Di);
        prog.set_bounds(e, 0.0, 2.0 * alpha / Di);
        sum_eps.push_back({e, Di});
        // -2 u_i <= x_i - ln D(i) <= u_i.
        prog.add_row({{xv(i), 1.0}, {e, -1.0}}, lp::Rel::Le, lnD);
        prog.add_row({{xv(i), -1.0}, {e, -2.0}}, lp::Rel::Le, -lnD);
    }
    if (!sum_eps.empty()) prog.add_row(std::move(sum_eps), lp::Rel::Le, eps);

    const auto res = lp::solve(prog);
    if (res.status == lp::Status::Infeasible) {
        out.reason = "LP infeasible";
        return out;
    }
    if (!res.feasible()) throw lp::NumericalFailure("logconcave_check: LP failed");

    // Certificate: exp(x) on the constrained block, zero on the end intervals.
    std::size_t lo = detail::empty_interval(lay.head) ? a : lay.head.hi + 1;
    std::size_t hi = detail::empty_interval(lay.tail) ? b : lay.tail.lo - 1;
    if (hi < lo) {
        lo = a;
        hi = b;
    }
    std::vector<double> x(res.x.begin(), res.x.begin() + static_cast<long>(k));
    std::vector<double> p(n, 0.0);
    for (std::size_t i = lo; i <= hi; ++i) p[i - 1] = std::exp(x[xv(i)]);
    Histogram cert = Histogram::from_weights(std::move(p));
    out.certificate_distance = l1_distance(d, cert);
    if (!detail::is_logconcave(cert.masses()) || out.certificate_distance > opt.certificate_factor * eps) {
        out.reason = "certificate failed verification";
        return out;
    }
    out.certificate = std::move(cert);
    out.yes = true;
    return out;
}

}  // namespace shapetest
