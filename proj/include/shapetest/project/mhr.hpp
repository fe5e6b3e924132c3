#pragma once

// Efficient MHR checker. Stage 1 replaces d by the closest D'' whose CDF is
// alpha/2-close to the witness; stage 2 looks for log-survival increments
// y_i = ln(1 - h_i) that fit D'' multiplicatively.

#include <algorithm>
#include <cmath>
#include <vector>

#include "../histogram.hpp"
#include "../lp.hpp"
#include "../shape.hpp"
#include "kolmogorov_fit.hpp"

namespace shapetest {

struct MhrCheckOptions {
    double alpha = -1.0;  // Kolmogorov tolerance; default eps^3
    double certificate_factor = 32.0;
};

namespace detail {

// P(i) = (1 - e^{y_i}) e^{y_1 + ... + y_{i-1}} for i <= b, zero after.
inline std::vector<double> mhr_from_increments(const std::vector<double>& y, std::size_t n) {
    std::vector<double> p(n, 0.0);
    double Y = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        p[i] = -std::expm1(y[i]) * std::exp(Y);
        Y += y[i];
    }
    return p;
}

}  // namespace detail

inline CheckResult mhr_check(const Histogram& d, const Histogram& witness, double eps, MhrCheckOptions opt = {}) {
    require_same_domain(d, witness);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mhr_check: eps must be in (0,1)");
    const double alpha = opt.alpha > 0.0 ? opt.alpha : eps * eps * eps;
    const std::size_t n = d.n();
    CheckResult out;

    const auto fit = kolmogorov_fit(d, witness, alpha / 2.0);
    if (!fit.feasible) {
        out.reason = "no pmf is alpha/2-close to the witness";
        return out;
    }
    out.stage1_distance = fit.distance;
    if (fit.distance > eps) {
        out.reason = "stage 1 distance exceeds eps";
        return out;
    }
    const Histogram D(fit.x);

    // b: shortest prefix whose complement has mass <= eps/2.
    std::size_t b = n;
    while (b >= 1 && D.tail(b) <= eps / 2.0) --b;
    if (b == 0) b = 1;

    // Variables: y_1..y_b, Y_1..Y_{b-1}, then eps_i for light i.
    const std::size_t iy = 0, iY = b;
    std::vector<std::size_t> light_var(b + 1, 0);
    std::size_t nvar = b + (b - 1);
    for (std::size_t i = 1; i <= b; ++i)
        if (D(i) <= eps * eps) light_var[i] = nvar++;
    lp::LinearProgram prog(nvar);
    const auto y = [&](std::size_t i) { return iy + i - 1; };
    const auto Y = [&](std::size_t i) { return iY + i - 1; };
    for (std::size_t i = 1; i <= b; ++i) prog.set_bounds(y(i), -lp::inf, 0.0);
    for (std::size_t i = 2; i <= b; ++i) {
        // Band on Y_{i-1} = sum_{j<i} y_j around ln D[i,n].
        const double ls = std::log(D.tail(i));
        prog.set_bounds(Y(i - 1), std::log1p(-eps) + ls, std::log1p(eps) + ls);
    }
    for (std::size_t i = 1; i + 1 <= b; ++i) {
        if (i == 1)
            prog.add_row({{Y(1), 1.0}, {y(1), -1.0}}, lp::Rel::Eq, 0.0);
        else
            prog.add_row({{Y(i), 1.0}, {Y(i - 1), -1.0}, {y(i), -1.0}}, lp::Rel::Eq, 0.0);
        prog.add_row({{y(i + 1), 1.0}, {y(i), -1.0}}, lp::Rel::Le, 0.0);
    }
    std::vector<std::pair<std::size_t, double>> sum_eps;
    for (std::size_t i = 1; i <= b; ++i) {
        const double Di = D(i), S = D.tail(i);
        if (light_var[i]) {
            const std::size_t e = light_var[i];
            prog.set_bounds(e, 0.0, 2.0 * alpha);
            sum_eps.push_back({e, 1.0});
            // (D_i - e_i)/((1+eps)S) <= -y_i <= (1+4eps)(D_i + e_i)/((1-eps)S).
            prog.add_row({{y(i), 1.0}, {e, -1.0 / ((1.0 + eps) * S)}}, lp::Rel::Le, -Di / ((1.0 + eps) * S));
            const double c = (1.0 + 4.0 * eps) / ((1.0 - eps) * S);
            prog.add_row({{y(i), -1.0}, {e, -c}}, lp::Rel::Le, c * Di);
        } else {
            const double lo_arg = 1.0 - (Di + 2.0 * alpha) / ((1.0 - eps) * S);
            const double hi_arg = 1.0 - (Di - 2.0 * alpha) / ((1.0 + eps) * S);
            const double lo = lo_arg > 0.0 ? std::log(lo_arg) : -lp::inf;
            const double hi = hi_arg > 0.0 ? std::min(0.0, std::log(hi_arg)) : -lp::inf;
            if (hi == -lp::inf) {
                out.reason = "heavy point bracket is empty";
                return out;
            }
            prog.set_bounds(y(i), lo, hi);
        }
    }
    if (!sum_eps.empty()) prog.add_row(std::move(sum_eps), lp::Rel::Le, eps);

    const auto res = lp::solve(prog);
    if (res.status == lp::Status::Infeasible) {
        out.reason = "stage 2 LP infeasible";
        return out;
    }
    if (!res.feasible()) throw lp::NumericalFailure("mhr_check: LP failed");

    // Remove solver noise from the ordering before rebuilding the pmf.
    std::vector<double> yv(b);
    double prev = 0.0;
    for (std::size_t i = 1; i <= b; ++i) {
        prev = std::min(prev, res.x[y(i)]);
        yv[i - 1] = prev;
    }
    auto p = detail::mhr_from_increments(yv, n);
    double total = 0.0;
    for (double v : p) total += v;
    if (!(total > 0.0)) throw lp::NumericalFailure("mhr_check: empty certificate");
    Histogram cert = Histogram::from_weights(std::move(p));
    out.certificate_distance = l1_distance(d, cert);
    // A yes is only returned with a verified certificate.
    if (!detail::is_mhr(cert) || out.certificate_distance > opt.certificate_factor * eps) {
        out.reason = "certificate failed verification";
        return out;
    }
    out.certificate = std::move(cert);
    out.yes = true;
    return out;
}

}  // namespace shapetest
