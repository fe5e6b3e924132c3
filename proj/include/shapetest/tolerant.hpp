#pragma once

// Tolerant tester: learn a hypothesis, estimate its distance to D on the
// effective support, and add its offline distance to the class.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "classes.hpp"
#include "effective.hpp"
#include "histogram.hpp"
#include "project/exact.hpp"
#include "sampling.hpp"
#include "splittable.hpp"

namespace shapetest {

struct TolerantOptions {
    double kappa = 2.0;
    double c_agn = 3.0;
    double c_close = 9.0;   // plug-in estimator draws c_close * m / eps^2
    double c_learn = 4.0;   // empirical learner draws c_learn * n / eps^2
    double dkw_delta = 0.1;
};

struct TolerantConfig {
    double eps1 = 0.0, eps2 = 0.0;
    double kappa = 2.0, c_agn = 3.0;
    double eps = 0.0;    // (eps2 - eps1) / (17 kappa)
    double theta = 0.0;  // eps2 - ((6 + c) eps1 + 11 eps)
    double tau_t = 0.0;  // (3 + c) eps1 + 5 eps
    double ratio_required = 0.0;  // 1 + (5c + 6) kappa / (kappa - 1)

    bool precondition() const { return eps2 >= ratio_required * eps1; }
};

inline TolerantConfig make_tolerant_config(double eps1, double eps2, const TolerantOptions& opt = {}) {
    if (!(eps1 >= 0.0 && eps1 < eps2 && eps2 <= 1.0))
        throw std::invalid_argument("tolerant: need 0 <= eps1 < eps2 <= 1");
    if (!(opt.kappa > 1.0)) throw std::invalid_argument("tolerant: kappa must exceed 1");
    TolerantConfig c;
    c.eps1 = eps1;
    c.eps2 = eps2;
    c.kappa = opt.kappa;
    c.c_agn = opt.c_agn;
    c.eps = (eps2 - eps1) / (17.0 * opt.kappa);
    c.theta = eps2 - ((6.0 + opt.c_agn) * eps1 + 11.0 * c.eps);
    c.tau_t = (3.0 + opt.c_agn) * eps1 + 5.0 * c.eps;
    c.ratio_required = 1.0 + (5.0 * opt.c_agn + 6.0) * opt.kappa / (opt.kappa - 1.0);
    return c;
}

// Plug-in estimate of ||D - known||_1 from ceil(c * m / eps^2) draws,
// clamped to [0, 2]. Bias is at most sqrt(m / draws) = eps / sqrt(c).
template <SampleSource S>
double closeness_estimate(S& src, const Histogram& known, std::size_t m, double epsilon, double c = 9.0) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("closeness_estimate: eps must be positive");
    if (src.n() != known.n()) throw std::invalid_argument("closeness_estimate: domain mismatch");
    const auto draws = static_cast<std::uint64_t>(std::ceil(c * static_cast<double>(std::max<std::size_t>(m, 1)) /
                                                            (epsilon * epsilon)));
    const auto counts = src.draw_counts(draws);
    double l1 = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        l1 += std::abs(static_cast<double>(counts[i]) / static_cast<double>(draws) - known.masses()[i]);
    return std::clamp(l1, 0.0, 2.0);
}

namespace detail {

// On the full domain the PBD/Binomial oracles err only by their grid, about
// e/250 in L1, so e = 60 eps keeps it below eps/4.
inline double full_domain_oracle_eps(double eps) { return std::clamp(60.0 * eps, 1e-6, 0.99); }

}  // namespace detail

// Offline estimate of L1(h, C) to within eps where the class has an exact or
// fine-grained oracle.
inline double class_distance_estimate(const Histogram& h, const ShapeClass& c, double eps) {
    const double e = std::clamp(eps, 1e-6, 0.99);
    const double ef = detail::full_domain_oracle_eps(eps);
    switch (c.kind) {
        case Kind::Monotone: return dist_to_monotone(h, c.increasing);
        case Kind::Unimodal: return dist_to_unimodal(h);
        case Kind::TModal: return dist_to_tmodal(h, c.t);
        case Kind::Convex: return dist_to_convex(h);
        case Kind::Concave: return dist_to_concave(h);
        case Kind::HistogramT: return dist_to_histogram_t(h, c.t, e);
        case Kind::PiecewisePoly: return dist_to_piecewise_poly(h, c.t, c.d, e);
        case Kind::PBD: return dist_to_pbd(h, ef);
        case Kind::Binomial: return dist_to_binomial(h, ef);
        case Kind::MHR:
        case Kind::LogConcave: break;
    }
    throw UnsupportedClass("tolerant: no L1 distance estimator for class " + c.name());
}

// Empirical pmf at L1 accuracy eps/2, then projected where the class has a
// projection with a certificate (monotone, PBD, Binomial). Other classes keep
// the empirical pmf, which is already within eps/2 of D.
template <SampleSource S>
Histogram semi_agnostic_learn(S& src, std::size_t n, double epsilon, double delta, const ClassSpec& spec,
                              double c_learn = 4.0) {
    if (src.n() != n) throw std::invalid_argument("semi_agnostic_learn: domain mismatch");
    if (!(epsilon > 0.0)) throw std::invalid_argument("semi_agnostic_learn: eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("semi_agnostic_learn: delta must be in (0,1)");
    const double half = epsilon / 2.0;
    const auto draws = static_cast<std::uint64_t>(
        std::ceil(c_learn * (static_cast<double>(n) + std::log(1.0 / delta)) / (half * half)));
    const Histogram emp = empirical_from_counts(src.draw_counts(draws));
    const double e = detail::full_domain_oracle_eps(epsilon);
    switch (spec.shape.kind) {
        case Kind::Monotone: return project_monotone(emp, spec.shape.increasing).q;
        case Kind::PBD: {
            const auto r = pbd_distance(emp, e, {1, n});
            return pbd_pmf(r.best, n - 1);
        }
        case Kind::Binomial: return binomial_pmf(n - 1, binomial_distance(emp, e, {1, n}).q);
        default: return emp;
    }
}

// Smallest interval with mass > target, by two pointers over the pmf.
inline Interval smallest_heavy_interval(const Histogram& d, double target) {
    const std::size_t n = d.n();
    std::size_t best_lo = 1, best_hi = n, lo = 1;
    double mass = 0.0;
    bool found = false;
    for (std::size_t hi = 1; hi <= n; ++hi) {
        mass += d(hi);
        while (lo < hi && mass - d(lo) > target) mass -= d(lo++);
        if (mass > target && (!found || hi - lo < best_hi - best_lo)) {
            best_lo = lo;
            best_hi = hi;
            found = true;
        }
    }
    if (!found) return {1, n};
    return {best_lo, best_hi};
}

struct TolerantOutcome {
    Verdict verdict = Verdict::Reject;
    std::string reason;
    TolerantConfig config;
    std::optional<Interval> interval;
    std::optional<Histogram> hypothesis;
    double delta_hat = 0.0;  // closeness estimate on I
    double delta = 0.0;      // offline L1(hypothesis, C)
    std::uint64_t samples_used = 0;

    bool accepted() const { return verdict == Verdict::Accept; }
};

template <SampleSource S>
TolerantOutcome tolerant_test(S& src, std::size_t n, double eps1, double eps2, const ClassSpec& spec,
                              std::uint64_t seed, const TolerantOptions& opt = {}) {
    if (src.n() != n) throw std::invalid_argument("tolerant_test: source domain differs from n");
    TolerantOutcome out;
    out.config = make_tolerant_config(eps1, eps2, opt);
    const auto& cfg = out.config;
    const std::uint64_t start = src.consumed();
    const auto finish = [&](Verdict v, std::string why) {
        out.verdict = v;
        out.reason = std::move(why);
        out.samples_used = src.consumed() - start;
        return out;
    };

    // Step 1: Kolmogorov eps/2 estimate and the effective support.
    const double k = cfg.eps / 2.0;
    const auto m1 = static_cast<std::uint64_t>(std::ceil(std::log(2.0 / opt.dkw_delta) / (2.0 * k * k)));
    const Histogram d_tilde = empirical_from_counts(src.draw_counts(m1));
    const Interval I = smallest_heavy_interval(d_tilde, 1.0 - 1.5 * eps1 - cfg.eps);
    out.interval = I;
    const std::size_t M = eps1 > 0.0 ? spec.M(n, eps1).value_or(n) : n;
    if (I.size() > M)
        return finish(Verdict::Reject, "interval " + std::to_string(I.size()) + " exceeds M " + std::to_string(M));

    // Step 2: hypothesis.
    out.hypothesis = semi_agnostic_learn(src, n, cfg.eps, 0.1, spec, opt.c_learn);
    const Histogram& h = *out.hypothesis;

    // Step 4 is checked before spending step 3's samples; both are
    // deterministic given the hypothesis.
    if (h.mass(I) < 1.0 - cfg.tau_t) return finish(Verdict::Reject, "hypothesis mass on I below 1 - tau");

    // Step 3: ||D_I - h_I||_1 through rejection sampling.
    RestrictedSource<S> sub(src, I, d_tilde.mass(I), 64.0, mix64(seed));
    try {
        out.delta_hat = closeness_estimate(sub, conditional_restrict(h, I), I.size(), cfg.eps / 6.0, opt.c_close);
    } catch (const RejectionFail& e) {
        return finish(Verdict::Fail, e.what());
    }

    // Steps 5 and 6.
    out.delta = class_distance_estimate(h, spec.shape, cfg.eps);
    const double total = out.delta + out.delta_hat;
    const std::string detail = "delta " + std::to_string(out.delta) + " + delta_hat " + std::to_string(out.delta_hat);
    if (total > cfg.theta) return finish(Verdict::Reject, detail + " > theta " + std::to_string(cfg.theta));
    return finish(Verdict::Accept, detail + " <= theta " + std::to_string(cfg.theta));
}

}  // namespace shapetest
