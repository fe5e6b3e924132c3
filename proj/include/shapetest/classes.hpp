#pragma once

// Class registry: each shape class bundled with its splitting bound L(gamma,n),
// effective-support bound M(n,eps), offline distance check and membership test.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "histogram.hpp"
#include "project/exact.hpp"
#include "project/histogram_dp.hpp"
#include "project/logconcave.hpp"
#include "project/mhr.hpp"
#include "project/pbd.hpp"
#include "project/poly.hpp"
#include "shape.hpp"
#include "structure.hpp"

namespace shapetest {

// An oracle value Delta with lower*OPT - additive <= Delta <= upper*OPT + additive.
struct OracleContract {
    double lower = 1.0;
    double upper = 1.0;
    double additive = 0.0;

    // Midpoint of the gap between the largest Delta a (alpha/10)-close input
    // can produce and the smallest a (9 alpha/10)-far input can produce.
    // alpha/2 when the contract is too loose to separate the two.
    double threshold(double alpha) const {
        const double yes_max = upper * alpha / 10.0 + additive;
        const double no_min = lower * 9.0 * alpha / 10.0 - additive;
        return no_min > yes_max ? 0.5 * (yes_max + no_min) : 0.5 * alpha;
    }
    bool separates(double alpha) const {
        return lower * 9.0 * alpha / 10.0 - additive > upper * alpha / 10.0 + additive;
    }
};

struct OfflineVerdict {
    bool yes = false;
    double estimate = 0.0;   // oracle value (or checker stage-1 distance)
    double threshold = 0.0;  // yes iff estimate <= threshold, for oracle classes
    std::string detail;
};

struct ClassSpec {
    ShapeClass shape;
    std::function<double(double gamma, std::size_t n)> L;
    std::function<std::optional<std::size_t>(std::size_t n, double eps)> M;
    // alpha, explicit hypothesis, Kolmogorov witness (may be null).
    std::function<OfflineVerdict(const Histogram&, double, const Histogram*)> offline;
    std::function<bool(const Histogram&)> member;
    bool needs_witness = false;
    // Accuracy of the witness the offline check expects, as a function of eps.
    std::function<double(double eps)> witness_accuracy;

    std::string name() const { return shape.name(); }
};

// 2 ceil(sqrt((N/2) ln(2/eps))) + 1 for PBDs with N trials.
inline std::size_t pbd_effective_support_bound(std::size_t N, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("pbd_effective_support_bound: eps must be in (0,1)");
    const double half = std::sqrt(static_cast<double>(N) / 2.0 * std::log(2.0 / eps));
    return 2 * static_cast<std::size_t>(std::ceil(half)) + 1;
}

// L(gamma, n) after dyadic refinement on the padded domain: the fixed point of
// L = runs (2 log2 N + 2) * piece_bound(n, gamma, L). t-histograms split into
// t (2 log2 N + 2) dyadic pieces directly.
inline double splitting_bound(const ShapeClass& c, double gamma, std::size_t n) {
    const std::size_t N = next_pow2(n);
    const double refine = 2.0 * std::max(1u, ceil_log2(N)) + 2.0;
    switch (c.kind) {
        case Kind::HistogramT: return static_cast<double>(c.t) * refine;
        case Kind::MHR:
            return std::min(static_cast<double>(N), fixed_point_bound(N, gamma, refine, mhr_piece_bound));
        default: return fixed_point_bound(N, gamma, monotone_runs_allowed(c) * refine, monotone_piece_bound);
    }
}

namespace detail {

inline OfflineVerdict oracle_verdict(double delta, double alpha, const OracleContract& k) {
    OfflineVerdict v;
    v.estimate = delta;
    v.threshold = k.threshold(alpha);
    v.yes = delta <= v.threshold;
    std::ostringstream os;
    os << "oracle " << delta << (v.yes ? " <= " : " > ") << v.threshold;
    if (!k.separates(alpha)) os << " (contract does not separate at this alpha)";
    v.detail = os.str();
    return v;
}

inline OfflineVerdict checker_verdict(const CheckResult& r) {
    OfflineVerdict v;
    v.yes = r.yes;
    v.estimate = r.stage1_distance;
    v.detail = r.yes ? "checker yes" : "checker no: " + r.reason;
    return v;
}

// Accuracy of the log-concave checker used inside the tester.
inline double tester_checker_eps(double alpha) { return std::min(alpha / 4.0, 0.99); }

inline LogConcaveCheckOptions tester_logconcave_options(double eps_c) {
    LogConcaveCheckOptions o;
    o.alpha = eps_c * eps_c * eps_c / 400.0;
    return o;
}

}  // namespace detail

inline ClassSpec make_class_spec(const ShapeClass& c) {
    ClassSpec s;
    s.shape = c;
    s.L = [c](double gamma, std::size_t n) { return splitting_bound(c, gamma, n); };
    s.M = [](std::size_t, double) { return std::optional<std::size_t>{}; };
    s.member = [c](const Histogram& h) { return is_member(h, c); };
    const OracleContract exact{};
    switch (c.kind) {
        case Kind::Monotone:
            s.offline = [c, exact](const Histogram& h, double a, const Histogram*) {
                return detail::oracle_verdict(dist_to_monotone(h, c.increasing), a, exact);
            };
            break;
        case Kind::Unimodal:
            s.offline = [exact](const Histogram& h, double a, const Histogram*) {
                return detail::oracle_verdict(dist_to_unimodal(h), a, exact);
            };
            break;
        case Kind::TModal:
            s.offline = [c, exact](const Histogram& h, double a, const Histogram*) {
                return detail::oracle_verdict(dist_to_tmodal(h, c.t), a, exact);
            };
            break;
        case Kind::Convex:
            s.offline = [exact](const Histogram& h, double a, const Histogram*) {
                return detail::oracle_verdict(dist_to_convex(h), a, exact);
            };
            break;
        case Kind::Concave:
            s.offline = [exact](const Histogram& h, double a, const Histogram*) {
                return detail::oracle_verdict(dist_to_concave(h), a, exact);
            };
            break;
        case Kind::HistogramT:
            s.offline = [c](const Histogram& h, double a, const Histogram*) {
                const double eo = a / 10.0;
                return detail::oracle_verdict(dist_to_histogram_t(h, c.t, eo), a, OracleContract{1.0, 4.0, eo});
            };
            break;
        case Kind::PiecewisePoly:
            s.offline = [c](const Histogram& h, double a, const Histogram*) {
                const double eo = 0.2 * a;
                return detail::oracle_verdict(dist_to_piecewise_poly(h, c.t, c.d, eo), a,
                                              OracleContract{1.0, 3.0, eo});
            };
            break;
        case Kind::MHR:
            s.needs_witness = true;
            s.witness_accuracy = [](double eps) {
                const double ec = detail::tester_checker_eps(eps);
                return ec * ec * ec / 2.0;
            };
            s.offline = [](const Histogram& h, double a, const Histogram* w) {
                if (!w) throw std::invalid_argument("MHR offline check needs a Kolmogorov witness");
                return detail::checker_verdict(mhr_check(h, *w, detail::tester_checker_eps(a)));
            };
            break;
        case Kind::LogConcave:
            s.needs_witness = true;
            s.witness_accuracy = [](double eps) {
                return detail::tester_logconcave_options(detail::tester_checker_eps(eps)).alpha / 2.0;
            };
            s.offline = [](const Histogram& h, double a, const Histogram* w) {
                if (!w) throw std::invalid_argument("log-concave offline check needs a Kolmogorov witness");
                const double ec = detail::tester_checker_eps(a);
                return detail::checker_verdict(logconcave_check(h, *w, ec, detail::tester_logconcave_options(ec)));
            };
            break;
        case Kind::PBD:
        case Kind::Binomial: {
            const bool pbd = c.kind == Kind::PBD;
            s.M = [](std::size_t n, double eps) {
                return std::optional<std::size_t>{std::min(n, pbd_effective_support_bound(n - 1, eps))};
            };
            s.offline = [pbd](const Histogram& h, double a, const Histogram*) {
                const double e = std::min(a, 0.99);
                const Interval full{1, h.n()};
                const double d = pbd ? dist_to_pbd(h, e, full) : dist_to_binomial(h, e, full);
                return detail::oracle_verdict(d, a, OracleContract{1.0 - 2.0 * e, 1.0 + 2.0 * e, e / 100.0});
            };
            break;
        }
    }
    return s;
}

}  // namespace shapetest
