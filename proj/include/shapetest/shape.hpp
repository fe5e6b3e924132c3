#pragma once

// Shape-class tags and the definitional membership checks.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "histogram.hpp"

namespace shapetest {

enum class Kind {
    Monotone,
    Unimodal,
    TModal,
    Convex,
    Concave,
    LogConcave,
    MHR,
    HistogramT,
    PiecewisePoly,
    PBD,
    Binomial,
};

struct ShapeClass {
    Kind kind = Kind::Monotone;
    int t = 0;                // TModal, HistogramT, PiecewisePoly
    int d = 0;                // PiecewisePoly degree
    bool increasing = false;  // Monotone direction

    static ShapeClass monotone(bool increasing = false) { return {Kind::Monotone, 0, 0, increasing}; }
    static ShapeClass unimodal() { return {Kind::Unimodal}; }
    static ShapeClass tmodal(int t) { return {Kind::TModal, t}; }
    static ShapeClass convex() { return {Kind::Convex}; }
    static ShapeClass concave() { return {Kind::Concave}; }
    static ShapeClass logconcave() { return {Kind::LogConcave}; }
    static ShapeClass mhr() { return {Kind::MHR}; }
    static ShapeClass histogram(int t) { return {Kind::HistogramT, t}; }
    static ShapeClass piecewise_poly(int t, int d) { return {Kind::PiecewisePoly, t, d}; }
    static ShapeClass pbd() { return {Kind::PBD}; }
    static ShapeClass binomial() { return {Kind::Binomial}; }

    std::string name() const {
        switch (kind) {
            case Kind::Monotone: return increasing ? "monotone-inc" : "monotone";
            case Kind::Unimodal: return "unimodal";
            case Kind::TModal: return "tmodal";
            case Kind::Convex: return "convex";
            case Kind::Concave: return "concave";
            case Kind::LogConcave: return "logconcave";
            case Kind::MHR: return "mhr";
            case Kind::HistogramT: return "histogram";
            case Kind::PiecewisePoly: return "piecewise-poly";
            case Kind::PBD: return "pbd";
            case Kind::Binomial: return "binomial";
        }
        return "?";
    }

    // Accepts the names produced by name(); t and d come from the caller.
    static std::optional<ShapeClass> parse(const std::string& s, int t = 1, int d = 0) {
        if (s == "monotone") return monotone(false);
        if (s == "monotone-inc") return monotone(true);
        if (s == "unimodal") return unimodal();
        if (s == "tmodal") return tmodal(t);
        if (s == "convex") return convex();
        if (s == "concave") return concave();
        if (s == "logconcave") return logconcave();
        if (s == "mhr") return mhr();
        if (s == "histogram") return histogram(t);
        if (s == "piecewise-poly") return piecewise_poly(t, d);
        if (s == "pbd") return pbd();
        if (s == "binomial") return binomial();
        return std::nullopt;
    }
};

struct UnsupportedClass : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool support_is_interval(const std::vector<double>& m) {
    std::size_t first = m.size(), last = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0.0) {
            if (first == m.size()) first = i;
            last = i;
        }
    for (std::size_t i = first; i < last; ++i)
        if (m[i] == 0.0) return false;
    return true;
}

// Number of strict direction changes once ties (within tol) are merged.
inline int turning_points(const std::vector<double>& m) {
    int dir = 0, turns = 0;
    double last = m.empty() ? 0.0 : m[0];
    for (std::size_t i = 1; i < m.size(); ++i) {
        const double diff = m[i] - last;
        if (std::abs(diff) <= prob_tol) continue;
        const int s = diff > 0 ? 1 : -1;
        if (dir != 0 && s != dir) ++turns;
        dir = s;
        last = m[i];
    }
    return turns;
}

inline bool is_monotone(const std::vector<double>& m, bool increasing) {
    for (std::size_t i = 1; i < m.size(); ++i) {
        const double diff = increasing ? m[i - 1] - m[i] : m[i] - m[i - 1];
        if (diff > prob_tol) return false;
    }
    return true;
}

// Single peak: non-decreasing, then non-increasing.
inline bool is_single_peak(const std::vector<double>& m) {
    std::size_t i = 1;
    while (i < m.size() && m[i] >= m[i - 1] - prob_tol) ++i;
    for (; i < m.size(); ++i)
        if (m[i] > m[i - 1] + prob_tol) return false;
    return true;
}

inline bool is_logconcave(const std::vector<double>& m) {
    if (!support_is_interval(m)) return false;
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
        const double lhs = m[k] * m[k];
        const double rhs = m[k - 1] * m[k + 1];
        if (lhs < rhs - 1e-9 * std::max(lhs, rhs) - 1e-300) return false;
    }
    return true;
}

inline bool is_concave_or_convex(const std::vector<double>& m, bool concave) {
    if (!support_is_interval(m)) return false;
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
        if (!(m[k - 1] > 0.0 && m[k + 1] > 0.0)) continue;
        const double gap = 2.0 * m[k] - m[k - 1] - m[k + 1];
        if (concave ? gap < -prob_tol : gap > prob_tol) return false;
    }
    return true;
}

// Hazard rate is non-decreasing from the first to the last nonzero mass.
inline bool is_mhr(const Histogram& h) {
    const Interval s = h.support();
    const auto& m = h.masses();
    for (std::size_t i = s.lo; i <= s.hi; ++i)
        if (m[i - 1] == 0.0) return false;
    double prev = 0.0;
    for (std::size_t i = s.lo; i <= s.hi; ++i) {
        const double t = h.tail(i);
        const double haz = t > 0.0 ? std::min(1.0, m[i - 1] / t) : 1.0;
        if (haz < prev - prob_tol) return false;
        prev = std::max(prev, haz);
    }
    return true;
}

// Fewest constant runs covering the sequence.
inline std::size_t constant_runs(const std::vector<double>& m) {
    std::size_t runs = m.empty() ? 0 : 1;
    for (std::size_t i = 1; i < m.size(); ++i)
        if (std::abs(m[i] - m[i - 1]) > prob_tol) ++runs;
    return runs;
}

// Fewest pieces that are each a polynomial of degree <= d, by greedy
// extension: a window is polynomial iff its (d+1)-th differences vanish.
inline std::size_t polynomial_pieces(const std::vector<double>& m, int d) {
    const std::size_t n = m.size();
    const std::size_t w = static_cast<std::size_t>(d) + 2;  // points per difference
    std::size_t pieces = 0, start = 0;
    const double scale = std::ldexp(1.0, d + 1);
    while (start < n) {
        ++pieces;
        std::size_t end = start + 1;  // exclusive
        while (end < n) {
            if (end + 1 - start >= w) {
                std::vector<double> diff(m.begin() + static_cast<long>(end + 1 - w),
                                         m.begin() + static_cast<long>(end + 1));
                for (std::size_t r = 0; r + 1 < w; ++r)
                    for (std::size_t j = 0; j + 1 < diff.size() - r; ++j) diff[j] = diff[j + 1] - diff[j];
                if (std::abs(diff[0]) > prob_tol * scale) break;
            }
            ++end;
        }
        start = end;
    }
    return pieces;
}

inline double log_binom_pmf(std::size_t N, std::size_t k, double q) {
    if (q <= 0.0) return k == 0 ? 0.0 : -INFINITY;
    if (q >= 1.0) return k == N ? 0.0 : -INFINITY;
    return std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) +
           static_cast<double>(k) * std::log(q) + static_cast<double>(N - k) * std::log1p(-q);
}

}  // namespace detail

// Bin(N, q) over {0..N}, stored on N+1 points.
inline Histogram binomial_pmf(std::size_t N, double q) {
    std::vector<double> m(N + 1);
    for (std::size_t k = 0; k <= N; ++k) m[k] = std::exp(detail::log_binom_pmf(N, k, q));
    return Histogram::from_weights(std::move(m));
}

inline bool is_member(const Histogram& h, const ShapeClass& c) {
    const auto& m = h.masses();
    switch (c.kind) {
        case Kind::Monotone: return detail::is_monotone(m, c.increasing);
        case Kind::Unimodal: return detail::is_single_peak(m);
        case Kind::TModal: return detail::turning_points(m) <= c.t;
        case Kind::Convex: return detail::is_concave_or_convex(m, false);
        case Kind::Concave: return detail::is_concave_or_convex(m, true);
        case Kind::LogConcave: return detail::is_logconcave(m);
        case Kind::MHR: return detail::is_mhr(h);
        case Kind::HistogramT: return detail::constant_runs(m) <= static_cast<std::size_t>(c.t);
        case Kind::PiecewisePoly:
            return detail::polynomial_pieces(m, c.d) <= static_cast<std::size_t>(c.t);
        case Kind::Binomial: {
            const std::size_t N = h.n() - 1;
            double mean = 0.0;
            for (std::size_t k = 0; k <= N; ++k) mean += static_cast<double>(k) * m[k];
            const double q = N == 0 ? 0.5 : mean / static_cast<double>(N);
            const Histogram b = binomial_pmf(N, q);
            for (std::size_t k = 0; k <= N; ++k)
                if (std::abs(b.masses()[k] - m[k]) > prob_tol) return false;
            return true;
        }
        case Kind::PBD:
            throw UnsupportedClass("PBD membership is not decidable from the pmf; use dist_to_pbd");
    }
    return false;
}

}  // namespace shapetest
