#pragma once

// Constructive (gamma, L)-decompositions and their verifier.
//
// A piece is light when its mass is at most gamma/L and flat when
// max <= (1+gamma) min over the piece.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "histogram.hpp"
#include "shape.hpp"

namespace shapetest {

enum class PieceKind { Light, Flat };

struct DecompositionCert {
    Partition partition;
    std::vector<PieceKind> kinds;
    double gamma = 0.0;
    double L = 0.0;  // bound the light condition is measured against

    std::size_t size() const { return partition.size(); }
};

// Leaves of the monotone bisection when the light threshold is gamma/lambda:
// ceil(log2 n) levels, each with at most 1 + ln(n lambda/gamma)/ln(1+gamma)
// internal nodes, plus one for leaves = internal + 1.
inline double monotone_piece_bound(std::size_t n, double gamma, double lambda) {
    const double levels = std::max(1u, ceil_log2(n));
    const double per_level = 1.0 + std::log(static_cast<double>(n) * lambda / gamma) / std::log1p(gamma);
    return std::ceil(levels * per_level) + 1.0;
}

// Piece count of decompose_mhr with light threshold gamma/lambda. The band is
// sqrt(1+gamma) so two counts of ln(.)/ln sqrt(1+gamma) intervals, plus the
// three boundary pieces and the last band interval.
inline double mhr_piece_bound(std::size_t n, double gamma, double lambda) {
    const double nn = static_cast<double>(n);
    const double down = std::log(lambda / gamma);
    const double up = std::log(nn * lambda * lambda / (gamma * gamma));
    return std::ceil((down + up) / (0.5 * std::log1p(gamma))) + 4.0;
}

// Smallest L with L >= factor * piece_bound(n, gamma, L), found by fixed-point
// iteration from log2(n)^2/gamma. piece_bound grows like log L, so the map is
// a contraction near its fixed point.
template <class PieceBound>
double fixed_point_bound(std::size_t n, double gamma, double factor, PieceBound piece_bound) {
    const double lg = std::max(1u, ceil_log2(n));
    double L = std::max(1.0, lg * lg / gamma);
    for (int it = 0; it < 200; ++it) {
        const double next = std::ceil(factor * piece_bound(n, gamma, L));
        if (next == L) break;
        L = next;
    }
    return L;
}

// L_M(gamma, n): monotone distributions, bisection from [1,n].
inline double monotone_bound(std::size_t n, double gamma) {
    return fixed_point_bound(n, gamma, 1.0, monotone_piece_bound);
}

namespace detail {

inline bool piece_light(const Histogram& d, const Interval& I, double gamma, double L) {
    return d.mass(I) <= gamma / L * (1.0 + 1e-12) + 1e-18;
}

inline bool piece_flat(const Histogram& d, const Interval& I, double gamma) {
    double lo = d(I.lo), hi = d(I.lo);
    for (std::size_t i = I.lo + 1; i <= I.hi; ++i) {
        lo = std::min(lo, d(i));
        hi = std::max(hi, d(i));
    }
    return hi <= (1.0 + gamma) * lo * (1.0 + 1e-12);
}

inline void bisect_monotone(const Histogram& d, const Interval& I, double gamma, double L,
                            DecompositionCert& out) {
    if (piece_light(d, I, gamma, L)) {
        out.partition.intervals.push_back(I);
        out.kinds.push_back(PieceKind::Light);
        return;
    }
    // On a monotone run the extremes sit at the two ends.
    const double a = d(I.lo), b = d(I.hi);
    if (std::max(a, b) <= (1.0 + gamma) * std::min(a, b) * (1.0 + 1e-12)) {
        out.partition.intervals.push_back(I);
        out.kinds.push_back(PieceKind::Flat);
        return;
    }
    const std::size_t left = (I.size() + 1) / 2;
    bisect_monotone(d, {I.lo, I.lo + left - 1}, gamma, L, out);
    bisect_monotone(d, {I.lo + left, I.hi}, gamma, L, out);
}

// Maximal monotone runs, each extended as far as one direction allows.
inline std::vector<Interval> monotone_runs(const std::vector<double>& m) {
    std::vector<Interval> runs;
    std::size_t start = 0;
    while (start < m.size()) {
        int dir = 0;
        std::size_t end = start;
        while (end + 1 < m.size()) {
            const double diff = m[end + 1] - m[end];
            const int s = std::abs(diff) <= prob_tol ? 0 : (diff > 0 ? 1 : -1);
            if (s != 0 && dir != 0 && s != dir) break;
            if (s != 0) dir = s;
            ++end;
        }
        runs.push_back({start + 1, end + 1});
        start = end + 1;
    }
    return runs;
}

}  // namespace detail

// Bisection of a monotone run I of d with light threshold gamma/L.
inline DecompositionCert decompose_monotone_range(const Histogram& d, const Interval& I, double gamma,
                                                  double L) {
    DecompositionCert cert;
    cert.gamma = gamma;
    cert.L = L;
    detail::bisect_monotone(d, I, gamma, L, cert);
    return cert;
}

inline DecompositionCert decompose_monotone(const Histogram& d, double gamma, double L = 0.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("decompose: gamma must be positive");
    const auto& m = d.masses();
    if (!detail::is_monotone(m, false) && !detail::is_monotone(m, true))
        throw std::invalid_argument("decompose_monotone: input is not monotone");
    if (L <= 0.0) L = monotone_bound(d.n(), gamma);
    return decompose_monotone_range(d, {1, d.n()}, gamma, L);
}

// Longest suffix of J with mass <= theta, or its last point alone when that
// point is heavier than theta. J must be nonempty.
inline Interval right_interval(const Histogram& d, const Interval& J, double theta) {
    std::size_t lo = J.hi;
    if (d(J.hi) > theta) return {J.hi, J.hi};
    while (lo > J.lo && d.mass({lo - 1, J.hi}) <= theta) --lo;
    return {lo, J.hi};
}

// MHR decomposition: two right intervals of mass <= gamma/L, a low-mass
// prefix of points below gamma/(nL), then a left-to-right sweep that closes
// a piece as soon as a point leaves the sqrt(1+gamma) band around the piece's
// first point. L defaults to n.
inline DecompositionCert decompose_mhr(const Histogram& d, double gamma, double L = 0.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("decompose: gamma must be positive");
    if (!detail::is_mhr(d)) throw std::invalid_argument("decompose_mhr: input is not MHR");
    const std::size_t n = d.n();
    if (L <= 0.0) L = static_cast<double>(n);
    const double theta = gamma / L;
    const double floor = gamma / (static_cast<double>(n) * L);
    const double band = std::sqrt(1.0 + gamma);

    DecompositionCert cert;
    cert.gamma = gamma;
    cert.L = L;
    std::vector<Interval> tail;  // I then I', right to left
    std::size_t hi = n;          // J = [1, hi]
    for (int k = 0; k < 2 && hi >= 1; ++k) {
        const Interval I = right_interval(d, {1, hi}, theta);
        tail.push_back(I);
        hi = I.lo - 1;
    }
    auto add = [&](const Interval& I) {
        cert.partition.intervals.push_back(I);
        cert.kinds.push_back(I.size() == 1 || detail::piece_flat(d, I, gamma) ? PieceKind::Flat
                                                                                : PieceKind::Light);
    };
    if (hi >= 1) {
        std::size_t i = 1;
        while (i <= hi && d(i) < floor) ++i;
        if (i > 1) add({1, std::min(i - 1, hi)});
        while (i <= hi) {
            const double ref = d(i);
            std::size_t j = i + 1;
            while (j <= hi && d(j) >= ref / band && d(j) <= ref * band) ++j;
            add({i, j - 1});
            i = j;
        }
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) add(*it);
    return cert;
}

// Count multiplier applied to the per-run monotone bound.
inline double monotone_runs_allowed(const ShapeClass& c) {
    switch (c.kind) {
        case Kind::Monotone: return 1.0;
        case Kind::Unimodal:
        case Kind::Convex:
        case Kind::Concave:
        case Kind::LogConcave:
        case Kind::PBD:
        case Kind::Binomial: return 2.0;
        case Kind::TModal: return c.t + 1.0;
        case Kind::PiecewisePoly: return static_cast<double>(c.t) * (c.d + 1.0);
        case Kind::HistogramT:
        case Kind::MHR: return 0.0;
    }
    return 0.0;
}

// Decomposition bound L(gamma, n) of the class, before dyadic refinement.
inline double decomposition_bound(const ShapeClass& c, std::size_t n, double gamma) {
    if (c.kind == Kind::HistogramT) return static_cast<double>(c.t);
    if (c.kind == Kind::MHR) return std::min(static_cast<double>(n), fixed_point_bound(n, gamma, 1.0, mhr_piece_bound));
    return fixed_point_bound(n, gamma, monotone_runs_allowed(c), monotone_piece_bound);
}

inline DecompositionCert decompose_class(const Histogram& d, const ShapeClass& c, double gamma,
                                         double L = 0.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("decompose: gamma must be positive");
    if (L <= 0.0) L = decomposition_bound(c, d.n(), gamma);
    switch (c.kind) {
        case Kind::Monotone:
            if (!is_member(d, c)) throw std::invalid_argument("decompose_class: membership failure");
            return decompose_monotone(d, gamma, L);
        case Kind::MHR: return decompose_mhr(d, gamma, L);
        case Kind::HistogramT: {
            if (!is_member(d, c)) throw std::invalid_argument("decompose_class: membership failure");
            DecompositionCert cert;
            cert.gamma = gamma;
            cert.L = L;
            const auto& m = d.masses();
            std::size_t lo = 1;
            for (std::size_t i = 1; i <= d.n(); ++i)
                if (i == d.n() || std::abs(m[i] - m[i - 1]) > prob_tol) {
                    cert.partition.intervals.push_back({lo, i});
                    cert.kinds.push_back(PieceKind::Flat);
                    lo = i + 1;
                }
            return cert;
        }
        case Kind::PBD:
            if (!detail::is_logconcave(d.masses()))
                throw std::invalid_argument("decompose_class: a PBD pmf must be log-concave");
            break;
        default:
            if (!is_member(d, c)) throw std::invalid_argument("decompose_class: membership failure");
    }
    DecompositionCert cert;
    cert.gamma = gamma;
    cert.L = L;
    for (const auto& run : detail::monotone_runs(d.masses())) {
        const auto part = decompose_monotone_range(d, run, gamma, L);
        cert.partition.intervals.insert(cert.partition.intervals.end(), part.partition.begin(),
                                        part.partition.end());
        cert.kinds.insert(cert.kinds.end(), part.kinds.begin(), part.kinds.end());
    }
    return cert;
}

inline bool verify_partition(const Histogram& d, const Partition& p, double gamma, double L_bound) {
    if (!p.covers(d.n()) || static_cast<double>(p.size()) > L_bound) return false;
    for (const auto& I : p)
        if (!detail::piece_light(d, I, gamma, L_bound) && !detail::piece_flat(d, I, gamma)) return false;
    return true;
}

inline bool verify_decomposition(const Histogram& d, const DecompositionCert& cert, double gamma,
                                 double L_bound) {
    if (cert.kinds.size() != cert.partition.size()) return false;
    return verify_partition(d, cert.partition, gamma, L_bound);
}

}  // namespace shapetest
