#pragma once

// Explicit distributions over {1..n}, intervals and partitions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapetest {

// Absolute tolerance for probability comparisons.
inline constexpr double prob_tol = 1e-9;
// Inputs whose total mass is within this of 1 are renormalized.
inline constexpr double renorm_tol = 1e-6;

struct Interval {
    std::size_t lo = 1;  // 1-based, inclusive
    std::size_t hi = 1;

    std::size_t size() const { return hi - lo + 1; }
    bool contains(std::size_t i) const { return lo <= i && i <= hi; }
    bool is_dyadic() const {
        const std::size_t s = size();
        return (s & (s - 1)) == 0 && (lo - 1) % s == 0;
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Partition {
    std::vector<Interval> intervals;

    std::size_t size() const { return intervals.size(); }
    bool empty() const { return intervals.empty(); }
    const Interval& operator[](std::size_t k) const { return intervals[k]; }
    auto begin() const { return intervals.begin(); }
    auto end() const { return intervals.end(); }
    friend bool operator==(const Partition&, const Partition&) = default;

    // True iff the intervals are contiguous, ordered and cover [1,n].
    bool covers(std::size_t n) const {
        if (intervals.empty() || n == 0) return false;
        std::size_t next = 1;
        for (const auto& I : intervals) {
            if (I.lo != next || I.hi < I.lo) return false;
            next = I.hi + 1;
        }
        return next == n + 1;
    }

    static Partition whole(std::size_t n) { return Partition{{Interval{1, n}}}; }

    static Partition singletons(std::size_t n) {
        Partition p;
        p.intervals.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) p.intervals.push_back({i, i});
        return p;
    }

    // Builds a partition from the sorted right endpoints of its pieces.
    static Partition from_right_ends(const std::vector<std::size_t>& ends) {
        Partition p;
        std::size_t lo = 1;
        for (std::size_t e : ends) {
            p.intervals.push_back({lo, e});
            lo = e + 1;
        }
        return p;
    }

    std::vector<std::size_t> right_ends() const {
        std::vector<std::size_t> out;
        out.reserve(intervals.size());
        for (const auto& I : intervals) out.push_back(I.hi);
        return out;
    }

    // True iff every interval of *this lies inside one interval of coarse.
    bool refines(const Partition& coarse) const {
        std::size_t k = 0;
        for (const auto& I : intervals) {
            while (k < coarse.size() && coarse[k].hi < I.lo) ++k;
            if (k == coarse.size() || coarse[k].lo > I.lo || coarse[k].hi < I.hi)
                return false;
        }
        return true;
    }
};

class Histogram {
public:
    Histogram() = default;

    // Masses are renormalized when within renorm_tol of unit total.
    // breakpoints, if given, are the right ends of pieces on which the masses
    // are constant; the last one must be n.
    explicit Histogram(std::vector<double> masses, std::vector<std::size_t> breakpoints = {})
        : masses_(std::move(masses)), breaks_(std::move(breakpoints)) {
        if (masses_.empty()) throw std::invalid_argument("histogram: empty domain");
        double total = 0.0;
        for (double& x : masses_) {
            if (!std::isfinite(x)) throw std::invalid_argument("histogram: non-finite mass");
            if (x < 0.0) {
                if (x < -1e-12) throw std::invalid_argument("histogram: negative mass");
                x = 0.0;
            }
            total += x;
        }
        if (std::abs(total - 1.0) > renorm_tol)
            throw std::invalid_argument("histogram: total mass " + std::to_string(total) +
                                        " is not 1");
        if (std::abs(total - 1.0) > 1e-12)
            for (double& x : masses_) x /= total;
        build_prefix();
        if (!breaks_.empty()) check_breakpoints();
    }

    static Histogram uniform(std::size_t n) { return Histogram(std::vector<double>(n, 1.0 / n), {n}); }

    static Histogram point_mass(std::size_t n, std::size_t k) {
        std::vector<double> m(n, 0.0);
        m.at(k - 1) = 1.0;
        return Histogram(std::move(m));
    }

    // Normalizes arbitrary non-negative weights.
    static Histogram from_weights(std::vector<double> w) {
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        if (!(s > 0.0)) throw std::invalid_argument("histogram: weights sum to zero");
        for (double& x : w) x /= s;
        return Histogram(std::move(w));
    }

    std::size_t n() const { return masses_.size(); }
    const std::vector<double>& masses() const { return masses_; }
    const std::vector<std::size_t>& breakpoints() const { return breaks_; }
    bool has_breakpoints() const { return !breaks_.empty(); }

    // 1-based point mass.
    double operator()(std::size_t i) const { return masses_[i - 1]; }
    double mass(const Interval& I) const { return prefix_[I.hi] - prefix_[I.lo - 1]; }
    // CDF at i, i.e. D({1..i}); cdf(0) = 0.
    double cdf(std::size_t i) const { return prefix_[i]; }
    // D({i..n}), summed from the right so that small tails keep precision.
    double tail(std::size_t i) const { return suffix_[i - 1]; }

    // Pieces of the certified structure, or singletons when none is recorded.
    Partition pieces() const {
        return breaks_.empty() ? Partition::singletons(n()) : Partition::from_right_ends(breaks_);
    }

    // Indices of first and last nonzero mass (1-based).
    Interval support() const {
        std::size_t lo = 1, hi = n();
        while (lo < hi && masses_[lo - 1] == 0.0) ++lo;
        while (hi > lo && masses_[hi - 1] == 0.0) --hi;
        return {lo, hi};
    }

private:
    void build_prefix() {
        prefix_.assign(masses_.size() + 1, 0.0);
        for (std::size_t i = 0; i < masses_.size(); ++i) prefix_[i + 1] = prefix_[i] + masses_[i];
        suffix_.assign(masses_.size() + 1, 0.0);
        for (std::size_t i = masses_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + masses_[i];
    }

    void check_breakpoints() const {
        if (!std::is_sorted(breaks_.begin(), breaks_.end()) || breaks_.back() != n() ||
            breaks_.front() == 0)
            throw std::invalid_argument("histogram: malformed breakpoints");
        std::size_t lo = 0;
        for (std::size_t e : breaks_) {
            if (e <= lo && lo != 0) throw std::invalid_argument("histogram: repeated breakpoint");
            for (std::size_t i = lo + 1; i < e; ++i)
                if (std::abs(masses_[i] - masses_[lo]) > 1e-12)
                    throw std::invalid_argument("histogram: masses not constant on a piece");
            lo = e;
        }
    }

    std::vector<double> masses_;
    std::vector<std::size_t> breaks_;
    std::vector<double> prefix_;
    std::vector<double> suffix_;
};

inline void require_same_domain(const Histogram& a, const Histogram& b) {
    if (a.n() != b.n()) throw std::invalid_argument("dimension mismatch");
}

inline double l1_distance(const Histogram& a, const Histogram& b) {
    require_same_domain(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i) s += std::abs(a.masses()[i] - b.masses()[i]);
    return s;
}

inline double kolmogorov_distance(const Histogram& a, const Histogram& b) {
    require_same_domain(a, b);
    double best = 0.0;
    for (std::size_t i = 1; i <= a.n(); ++i) best = std::max(best, std::abs(a.cdf(i) - b.cdf(i)));
    return best;
}

inline Histogram empirical_from_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t m = 0;
    for (auto c : counts) m += c;
    if (m == 0) throw std::invalid_argument("empirical: empty sample set");
    std::vector<double> w(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        w[i] = static_cast<double>(counts[i]) / static_cast<double>(m);
    return Histogram(std::move(w));
}

inline std::vector<std::uint64_t> counts_from_samples(const std::vector<std::size_t>& samples,
                                                      std::size_t n) {
    std::vector<std::uint64_t> c(n, 0);
    for (std::size_t s : samples) {
        if (s < 1 || s > n) throw std::out_of_range("sample outside [1,n]");
        ++c[s - 1];
    }
    return c;
}

inline Histogram empirical_from_samples(const std::vector<std::size_t>& samples, std::size_t n) {
    if (samples.empty()) throw std::invalid_argument("empirical: empty sample set");
    return empirical_from_counts(counts_from_samples(samples, n));
}

// Spreads the mass of each piece uniformly over it.
inline Histogram flatten(const Histogram& d, const Partition& p) {
    if (!p.covers(d.n())) throw std::invalid_argument("flatten: partition does not cover [1,n]");
    std::vector<double> out(d.n());
    for (const auto& I : p) {
        // Constant pieces are copied so that flattening is exactly idempotent.
        const bool flat = std::all_of(d.masses().begin() + static_cast<long>(I.lo - 1),
                                      d.masses().begin() + static_cast<long>(I.hi),
                                      [&](double x) { return x == d(I.lo); });
        const double v = flat ? d(I.lo) : d.mass(I) / static_cast<double>(I.size());
        for (std::size_t i = I.lo; i <= I.hi; ++i) out[i - 1] = v;
    }
    return Histogram(std::move(out), p.right_ends());
}

// Conditional distribution D_I over |I| points.
inline Histogram conditional_restrict(const Histogram& d, const Interval& I) {
    if (I.lo < 1 || I.hi > d.n() || I.lo > I.hi) throw std::out_of_range("restrict: bad interval");
    const double w = d.mass(I);
    if (!(w > 0.0)) throw std::invalid_argument("restrict: zero conditional mass");
    std::vector<double> out(I.size());
    for (std::size_t i = I.lo; i <= I.hi; ++i) out[i - I.lo] = d(i) / w;
    return Histogram(std::move(out));
}

// Embeds a histogram over |I| points back into [1,n] (zero outside I).
inline Histogram embed(const Histogram& h, const Interval& I, std::size_t n) {
    if (h.n() != I.size() || I.hi > n) throw std::invalid_argument("embed: size mismatch");
    std::vector<double> out(n, 0.0);
    std::copy(h.masses().begin(), h.masses().end(), out.begin() + static_cast<long>(I.lo - 1));
    return Histogram(std::move(out));
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline unsigned ceil_log2(std::size_t n) {
    unsigned k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

// Zero-mass tail up to the next power of two.
inline Histogram pad_to_pow2(const Histogram& d) {
    const std::size_t N = next_pow2(d.n());
    if (N == d.n()) return d;
    std::vector<double> m = d.masses();
    m.resize(N, 0.0);
    return Histogram(std::move(m));
}

// Splits every interval into dyadic blocks, taking at each left end the
// largest aligned block that still fits.
inline Partition dyadic_refine(const Partition& p, std::size_t n) {
    if (!p.covers(n)) throw std::invalid_argument("dyadic_refine: partition does not cover [1,n]");
    Partition out;
    for (const auto& I : p) {
        std::size_t a = I.lo;
        while (a <= I.hi) {
            std::size_t s = 1;
            while ((a - 1) % (2 * s) == 0 && a + 2 * s - 1 <= I.hi) s *= 2;
            out.intervals.push_back({a, a + s - 1});
            a += s;
        }
    }
    return out;
}

}  // namespace shapetest
