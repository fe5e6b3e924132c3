#pragma once

// Sample access to a distribution over [1,n].
//
// A source hands out single draws and, for bulk use, the count vector of m
// i.i.d. draws. Both paths advance consumed() by exactly the number of draws.

#include <concepts>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "histogram.hpp"

namespace shapetest {

using Engine = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-trial seed: mix64(master ^ mix64(index)).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index));
}

struct SourceExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
concept SampleSource = requires(S s, std::uint64_t m) {
    { s.n() } -> std::convertible_to<std::size_t>;
    { s.draw() } -> std::convertible_to<std::size_t>;
    { s.draw_counts(m) } -> std::convertible_to<std::vector<std::uint64_t>>;
    { s.consumed() } -> std::convertible_to<std::uint64_t>;
};

// Counts of m draws split over weights w (need not be normalized), by
// sequential conditional binomials.
template <class URBG>
std::vector<std::uint64_t> multinomial(const std::vector<double>& w, std::uint64_t m, URBG& rng) {
    std::vector<std::uint64_t> c(w.size(), 0);
    double rest = 0.0;
    for (double x : w) rest += x;
    std::uint64_t left = m;
    for (std::size_t i = 0; i < w.size() && left > 0; ++i) {
        if (w[i] <= 0.0) continue;
        const double p = rest > 0.0 ? std::min(1.0, w[i] / rest) : 1.0;
        std::uint64_t k;
        if (p >= 1.0) {
            k = left;
        } else {
            std::binomial_distribution<long long> bin(static_cast<long long>(left), p);
            k = static_cast<std::uint64_t>(bin(rng));
        }
        c[i] = k;
        left -= k;
        rest -= w[i];
    }
    // Rounding in `rest` can strand a few draws; give them to the last
    // positive weight.
    if (left > 0) {
        for (std::size_t i = w.size(); i-- > 0;)
            if (w[i] > 0.0) {
                c[i] += left;
                break;
            }
    }
    return c;
}

// Walker alias table over a histogram.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& p) : prob_(p.size()), alias_(p.size()) {
        const std::size_t n = p.size();
        std::vector<double> scaled(n);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = p[i] * static_cast<double>(n);
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) prob_[i] = 1.0, alias_[i] = i;
        for (std::size_t i : small) prob_[i] = 1.0, alias_[i] = i;
    }

    template <class URBG>
    std::size_t operator()(URBG& rng) const {
        std::uniform_int_distribution<std::size_t> col(0, prob_.size() - 1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t k = col(rng);
        return u(rng) < prob_[k] ? k : alias_[k];
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

// Seeded i.i.d. source backed by an explicit histogram.
class HistogramSource {
public:
    HistogramSource(const Histogram& d, std::uint64_t seed)
        : masses_(d.masses()), table_(d.masses()), rng_(seed) {}

    std::size_t n() const { return masses_.size(); }
    std::uint64_t consumed() const { return consumed_; }

    // Optional cap on total draws; exceeding it throws SourceExhausted.
    void set_limit(std::uint64_t limit) { limit_ = limit; }

    std::size_t draw() {
        charge(1);
        return table_(rng_) + 1;
    }

    std::vector<std::uint64_t> draw_counts(std::uint64_t m) {
        charge(m);
        return multinomial(masses_, m, rng_);
    }

    Engine& engine() { return rng_; }

private:
    void charge(std::uint64_t m) {
        if (limit_ && consumed_ + m > limit_) throw SourceExhausted("sample budget exhausted");
        consumed_ += m;
    }

    std::vector<double> masses_;
    AliasTable table_;
    Engine rng_;
    std::uint64_t consumed_ = 0;
    std::uint64_t limit_ = 0;
};

inline HistogramSource sample(const Histogram& d, std::uint64_t seed) { return HistogramSource(d, seed); }

// Generic bulk draw for sources without a native counts path.
template <SampleSource S>
std::vector<std::uint64_t> draw_counts_by_loop(S& src, std::uint64_t m) {
    std::vector<std::uint64_t> c(src.n(), 0);
    for (std::uint64_t k = 0; k < m; ++k) ++c[src.draw() - 1];
    return c;
}

// Keeps each of the counts independently with probability q.
template <class URBG>
std::vector<std::uint64_t> thin_counts(const std::vector<std::uint64_t>& c, double q, URBG& rng) {
    std::vector<std::uint64_t> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        std::binomial_distribution<long long> bin(static_cast<long long>(c[i]), q);
        out[i] = static_cast<std::uint64_t>(bin(rng));
    }
    return out;
}

}  // namespace shapetest
