#pragma once

// Lower-bound instances and reductions: the paired uniformity family, the
// sum of uniform integers, the truncated 2/3-norm, testing by narrowing, and
// the embedding of uniformity into binomial tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "classes.hpp"
#include "histogram.hpp"
#include "sampling.hpp"
#include "shape.hpp"
#include "splittable.hpp"

namespace shapetest {

// Pairs (2j-1, 2j) get masses ((1 + s_j eps)/n, (1 - s_j eps)/n).
inline Histogram paninski_instance(std::size_t n, double epsilon, const std::vector<int>& signs) {
    if (n == 0 || n % 2) throw std::invalid_argument("paninski_instance: n must be even and positive");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("paninski_instance: eps must be in [0,1]");
    if (signs.size() != n / 2) throw std::invalid_argument("paninski_instance: need one sign per pair");
    std::vector<double> m(n);
    const double u = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double s = signs[j] >= 0 ? 1.0 : -1.0;
        m[2 * j] = (1.0 + s * epsilon) * u;
        m[2 * j + 1] = (1.0 - s * epsilon) * u;
    }
    return Histogram(std::move(m));
}

inline Histogram paninski_instance(std::size_t n, double epsilon, std::uint64_t sign_seed) {
    if (n == 0 || n % 2) throw std::invalid_argument("paninski_instance: n must be even and positive");
    Engine rng(sign_seed);
    std::vector<int> signs(n / 2);
    for (auto& s : signs) s = (rng() & 1u) ? 1 : -1;
    return paninski_instance(n, epsilon, signs);
}

// Law of X_1 + ... + X_n with X_i uniform on {0..k-1}, on n(k-1)+1 points.
inline Histogram ksiirv_hard_instance(std::size_t n, std::size_t k) {
    if (n == 0 || k == 0) throw std::invalid_argument("ksiirv_hard_instance: n and k must be positive");
    if (n * k > 1000000) throw std::invalid_argument("ksiirv_hard_instance: n*k exceeds 1e6");
    std::vector<double> p{1.0}, next;
    const double w = 1.0 / static_cast<double>(k);
    for (std::size_t step = 0; step < n; ++step) {
        next.assign(p.size() + k - 1, 0.0);
        // Sliding window sum of the last k entries on the rising half only;
        // subtracting on the falling side would cancel away the tail. Every
        // step is symmetric, so the other half is a mirror.
        const std::size_t last = next.size() - 1;
        double run = 0.0;
        for (std::size_t v = 0; 2 * v <= last; ++v) {
            if (v < p.size()) run += p[v];
            if (v >= k) run -= p[v - k];
            next[v] = next[last - v] = std::max(0.0, run) * w;
        }
        p.swap(next);
    }
    return Histogram::from_weights(std::move(p));
}

// Drop the largest mass, then the smallest masses while their total stays
// <= eps0; return (sum of the rest^(2/3))^(3/2).
inline double truncated_twothirds_norm(const Histogram& d, double eps0) {
    if (!(eps0 >= 0.0 && eps0 < 1.0)) throw std::invalid_argument("truncated_twothirds_norm: eps0 must be in [0,1)");
    std::vector<double> m = d.masses();
    std::sort(m.begin(), m.end());
    m.pop_back();
    std::size_t lo = 0;
    double removed = 0.0;
    while (lo < m.size() && removed + m[lo] <= eps0) removed += m[lo++];
    double s = 0.0;
    for (std::size_t i = lo; i < m.size(); ++i) s += std::cbrt(m[i] * m[i]);
    return std::pow(s, 1.5);
}

// Tester for C composed with a learner, narrowed to an explicit C_Hard.
template <SampleSource S = HistogramSource>
struct ReductionSpec {
    ClassSpec outer;
    Histogram hard;
    double epsilon = 0.0;
    double c_agn = 1.0;
    // (source, eps, seed) -> accept?
    std::function<bool(S&, double, std::uint64_t)> tester;
    // (source, eps) -> hypothesis
    std::function<Histogram(S&, double)> learner;

    double eps_prime() const { return epsilon / 3.0; }
};

// Default handles: the splittable tester for the outer class and the
// empirical learner at L1 accuracy eps (agnostic constant 1).
template <SampleSource S = HistogramSource>
ReductionSpec<S> make_reduction_spec(const ClassSpec& outer, const Histogram& hard, double epsilon,
                                     double c_learn = 4.0) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("reduction: eps must be in (0,1]");
    if (!outer.member(hard)) throw std::invalid_argument("reduction: C_Hard is not contained in " + outer.name());
    ReductionSpec<S> r;
    r.outer = outer;
    r.hard = hard;
    r.epsilon = epsilon;
    const std::size_t n = hard.n();
    r.tester = [outer, n](S& src, double e, std::uint64_t seed) {
        return test_splittable(src, n, e, outer, seed).accepted();
    };
    r.learner = [c_learn](S& src, double e) {
        const auto m = static_cast<std::uint64_t>(std::ceil(c_learn * static_cast<double>(src.n()) / (e * e)));
        return empirical_from_counts(src.draw_counts(m));
    };
    return r;
}

template <SampleSource S>
bool testing_by_narrowing(const ReductionSpec<S>& spec, S& src, std::uint64_t seed = 0) {
    if (!spec.tester || !spec.learner) throw std::invalid_argument("testing_by_narrowing: handles not installed");
    if (src.n() != spec.hard.n()) throw std::invalid_argument("testing_by_narrowing: domain mismatch");
    const double ep = spec.eps_prime();
    if (!spec.tester(src, ep / spec.c_agn, seed)) return false;
    const Histogram h = spec.learner(src, ep);
    return l1_distance(h, spec.hard) <= ep;
}

// Parameters of the embedding of [n] into the central window of B_N,
// B_N = Bin(N, 1/2) on values {0..N}.
struct BinomialEmbedding {
    double phi = 0.0;
    double c = 0.0;          // sqrt(2 ln(1/(1-phi)))
    std::size_t n = 0;
    std::size_t N = 0;       // even, nearest to (n/(2c))^2
    std::size_t lo = 0;      // window values lo .. lo+n-1
    double p = 0.0;          // B_N(window)
};

inline double embedding_c(double phi) { return std::sqrt(2.0 * std::log(1.0 / (1.0 - phi))); }

inline BinomialEmbedding make_binomial_embedding(std::size_t n, double phi) {
    if (!(phi > 0.0 && phi < 0.25)) throw std::invalid_argument("binomial embedding: phi must be in (0,1/4)");
    if (n < 2) throw std::invalid_argument("binomial embedding: need n >= 2");
    BinomialEmbedding e;
    e.phi = phi;
    e.c = embedding_c(phi);
    e.n = n;
    const double Nd = std::pow(static_cast<double>(n) / (2.0 * e.c), 2.0);
    if (!(Nd < 1e12)) throw std::overflow_error("binomial embedding: N too large");
    e.N = 2 * static_cast<std::size_t>(std::llround(Nd / 2.0));
    if (e.N < n) throw std::invalid_argument("binomial embedding: window wider than the binomial");
    e.lo = e.N / 2 - n / 2;
    double p = 0.0;
    for (std::size_t v = e.lo; v < e.lo + n; ++v) p += std::exp(detail::log_binom_pmf(e.N, v, 0.5));
    e.p = p;
    return e;
}

// B_N(N/2 - c sqrt(N) .. N/2 + c sqrt(N)) by exact summation.
inline double binomial_central_mass(std::size_t N, double c) {
    const double Nd = static_cast<double>(N), half = Nd / 2.0, w = c * std::sqrt(Nd);
    const auto a = static_cast<std::size_t>(std::ceil(std::max(0.0, half - w)));
    const auto b = static_cast<std::size_t>(std::floor(std::min(Nd, half + w)));
    double s = 0.0;
    for (std::size_t v = a; v <= b; ++v) s += std::exp(detail::log_binom_pmf(N, v, 0.5));
    return s;
}

namespace detail {

// Bin(N, 1/2) on a window of +-40 sd around N/2; mass outside is below
// e^-3000 and is dropped.
struct BinomialWindow {
    std::size_t first = 0;
    std::vector<double> pmf;  // normalized by log-sum-exp

    explicit BinomialWindow(std::size_t N) {
        const double Nd = static_cast<double>(N), sd = 0.5 * std::sqrt(Nd);
        const double span = std::ceil(40.0 * sd + 1.0);
        first = static_cast<std::size_t>(std::max(0.0, Nd / 2.0 - span));
        const auto last = static_cast<std::size_t>(std::min(Nd, Nd / 2.0 + span));
        std::vector<double> lp(last - first + 1);
        for (std::size_t v = first; v <= last; ++v) lp[v - first] = detail::log_binom_pmf(N, v, 0.5);
        const double mx = *std::max_element(lp.begin(), lp.end());
        double z = 0.0;
        for (double x : lp) z += std::exp(x - mx);
        pmf.resize(lp.size());
        for (std::size_t i = 0; i < lp.size(); ++i) pmf[i] = std::exp(lp[i] - mx) / z;
    }
};

}  // namespace detail

// D' over values {0..N} (indices 1..N+1): with probability p a draw of D
// placed in the window, otherwise B_N conditioned outside the window.
template <SampleSource S>
class BinomialEmbeddingSource {
public:
    BinomialEmbeddingSource(S& inner, double phi, std::uint64_t seed)
        : inner_(&inner), e_(make_binomial_embedding(inner.n(), phi)), rng_(seed) {
        const detail::BinomialWindow w(e_.N);
        // Outside-window weights, summed from each tail inwards.
        for (std::size_t i = 0; i < w.pmf.size(); ++i) {
            const std::size_t v = w.first + i;
            if (v >= e_.lo && v < e_.lo + e_.n) continue;
            values_.push_back(v);
            weights_.push_back(w.pmf[i]);
        }
        cdf_.resize(weights_.size());
        double run = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) cdf_[i] = (run += weights_[i]);
    }

    const BinomialEmbedding& params() const { return e_; }
    std::size_t n() const { return e_.N + 1; }
    std::uint64_t consumed() const { return consumed_; }

    std::size_t draw() {
        ++consumed_;
        std::bernoulli_distribution coin(e_.p);
        if (coin(rng_)) return e_.lo + inner_->draw();  // value lo + j - 1, index +1
        return tail_draw() + 1;
    }

    std::vector<std::uint64_t> draw_counts(std::uint64_t m) {
        consumed_ += m;
        std::vector<std::uint64_t> out(n(), 0);
        std::binomial_distribution<long long> bin(static_cast<long long>(m), e_.p);
        const auto k = static_cast<std::uint64_t>(bin(rng_));
        const auto c = inner_->draw_counts(k);
        for (std::size_t j = 0; j < c.size(); ++j) out[e_.lo + j] += c[j];
        const auto t = multinomial(weights_, m - k, rng_);
        for (std::size_t i = 0; i < t.size(); ++i) out[values_[i]] += t[i];
        return out;
    }

private:
    // Inverse CDF over the outside-window values.
    std::size_t tail_draw() {
        std::uniform_real_distribution<double> u(0.0, cdf_.back());
        const double x = u(rng_);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), x);
        return values_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                                         static_cast<std::ptrdiff_t>(cdf_.size()) - 1))];
    }

    S* inner_;
    BinomialEmbedding e_;
    Engine rng_;
    std::vector<std::size_t> values_;
    std::vector<double> weights_, cdf_;
    std::uint64_t consumed_ = 0;
};

// Exact pmf of D' for an explicit D, on N+1 points.
inline Histogram binomial_embedding_pmf(const Histogram& d, double phi) {
    const auto e = make_binomial_embedding(d.n(), phi);
    const detail::BinomialWindow w(e.N);
    std::vector<double> m(e.N + 1, 0.0);
    double outside = 0.0;
    for (std::size_t i = 0; i < w.pmf.size(); ++i) {
        const std::size_t v = w.first + i;
        if (v >= e.lo && v < e.lo + e.n) continue;
        outside += w.pmf[i];
    }
    for (std::size_t i = 0; i < w.pmf.size(); ++i) {
        const std::size_t v = w.first + i;
        if (v >= e.lo && v < e.lo + e.n) continue;
        m[v] = (1.0 - e.p) * w.pmf[i] / outside;
    }
    for (std::size_t j = 1; j <= d.n(); ++j) m[e.lo + j - 1] = e.p * d(j);
    return Histogram::from_weights(std::move(m));
}

}  // namespace shapetest
