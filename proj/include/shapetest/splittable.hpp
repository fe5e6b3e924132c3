#pragma once

// The splittable tester: bisect [1,N] until every heavy piece looks flat in L2,
// learn the flattening on fresh samples, then decide offline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "classes.hpp"
#include "histogram.hpp"
#include "l2check.hpp"
#include "sampling.hpp"

namespace shapetest {

struct SplittableOptions {
    double c_main = 2.0;
    double c_stat = 10.0;
    double c_learn = 400.0;
    // Extra 1/eps^c term inside the sample-count max (0 disables).
    int boost_exponent = 0;
    // DKW failure probability for the Kolmogorov witness.
    double witness_delta = 0.1;
};

struct SplittableConfig {
    double epsilon = 0.0;
    double gamma = 0.0;
    double L = 0.0;
    double kappa = 0.0;
    double delta = 0.0;
    std::size_t n = 0;           // original domain
    std::size_t N = 0;           // padded domain used by the recursion
    double witness_accuracy = 0.0;  // 0 when no witness is needed
    std::uint64_t m = 0;         // decomposition sample count
    SplittableOptions opt;

    double l2_epsilon() const { return epsilon / 40.0; }
    // Minimum samples for an interval of size s to be examined.
    double heavy_threshold(std::size_t s) const {
        const double stat = opt.c_stat * std::sqrt(static_cast<double>(s)) / (epsilon * epsilon) * std::log(1.0 / delta);
        return std::max(stat, kappa * static_cast<double>(m));
    }
    std::uint64_t learn_samples(std::size_t pieces) const {
        return static_cast<std::uint64_t>(std::ceil(opt.c_learn * static_cast<double>(pieces) / (epsilon * epsilon)));
    }
};

inline SplittableConfig make_splittable_config(double epsilon, std::size_t n, const ClassSpec& spec,
                                               const SplittableOptions& opt = {}) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("test_splittable: eps must be in (0,1]");
    if (n == 0) throw std::invalid_argument("test_splittable: empty domain");
    SplittableConfig c;
    c.opt = opt;
    c.epsilon = epsilon;
    c.n = n;
    c.N = next_pow2(n);
    c.gamma = epsilon / 80.0;
    c.L = spec.L(c.gamma, n);
    c.kappa = epsilon / (160.0 * c.L);
    c.delta = 1.0 / (10.0 * c.L);
    const double Nd = static_cast<double>(c.N);
    double base = std::max(1.0 / c.kappa, std::sqrt(c.L * Nd) / (epsilon * epsilon * epsilon));
    if (opt.boost_exponent > 0) base = std::max(base, std::pow(epsilon, -opt.boost_exponent));
    if (spec.needs_witness) {
        c.witness_accuracy = spec.witness_accuracy(epsilon);
        const double aw = c.witness_accuracy;
        base = std::max(base, std::log(2.0 / opt.witness_delta) / (2.0 * aw * aw));
    }
    c.m = static_cast<std::uint64_t>(std::ceil(opt.c_main * base * std::max(1.0, std::log(Nd))));
    return c;
}

enum class LeafKind { Flat, Light };

struct RecursionReport {
    Partition partition;
    std::vector<LeafKind> kinds;
    std::vector<std::uint64_t> samples;  // m_I per leaf
    std::size_t splits = 0;
};

struct DecomposeResult {
    bool too_many_splits = false;
    RecursionReport report;
};

namespace detail {

inline void decompose_rec(const std::vector<std::uint64_t>& counts, const std::vector<std::uint64_t>& prefix,
                          const Interval& I, const SplittableConfig& cfg, const L2CheckConfig& l2, Engine& rng,
                          DecomposeResult& out) {
    if (out.too_many_splits) return;
    const std::uint64_t mI = prefix[I.hi] - prefix[I.lo - 1];
    auto& r = out.report;
    const auto leaf = [&](LeafKind k) {
        r.partition.intervals.push_back(I);
        r.kinds.push_back(k);
        r.samples.push_back(mI);
    };
    if (static_cast<double>(mI) < cfg.heavy_threshold(I.size())) return leaf(LeafKind::Light);
    const std::vector<std::uint64_t> local(counts.begin() + static_cast<long>(I.lo - 1),
                                           counts.begin() + static_cast<long>(I.hi));
    if (check_small_l2_counts(local, l2, rng)) return leaf(LeafKind::Flat);
    if (++r.splits > static_cast<std::size_t>(cfg.L)) {
        out.too_many_splits = true;
        return;
    }
    const std::size_t left = (I.size() + 1) / 2;
    decompose_rec(counts, prefix, {I.lo, I.lo + left - 1}, cfg, l2, rng, out);
    decompose_rec(counts, prefix, {I.lo + left, I.hi}, cfg, l2, rng, out);
}

}  // namespace detail

// Recursive bisection of [1, counts.size()] driven by one sample multiset.
inline DecomposeResult decompose(const std::vector<std::uint64_t>& counts, const SplittableConfig& cfg, Engine& rng) {
    DecomposeResult out;
    if (counts.empty()) throw std::invalid_argument("decompose: empty counts");
    std::vector<std::uint64_t> prefix(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) prefix[i + 1] = prefix[i] + counts[i];
    const L2CheckConfig l2{cfg.l2_epsilon(), cfg.delta, cfg.opt.c_stat};
    detail::decompose_rec(counts, prefix, {1, counts.size()}, cfg, l2, rng, out);
    return out;
}

// Leaves restricted to [1,n]; pieces entirely in the padding are dropped.
inline Partition clip_partition(const Partition& p, std::size_t n) {
    Partition out;
    for (const auto& I : p)
        if (I.lo <= n) out.intervals.push_back({I.lo, std::min(I.hi, n)});
    return out;
}

// Empirical piece masses from fresh samples, spread uniformly on each piece.
template <SampleSource S>
Histogram learn_flattening(S& src, const Partition& p, std::uint64_t samples) {
    if (!p.covers(src.n())) throw std::invalid_argument("learn_flattening: partition does not cover the domain");
    if (samples == 0) throw std::invalid_argument("learn_flattening: need at least one sample");
    const auto counts = src.draw_counts(samples);
    std::vector<double> m(src.n(), 0.0);
    std::vector<std::size_t> ends;
    for (const auto& I : p) {
        std::uint64_t c = 0;
        for (std::size_t i = I.lo; i <= I.hi; ++i) c += counts[i - 1];
        const double v = static_cast<double>(c) / static_cast<double>(samples) / static_cast<double>(I.size());
        for (std::size_t i = I.lo; i <= I.hi; ++i) m[i - 1] = v;
        ends.push_back(I.hi);
    }
    return Histogram(std::move(m), std::move(ends));
}

template <SampleSource S>
Histogram learn_flattening(S& src, const Partition& p, double epsilon, double c_learn = 400.0) {
    const auto s = static_cast<std::uint64_t>(std::ceil(c_learn * static_cast<double>(p.size()) / (epsilon * epsilon)));
    return learn_flattening(src, p, s);
}

inline OfflineVerdict offline_check(const Histogram& d_hat, const ClassSpec& spec, double epsilon,
                                    const Histogram* witness = nullptr) {
    return spec.offline(d_hat, epsilon, witness);
}

enum class Verdict { Accept, Reject, Fail };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Accept: return "accept";
        case Verdict::Reject: return "reject";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

struct TestOutcome {
    Verdict verdict = Verdict::Reject;
    std::string reason;
    SplittableConfig config;
    std::optional<RecursionReport> report;
    std::optional<Histogram> hypothesis;
    std::optional<Histogram> witness;
    OfflineVerdict offline;
    std::uint64_t samples_used = 0;

    bool accepted() const { return verdict == Verdict::Accept; }
};

template <SampleSource S>
TestOutcome test_splittable(S& src, std::size_t n, double epsilon, const ClassSpec& spec, std::uint64_t seed,
                            const SplittableOptions& opt = {}) {
    if (src.n() != n) throw std::invalid_argument("test_splittable: source domain differs from n");
    TestOutcome out;
    out.config = make_splittable_config(epsilon, n, spec, opt);
    const auto& cfg = out.config;
    const std::uint64_t start = src.consumed();
    Engine rng(seed);

    auto counts = src.draw_counts(cfg.m);
    if (spec.needs_witness) out.witness = empirical_from_counts(counts);
    counts.resize(cfg.N, 0);
    auto dec = decompose(counts, cfg, rng);
    if (dec.too_many_splits) {
        out.verdict = Verdict::Reject;
        out.reason = "more than L splits";
        out.report = std::move(dec.report);
        out.samples_used = src.consumed() - start;
        return out;
    }
    const Partition leaves = clip_partition(dec.report.partition, n);
    out.report = std::move(dec.report);
    out.hypothesis = learn_flattening(src, leaves, cfg.learn_samples(leaves.size()));
    out.offline = offline_check(*out.hypothesis, spec, epsilon, out.witness ? &*out.witness : nullptr);
    out.verdict = out.offline.yes ? Verdict::Accept : Verdict::Reject;
    out.reason = out.offline.detail;
    out.samples_used = src.consumed() - start;
    return out;
}

}  // namespace shapetest
