#pragma once

// Effective-support front end: locate an interval carrying almost all the
// mass, reject when it is longer than the class allows, and otherwise run the
// splittable tester on the conditional distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "classes.hpp"
#include "histogram.hpp"
#include "sampling.hpp"
#include "splittable.hpp"

namespace shapetest {

struct EffectiveOptions {
    // m0 = c_dkw / eps^2 gives Kolmogorov accuracy eps/60 with probability 0.95.
    double c_dkw = 0.5 * 3600.0 * std::log(40.0);
    double budget_factor = 64.0;  // per-draw rejection budget, in units of 1/D^(I)
    int repetitions = 3;
    SplittableOptions inner;
};

struct EffectiveSupportConfig {
    double epsilon = 0.0;
    std::uint64_t m0 = 0;
    std::size_t tau = 0;
    double inner_epsilon = 0.0;
};

inline EffectiveSupportConfig make_effective_config(double epsilon, std::size_t n, const ClassSpec& spec,
                                                    const EffectiveOptions& opt = {}) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("test_effective_splittable: eps must be in (0,1]");
    const auto tau = spec.M(n, epsilon / 60.0);
    if (!tau) throw std::invalid_argument("test_effective_splittable: class " + spec.name() + " has no support bound");
    EffectiveSupportConfig c;
    c.epsilon = epsilon;
    c.m0 = static_cast<std::uint64_t>(std::ceil(opt.c_dkw / (epsilon * epsilon)));
    c.tau = *tau;
    c.inner_epsilon = 0.7 * epsilon;
    return c;
}

// [n] minus the largest prefix and the largest suffix of mass <= eps/30 each.
inline Interval effective_support_interval(const Histogram& d_hat, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("effective_support_interval: eps must be positive");
    const std::size_t n = d_hat.n();
    const double cut = epsilon / 30.0 + prob_tol;
    std::size_t lo = 1, hi = n;
    while (lo <= n && d_hat.cdf(lo) <= cut) ++lo;
    while (hi >= 1 && d_hat.tail(hi) <= cut) --hi;
    if (lo > hi || hi == 0) throw std::domain_error("effective_support_interval: trimmed interval is empty");
    return {lo, hi};
}

struct RejectionFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First draw of src inside I, or nullopt after `budget` misses.
template <SampleSource S>
std::optional<std::size_t> rejection_sample(S& src, const Interval& I, std::uint64_t budget) {
    if (budget == 0) throw std::invalid_argument("rejection_sample: budget must be >= 1");
    for (std::uint64_t k = 0; k < budget; ++k) {
        const std::size_t x = src.draw();
        if (I.contains(x)) return x;
    }
    return std::nullopt;
}

// D_I on [1, |I|] by rejection from a source over [n]. Bulk requests draw
// batches from the parent and drop the surplus hits, so the parent is charged
// for whole batches. Throws RejectionFail once a request exceeds
// q * per_draw_budget parent draws.
template <SampleSource S>
class RestrictedSource {
public:
    RestrictedSource(S& parent, Interval I, double mass_estimate, double budget_factor, std::uint64_t seed)
        : parent_(&parent), I_(I), mass_(std::clamp(mass_estimate, 1e-12, 1.0)), rng_(seed) {
        per_draw_ = static_cast<std::uint64_t>(budget_factor * std::ceil(1.0 / mass_));
        if (per_draw_ == 0) per_draw_ = 1;
    }

    std::size_t n() const { return I_.size(); }
    std::uint64_t consumed() const { return consumed_; }
    std::uint64_t per_draw_budget() const { return per_draw_; }

    std::size_t draw() {
        const auto x = rejection_sample(*parent_, I_, per_draw_);
        if (!x) throw RejectionFail("rejection sampling exceeded its budget");
        ++consumed_;
        return *x - I_.lo + 1;
    }

    std::vector<std::uint64_t> draw_counts(std::uint64_t q) {
        std::vector<std::uint64_t> out(n(), 0);
        if (q == 0) return out;
        const double cap = static_cast<double>(q) * static_cast<double>(per_draw_);
        double spent = 0.0;
        std::uint64_t have = 0;
        std::vector<std::uint64_t> hits(n(), 0);
        while (have < q) {
            const double want = static_cast<double>(q - have) / mass_;
            const double left = cap - spent;
            if (left < 1.0) throw RejectionFail("rejection sampling exceeded its budget");
            const auto batch = static_cast<std::uint64_t>(std::min(left, std::ceil(1.05 * want) + 16.0));
            const auto c = parent_->draw_counts(batch);
            spent += static_cast<double>(batch);
            for (std::size_t i = I_.lo; i <= I_.hi; ++i) {
                hits[i - I_.lo] += c[i - 1];
                have += c[i - 1];
            }
        }
        // Drop a uniformly random subset of the surplus hits. Given their
        // number the hits are i.i.d. from D_I, so the kept ones are too.
        std::uint64_t pool = have, drop = have - q;
        for (std::size_t j = 0; j < hits.size(); ++j) {
            std::uint64_t r = 0;
            if (drop > 0 && hits[j] > 0) {
                const std::uint64_t rest = pool - hits[j];
                const std::uint64_t lo = drop > rest ? drop - rest : 0, hi = std::min(hits[j], drop);
                r = std::clamp(hypergeometric(pool, hits[j], drop), lo, hi);
            }
            out[j] = hits[j] - r;
            drop -= r;
            pool -= hits[j];
        }
        consumed_ += q;
        return out;
    }

private:
    // Marked items among `draws` taken without replacement from `pool` items
    // of which `good` are marked. Exact for few draws, binomial otherwise
    // (draws is the small surplus, so the correction factor is near 1).
    std::uint64_t hypergeometric(std::uint64_t pool, std::uint64_t good, std::uint64_t draws) {
        if (draws <= 64) {
            std::uint64_t k = 0, g = good, p = pool;
            for (std::uint64_t t = 0; t < draws; ++t, --p) {
                std::uniform_int_distribution<std::uint64_t> u(0, p - 1);
                if (u(rng_) < g) {
                    ++k;
                    --g;
                }
            }
            return k;
        }
        const double pr = static_cast<double>(good) / static_cast<double>(pool);
        std::binomial_distribution<long long> bin(static_cast<long long>(draws), pr);
        return static_cast<std::uint64_t>(bin(rng_));
    }

    S* parent_;
    Interval I_;
    double mass_;
    Engine rng_;
    std::uint64_t per_draw_ = 1;
    std::uint64_t consumed_ = 0;
};

// The class conditioned on I: conditionals D_I of members with
// D(I) >= 1 - mass_eps, as a class over [1, |I|].
inline ClassSpec conditioned_class_spec(const ClassSpec& base, std::size_t n, const Interval& I, double mass_eps) {
    if (base.shape.kind != Kind::PBD && base.shape.kind != Kind::Binomial)
        throw std::invalid_argument("conditioned_class_spec: only PBD and Binomial classes are supported");
    ClassSpec s = base;
    const bool pbd = base.shape.kind == Kind::PBD;
    // Conditionals of log-concave laws stay log-concave on the window.
    s.L = [](double gamma, std::size_t m) { return splitting_bound(ShapeClass::logconcave(), gamma, m); };
    s.M = [](std::size_t, double) { return std::optional<std::size_t>{}; };
    s.member = [](const Histogram& h) { return is_member(h, ShapeClass::logconcave()); };
    s.needs_witness = false;
    s.offline = [pbd, n, I, mass_eps](const Histogram& h, double a, const Histogram*) {
        const double e = std::min(a, 0.99);
        const Histogram full = embed(h, I, n);
        const double d = pbd ? pbd_distance(full, e, I, {}, mass_eps).tau : binomial_distance(full, e, I, mass_eps).tau;
        return detail::oracle_verdict(d, a, OracleContract{1.0 - 2.0 * e, 1.0 + 2.0 * e, e / 100.0});
    };
    return s;
}

struct EffectiveRun {
    Verdict verdict = Verdict::Reject;
    std::string reason;
    std::optional<Interval> interval;
    std::optional<TestOutcome> inner;
    std::uint64_t samples_used = 0;
};

struct EffectiveOutcome {
    Verdict verdict = Verdict::Reject;
    std::string reason;
    EffectiveSupportConfig config;
    std::vector<EffectiveRun> runs;
    std::uint64_t samples_used = 0;

    bool accepted() const { return verdict == Verdict::Accept; }
};

namespace detail {

template <SampleSource S>
EffectiveRun effective_once(S& src, std::size_t n, const EffectiveSupportConfig& cfg, const ClassSpec& spec,
                            std::uint64_t seed, const EffectiveOptions& opt) {
    EffectiveRun run;
    const std::uint64_t start = src.consumed();
    const auto finish = [&](Verdict v, std::string why) {
        run.verdict = v;
        run.reason = std::move(why);
        run.samples_used = src.consumed() - start;
        return run;
    };
    const Histogram d_hat = empirical_from_counts(src.draw_counts(cfg.m0));
    Interval I;
    try {
        I = effective_support_interval(d_hat, cfg.epsilon);
    } catch (const std::domain_error&) {
        return finish(Verdict::Reject, "empty effective support");
    }
    run.interval = I;
    if (I.size() > cfg.tau)
        return finish(Verdict::Reject, "effective support " + std::to_string(I.size()) + " exceeds tau " +
                                           std::to_string(cfg.tau));
    const ClassSpec cond = conditioned_class_spec(spec, n, I, cfg.epsilon / 10.0);
    RestrictedSource<S> sub(src, I, d_hat.mass(I), opt.budget_factor, seed);
    try {
        run.inner = test_splittable(sub, I.size(), cfg.inner_epsilon, cond, mix64(seed), opt.inner);
    } catch (const RejectionFail& e) {
        return finish(Verdict::Fail, e.what());
    }
    return finish(run.inner->verdict, run.inner->reason);
}

}  // namespace detail

// Majority over opt.repetitions independent runs. Fail wins only when a
// majority of runs failed.
template <SampleSource S>
EffectiveOutcome test_effective_splittable(S& src, std::size_t n, double epsilon, const ClassSpec& spec,
                                           std::uint64_t seed, const EffectiveOptions& opt = {}) {
    if (src.n() != n) throw std::invalid_argument("test_effective_splittable: source domain differs from n");
    if (opt.repetitions < 1) throw std::invalid_argument("test_effective_splittable: need at least one repetition");
    EffectiveOutcome out;
    out.config = make_effective_config(epsilon, n, spec, opt);
    const std::uint64_t start = src.consumed();
    int acc = 0, fail = 0;
    for (int r = 0; r < opt.repetitions; ++r) {
        out.runs.push_back(detail::effective_once(src, n, out.config, spec, mix_seed(seed, static_cast<std::uint64_t>(r)), opt));
        acc += out.runs.back().verdict == Verdict::Accept;
        fail += out.runs.back().verdict == Verdict::Fail;
    }
    out.samples_used = src.consumed() - start;
    if (2 * acc > opt.repetitions) {
        out.verdict = Verdict::Accept;
    } else if (2 * fail > opt.repetitions) {
        out.verdict = Verdict::Fail;
    } else {
        out.verdict = Verdict::Reject;
    }
    out.reason = std::to_string(acc) + "/" + std::to_string(opt.repetitions) + " runs accepted";
    if (fail) out.reason += ", " + std::to_string(fail) + " failed";
    return out;
}

}  // namespace shapetest
