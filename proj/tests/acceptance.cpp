// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "shapetest/certify.hpp"
#include "shapetest/effective.hpp"
#include "shapetest/hardness.hpp"
#include "shapetest/l2check.hpp"
#include "shapetest/project/brute.hpp"
#include "shapetest/project/exact.hpp"
#include "shapetest/project/histogram_dp.hpp"
#include "shapetest/project/logconcave.hpp"
#include "shapetest/project/mhr.hpp"
#include "shapetest/project/pbd.hpp"
#include "shapetest/project/poly.hpp"
#include "shapetest/splittable.hpp"
#include "shapetest/structure.hpp"
#include "shapetest/tolerant.hpp"

using namespace shapetest;
namespace fx = shapetest::testing;

namespace {

// Thresholds, fixed here.
constexpr double kGridStep = 0.01;
constexpr int kOracleInstances = 200;
constexpr double kOracleSeconds = 300.0;
constexpr int kSandwichInstances = 50;
constexpr double kSandwichEps = 0.1;
constexpr double kL2Eps = 0.5, kL2Delta = 0.1, kL2Rate = 0.9;
constexpr int kL2Trials = 200;
constexpr double kSE = 3.0;
constexpr std::size_t kSplitN = 512;
constexpr double kSplitEps = 0.25;
constexpr int kSplitFixtures = 50;
constexpr double kTwoThirds = 2.0 / 3.0;
constexpr double kSplitSeconds = 1800.0;
constexpr double kExpLo = 0.2, kExpHi = 0.3;
constexpr double kMhrFactor = 32.0, kLcFactor = 100.0;
constexpr double kPbdTol = 1e-12;
constexpr double kEmbedC = 0.04473, kEmbedTol = 1e-5, kBandSlack = 0.05;

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

// 1. Exact oracles against brute force on tiny domains.
void oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    Engine rng(1001);
    const struct {
        ShapeClass c;
        std::function<double(const Histogram&)> f;
    } oracles[] = {
        {ShapeClass::monotone(), [](const Histogram& h) { return dist_to_monotone(h); }},
        {ShapeClass::unimodal(), [](const Histogram& h) { return dist_to_unimodal(h); }},
        {ShapeClass::tmodal(2), [](const Histogram& h) { return dist_to_tmodal(h, 2); }},
        {ShapeClass::convex(), [](const Histogram& h) { return dist_to_convex(h); }},
        {ShapeClass::concave(), [](const Histogram& h) { return dist_to_concave(h); }},
    };
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < kOracleInstances; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
        const Histogram d = fx::random_pmf(n, rng);
        for (const auto& o : oracles) {
            const double gap = std::abs(o.f(d) - brute_force_distance(d, o.c, kGridStep));
            worst = std::max(worst, gap / static_cast<double>(n));
            bad += gap > static_cast<double>(n) * kGridStep + 1e-9;
        }
    }
    const double secs = seconds_since(t0);
    report(1, "exact oracles match brute force within n*step", bad == 0 && secs < kOracleSeconds,
           std::to_string(kOracleInstances) + " instances x 5 classes, mismatches " + std::to_string(bad) +
               ", worst gap/n " + fmt("%.4f", worst) + ", " + fmt("%.1f", secs) + " s");
}

// 2. OPT <= Delta <= c OPT + eps, OPT bracketed by the grid value.
void sandwich_bounds() {
    Engine rng(1002);
    int bad_h = 0, bad_p = 0;
    for (int i = 0; i < kSandwichInstances; ++i) {
        const std::size_t n = 4 + static_cast<std::size_t>(i % 5);
        const double slack = static_cast<double>(n) * kGridStep;
        const Histogram d = fx::random_pmf(n, rng);
        const double gh = brute_force_distance(d, ShapeClass::histogram(2), kGridStep);
        const double dh = dist_to_histogram_t(d, 2, kSandwichEps);
        bad_h += !(dh >= gh - slack - 1e-9 && dh <= 4 * gh + kSandwichEps + 1e-9);
        const double gp = brute_force_distance(d, ShapeClass::piecewise_poly(2, 1), kGridStep);
        const double dp = dist_to_piecewise_poly(d, 2, 1, kSandwichEps);
        bad_p += !(dp >= gp - slack - 1e-9 && dp <= 3 * gp + kSandwichEps + 1e-9);
    }
    report(2, "sandwich bounds for histogram_t (4 OPT) and piecewise_poly (3 OPT)", bad_h == 0 && bad_p == 0,
           "violations " + std::to_string(bad_h) + " / " + std::to_string(bad_p) + " over " +
               std::to_string(kSandwichInstances) + " each, n <= 8");
}

double l2sq_to_uniform(const Histogram& d) {
    const double u = 1.0 / static_cast<double>(d.n());
    double s = 0.0;
    for (double x : d.masses()) s += (x - u) * (x - u);
    return s;
}

// 3. Check-Small-L2 rates and the mean of Z.
void l2_check() {
    const L2CheckConfig cfg{kL2Eps, kL2Delta, 10.0};
    const std::size_t size = 100;
    const Histogram p = paninski_instance(size, kL2Eps, std::uint64_t{9});
    int yes = 0, no = 0;
    for (int t = 0; t < kL2Trials; ++t) {
        HistogramSource su(Histogram::uniform(size), mix_seed(3001, t)), sp(p, mix_seed(3002, t));
        Engine r1(mix_seed(3003, t)), r2(mix_seed(3004, t));
        yes += check_small_l2(su, size, cfg, r1);
        no += !check_small_l2(sp, size, cfg, r2);
    }
    Engine frng(3005);
    const std::vector<std::pair<Histogram, double>> fixtures{
        {Histogram::uniform(100), 1000}, {p, 1000}, {paninski_instance(100, 1.0, std::uint64_t{2}), 500},
        {Histogram::point_mass(100, 7), 200}, {fx::random_pmf(50, frng), 800}};
    int within = 0;
    std::uint64_t seed = 3010;
    for (const auto& [d, m] : fixtures) {
        Engine rng(seed++);
        const int trials = 10000;
        std::vector<double> z(trials);
        std::vector<std::uint64_t> c(d.n());
        for (auto& zt : z) {
            for (std::size_t k = 0; k < d.n(); ++k) {
                const double mu = m * d.masses()[k];
                c[k] = mu > 0 ? std::poisson_distribution<std::uint64_t>(mu)(rng) : 0;
            }
            zt = z_statistic(c, m, d.n());
        }
        double mean = 0.0, var = 0.0;
        for (double x : z) mean += x / trials;
        for (double x : z) var += (x - mean) * (x - mean) / (trials - 1);
        within += std::abs(mean - m * m * l2sq_to_uniform(d)) <= kSE * std::sqrt(var / trials) + 1e-9;
    }
    const double yr = yes / static_cast<double>(kL2Trials), nr = no / static_cast<double>(kL2Trials);
    report(3, "Check-Small-L2 completeness, soundness at the boundary, E[Z]", yr >= kL2Rate && nr >= kL2Rate && within == 5,
           "yes-rate " + fmt("%.3f", yr) + ", no-rate " + fmt("%.3f", nr) + ", E[Z] within 3 SE on " +
               std::to_string(within) + "/5");
}

// Fixture generators for criterion 4 and 7.
Histogram random_unimodal(std::size_t n, Engine& rng) {
    std::vector<double> w = fx::random_pmf(n, rng).masses();
    const std::size_t mode = std::uniform_int_distribution<std::size_t>(n / 8, n - n / 8)(rng);
    std::sort(w.begin(), w.begin() + static_cast<long>(mode));
    std::sort(w.begin() + static_cast<long>(mode), w.end(), std::greater<>());
    return Histogram::from_weights(std::move(w));
}

Histogram random_two_histogram(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const double a = u(rng), b = u(rng);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = i < cut ? a : b;
    return Histogram::from_weights(std::move(w));
}

Histogram random_increasing(std::size_t n, Engine& rng) {
    std::vector<double> w = fx::random_pmf(n, rng).masses();
    std::sort(w.begin(), w.end());
    for (std::size_t i = 0; i < n; ++i) w[i] += 2.0 * static_cast<double>(i) / static_cast<double>(n);
    return Histogram::from_weights(std::move(w));
}

Histogram random_bimodal(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double nd = static_cast<double>(n);
    const double c1 = nd * (0.1 + 0.2 * u(rng)), c2 = nd * (0.7 + 0.2 * u(rng));
    const double s1 = nd * (0.02 + 0.03 * u(rng)), s2 = nd * (0.02 + 0.03 * u(rng));
    const double h = 0.4 + 0.2 * u(rng);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = (static_cast<double>(i) - c1) / s1, b = (static_cast<double>(i) - c2) / s2;
        w[i] = h / s1 * std::exp(-a * a / 2) + (1 - h) / s2 * std::exp(-b * b / 2);
    }
    return Histogram::from_weights(std::move(w));
}

Histogram random_two_block(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t len = n / 16 + static_cast<std::size_t>(u(rng) * static_cast<double>(n / 16));
    const std::size_t gap = n / 4 + static_cast<std::size_t>(u(rng) * static_cast<double>(n / 4));
    const std::size_t start = static_cast<std::size_t>(u(rng) * static_cast<double>(n - 2 * len - gap));
    const double left = 0.4 + 0.3 * u(rng);
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        w[start + i] = left;
        w[start + len + gap + i] = 1 - left;
    }
    return Histogram::from_weights(std::move(w));
}

Histogram random_alternating(std::size_t n, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double hi = 4.0 + 4.0 * u(rng);
    const std::size_t blocks = 4 + 2 * static_cast<std::size_t>(u(rng) * 2);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (i * blocks / n) % 2 ? 1.0 : hi;
    return Histogram::from_weights(std::move(w));
}

struct SplitCase {
    const char* name;
    ShapeClass c;
    std::function<Histogram(Engine&)> in, far;
};

std::vector<SplitCase> split_cases() {
    const std::size_t n = kSplitN;
    return {
        {"monotone", ShapeClass::monotone(), [n](Engine& r) { return fx::random_monotone(n, r); },
         [n](Engine& r) { return random_increasing(n, r); }},
        {"unimodal", ShapeClass::unimodal(), [n](Engine& r) { return random_unimodal(n, r); },
         [n](Engine& r) { return random_bimodal(n, r); }},
        {"log-concave", ShapeClass::logconcave(), [n](Engine& r) { return fx::random_logconcave(n, r); },
         [n](Engine& r) { return random_bimodal(n, r); }},
        {"mhr", ShapeClass::mhr(), [n](Engine& r) { return fx::random_mhr(n, r); },
         [n](Engine& r) { return random_two_block(n, r); }},
        {"2-histogram", ShapeClass::histogram(2), [n](Engine& r) { return random_two_histogram(n, r); },
         [n](Engine& r) { return random_alternating(n, r); }},
    };
}

// Far fixtures are kept only when the certified lower bound exceeds eps.
std::vector<Histogram> draw_fixtures(const SplitCase& k, bool in, Engine& rng) {
    std::vector<Histogram> out;
    for (int tries = 0; out.size() < static_cast<std::size_t>(kSplitFixtures) && tries < 50 * kSplitFixtures; ++tries) {
        Histogram d = in ? k.in(rng) : k.far(rng);
        if (in ? is_member(d, k.c) : certified_distance_lower_bound(d, k.c) > kSplitEps) out.push_back(std::move(d));
    }
    return out;
}

// 4. The splittable tester at n = 512, eps = 0.25.
void splittable_tester() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true, budget_ok = true;
    std::string detail;
    std::uint64_t seed = 4000;
    for (const auto& k : split_cases()) {
        Engine rng(mix_seed(4100, seed++));
        const auto spec = make_class_spec(k.c);
        int acc_in = 0, rej_far = 0;
        const auto ins = draw_fixtures(k, true, rng), fars = draw_fixtures(k, false, rng);
        for (int side = 0; side < 2; ++side) {
            const auto& fs = side == 0 ? ins : fars;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                HistogramSource src(fs[i], mix_seed(seed, 2 * i + side));
                const auto out = test_splittable(src, kSplitN, kSplitEps, spec, mix_seed(seed + 1, 2 * i + side));
                std::uint64_t expect = out.config.m;
                if (out.report) expect += out.config.learn_samples(clip_partition(out.report->partition, kSplitN).size());
                budget_ok = budget_ok && out.samples_used == expect && src.consumed() == expect;
                if (side == 0) acc_in += out.accepted();
                else rej_far += !out.accepted();
            }
        }
        seed += 2;
        const double ai = acc_in / static_cast<double>(std::max<std::size_t>(ins.size(), 1));
        const double rf = rej_far / static_cast<double>(std::max<std::size_t>(fars.size(), 1));
        const bool full = ins.size() == static_cast<std::size_t>(kSplitFixtures) &&
                          fars.size() == static_cast<std::size_t>(kSplitFixtures);
        ok = ok && full && ai >= kTwoThirds && rf >= kTwoThirds;
        detail += std::string(k.name) + " " + fmt("%.2f", ai) + "/" + fmt("%.2f", rf) + "; ";
    }
    const double secs = seconds_since(t0);
    report(4, "test_splittable accepts members and rejects far fixtures", ok && budget_ok && secs < kSplitSeconds,
           detail + "budget exact " + (budget_ok ? "yes" : "no") + ", " + fmt("%.0f", secs) + " s");
}

// 5. Budget growth of the effective-support tester on Binomials.
void effective_binomial() {
    const auto spec = make_class_spec(ShapeClass::binomial());
    const double eps = 0.5;
    const int trials = 3;
    std::vector<double> xs, ys;
    int correct = 0, total = 0;
    std::string detail;
    for (std::size_t n : {1000, 4000, 16000}) {
        double mean = 0.0;
        for (int t = 0; t < trials; ++t) {
            HistogramSource sb(binomial_pmf(n - 1, 0.5), mix_seed(5001, n + t));
            const auto ob = test_effective_splittable(sb, n, eps, spec, mix_seed(5002, n + t));
            mean += static_cast<double>(ob.samples_used) / trials;
            HistogramSource su(Histogram::uniform(n), mix_seed(5003, n + t));
            const auto ou = test_effective_splittable(su, n, eps, spec, mix_seed(5004, n + t));
            correct += ob.accepted() + !ou.accepted();
            total += 2;
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(mean));
        detail += std::to_string(n) + ": " + fmt("%.4g", mean) + "; ";
    }
    const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx, rate = correct / static_cast<double>(total);
    report(5, "effective-support budget exponent on Binomials and correctness",
           slope >= kExpLo && slope <= kExpHi && rate >= kTwoThirds,
           detail + "exponent " + fmt("%.3f", slope) + ", correct " + fmt("%.2f", rate));
}

// 6. Decomposition certificates and dyadic refinement.
void decompositions() {
    const std::size_t n = 1024;
    Engine rng(6001);
    int bad = 0, runs = 0;
    for (double gamma : {0.05, 0.1, 0.2}) {
        const double LM = monotone_bound(n, gamma), LH = decomposition_bound(ShapeClass::mhr(), n, gamma);
        const double Ls = splitting_bound(ShapeClass::monotone(), gamma, n);
        const std::size_t refine = 2 * 10 + 2;
        for (int t = 0; t < 100; ++t) {
            const Histogram m = fx::random_monotone(n, rng);
            const auto cm = decompose_monotone(m, gamma);
            bad += !(static_cast<double>(cm.size()) <= LM && verify_decomposition(m, cm, gamma, LM));
            const Histogram h = fx::random_mhr(n, rng);
            const auto ch = decompose_mhr(h, gamma);
            bad += !(static_cast<double>(ch.size()) <= LH && verify_decomposition(h, ch, gamma, LH));
            const auto cs = decompose_monotone(m, gamma, Ls);
            const Partition r = dyadic_refine(cs.partition, n);
            bad += !(static_cast<double>(cs.size() * refine) <= Ls && r.size() <= cs.size() * refine &&
                     verify_partition(m, r, gamma, Ls));
            runs += 3;
        }
    }
    report(6, "monotone/MHR certificates verify within bounds; dyadic refinement <= (2 log2 n + 2)x", bad == 0,
           std::to_string(runs - bad) + "/" + std::to_string(runs) + " checks passed");
}

// 7. Checker certificates on the fixture corpus.
void checker_certificates() {
    int yes = 0, bad = 0, members = 0, member_yes = 0;
    std::uint64_t seed = 7000;
    for (const auto& k : split_cases()) {
        if (k.c.kind != Kind::MHR && k.c.kind != Kind::LogConcave) continue;
        const bool mhr = k.c.kind == Kind::MHR;
        for (double eps : {0.0625, 0.2}) {
            Engine rng(seed++);
            for (int side = 0; side < 2; ++side) {
                for (const auto& d : draw_fixtures(k, side == 0, rng)) {
                    const auto r = mhr ? mhr_check(d, d, eps) : logconcave_check(d, d, eps);
                    members += side == 0;
                    if (!r.yes) continue;
                    ++yes;
                    member_yes += side == 0;
                    const bool cert = r.certificate.has_value() && is_member(*r.certificate, k.c) &&
                                      l1_distance(*r.certificate, d) <= (mhr ? kMhrFactor : kLcFactor) * eps;
                    bad += !cert;
                }
            }
        }
    }
    report(7, "every MHR/log-concave checker yes carries a verified certificate", bad == 0 && yes > 0,
           std::to_string(yes) + " yes answers, " + std::to_string(bad) + " bad certificates, members accepted " +
               std::to_string(member_yes) + "/" + std::to_string(members));
}

// 8. PBD pmf against enumeration and the Binomial tail.
void pbd_pmf_and_tail() {
    Engine rng(8001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 12; ++n) {
        std::vector<double> p(n);
        for (auto& x : p) x = u(rng);
        std::vector<double> want(n + 1, 0.0);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            double pr = 1.0;
            for (std::size_t i = 0; i < n; ++i) pr *= (mask >> i & 1u) ? p[i] : 1.0 - p[i];
            want[static_cast<std::size_t>(std::popcount(mask))] += pr;
        }
        const auto got = pbd_pmf(p);
        for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(got(k + 1) - want[k]));
    }
    bool tail_ok = true;
    std::string tails;
    for (double eps : {0.01, 0.05}) {
        const std::size_t w = pbd_effective_support_bound(100, eps), half = (w - 1) / 2;
        const double out = 1.0 - binomial_pmf(100, 0.5).mass({51 - half, 51 + half});
        tail_ok = tail_ok && out <= eps;
        tails += fmt("%.2g", eps) + " -> " + fmt("%.3g", out) + "; ";
    }
    report(8, "pbd_pmf matches enumeration; Binomial tail outside the window <= eps", worst <= kPbdTol && tail_ok,
           "max error " + fmt("%.2g", worst) + ", tails " + tails);
}

// 9. Tolerant tester and the conditioning inequalities.
void tolerant() {
    const auto spec = make_class_spec(ShapeClass::binomial());
    int correct = 0;
    const int trials = 9;
    for (int t = 0; t < trials; ++t) {
        HistogramSource sb(binomial_pmf(100, 0.5), mix_seed(9001, t)), su(Histogram::uniform(101), mix_seed(9002, t));
        correct += tolerant_test(sb, 101, 0.0, 0.5, spec, mix_seed(9003, t)).accepted();
        correct += !tolerant_test(su, 101, 0.0, 0.5, spec, mix_seed(9004, t)).accepted();
    }
    Engine rng(9005);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 5 + static_cast<std::size_t>(t % 40);
        const Histogram D = fx::random_pmf(n, rng), P = fx::random_pmf(n, rng);
        const Interval I = fx::random_partition(n, 3, rng)[static_cast<std::size_t>(t % 2)];
        const double dI = D.mass(I), alpha = 1 - dI, beta = 1 - P.mass(I);
        const double full = l1_distance(D, P);
        const double cond = l1_distance(conditional_restrict(D, I), conditional_restrict(P, I));
        bad += cond > 1.5 * full / dI + 1e-12 || cond < full - 2 * (alpha + beta) - 1e-12;
    }
    const double rate = correct / (2.0 * trials);
    report(9, "tolerant tester on Binomial vs uniform; conditioning inequalities", rate >= kTwoThirds && bad == 0,
           "correct " + fmt("%.2f", rate) + ", inequality violations " + std::to_string(bad) + "/1000");
}

// 10. Embedding constant and the central Binomial mass.
void embedding() {
    const double c = embedding_c(1.0 / 1000);
    const double mass = binomial_central_mass(10000, 0.5);
    const double scale = 2 * 0.5 * std::sqrt(2 / M_PI);
    const double lo = std::exp(-2 * 0.5 * 0.5) * scale, hi = scale;
    const bool ok = std::abs(c - kEmbedC) <= kEmbedTol && mass >= (1 - kBandSlack) * lo && mass <= (1 + kBandSlack) * hi;
    report(10, "embedding constant and central Binomial mass band", ok,
           "c " + fmt("%.7f", c) + ", B_N(I) " + fmt("%.4f", mass) + " vs [" + fmt("%.4f", lo) + ", " +
               fmt("%.4f", hi) + "]");
}

}  // namespace

int main() {
    oracle_equivalence();
    sandwich_bounds();
    l2_check();
    splittable_tester();
    effective_binomial();
    decompositions();
    checker_certificates();
    pbd_pmf_and_tail();
    tolerant();
    embedding();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
