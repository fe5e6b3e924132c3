#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "shapetest/histogram.hpp"
#include "shapetest/sampling.hpp"
#include "shapetest/shape.hpp"

namespace shapetest {
namespace {

using testing::random_pmf;

Histogram H(std::vector<double> m) { return Histogram(std::move(m)); }

TEST(Histogram, RejectsBadMass) {
    EXPECT_THROW(H({0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(H({1.2, -0.2}), std::invalid_argument);
    EXPECT_THROW(H({}), std::invalid_argument);
    // Within renorm_tol of 1 is renormalized.
    const Histogram h = H({0.5, 0.5 + 1e-8});
    EXPECT_NEAR(h(1) + h(2), 1.0, 1e-15);
}

TEST(Histogram, BreakpointsCertifyConstantPieces) {
    EXPECT_NO_THROW(Histogram({0.25, 0.25, 0.5}, {2, 3}));
    EXPECT_THROW(Histogram({0.2, 0.3, 0.5}, {2, 3}), std::invalid_argument);
}

TEST(Distances, L1) {
    const Histogram a = H({0.2, 0.8});
    EXPECT_DOUBLE_EQ(l1_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(l1_distance(H({1, 0}), H({0, 1})), 2.0);
    EXPECT_NEAR(l1_distance(a, H({0.5, 0.5})), 0.6, 1e-15);
    EXPECT_THROW(l1_distance(a, H({1, 0, 0})), std::invalid_argument);
}

TEST(Distances, Kolmogorov) {
    const Histogram a = H({0.2, 0.8});
    EXPECT_DOUBLE_EQ(kolmogorov_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(kolmogorov_distance(H({1, 0}), H({0, 1})), 1.0);
    EXPECT_NEAR(kolmogorov_distance(a, H({0.5, 0.5})), 0.3, 1e-15);
}

TEST(Empirical, Counting) {
    const Histogram e = empirical_from_samples({1, 1, 2}, 2);
    EXPECT_DOUBLE_EQ(e(1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(e(2), 1.0 / 3.0);
    EXPECT_EQ(empirical_from_samples({3}, 3).masses(), (std::vector<double>{0, 0, 1}));
    EXPECT_THROW(empirical_from_samples({}, 3), std::invalid_argument);
    EXPECT_THROW(empirical_from_samples({4}, 3), std::out_of_range);
}

TEST(Empirical, SumsToOne) {
    Engine rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        HistogramSource src(random_pmf(37, rng), rng());
        const Histogram e = empirical_from_counts(src.draw_counts(1 + trial * 7));
        double s = 0.0;
        for (double x : e.masses()) s += x;
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
}

TEST(Empirical, DkwBand) {
    const Histogram u = Histogram::uniform(50);
    const auto m = static_cast<std::uint64_t>(std::ceil(std::log(2.0 / 0.1) / (2 * 0.1 * 0.1)));
    EXPECT_EQ(m, 150u);
    int good = 0;
    for (int t = 0; t < 200; ++t) {
        HistogramSource src(u, mix_seed(11, t));
        good += kolmogorov_distance(empirical_from_counts(src.draw_counts(m)), u) <= 0.1;
    }
    EXPECT_GE(good, 180);
}

TEST(Flatten, Examples) {
    const Histogram f = flatten(H({0.1, 0.3, 0.2, 0.4}), Partition::from_right_ends({2, 4}));
    const std::vector<double> want{0.2, 0.2, 0.3, 0.3};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(f.masses()[i], want[i], 1e-15);

    const Histogram g = flatten(H({0.5, 0.1, 0.1, 0.1, 0.2}), Partition::from_right_ends({1, 5}));
    EXPECT_NEAR(g(1), 0.5, 1e-15);
    for (std::size_t i = 2; i <= 5; ++i) EXPECT_NEAR(g(i), 0.125, 1e-15);

    const Histogram c = H({0.25, 0.25, 0.5});
    EXPECT_EQ(flatten(c, Partition::from_right_ends({2, 3})).masses(), c.masses());
}

TEST(Flatten, IdempotentAndDecomposesL1) {
    Engine rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 40;
        const Histogram d = random_pmf(n, rng);
        const Partition p = testing::random_partition(n, 1 + trial % n, rng);
        const Histogram f = flatten(d, p);
        EXPECT_EQ(flatten(f, p).masses(), f.masses());
        double rhs = 0.0;
        for (const auto& I : p) {
            const double w = d.mass(I);
            if (w <= 0.0) continue;
            const Histogram dI = conditional_restrict(d, I);
            rhs += w * l1_distance(dI, Histogram::uniform(I.size()));
        }
        EXPECT_NEAR(l1_distance(d, f), rhs, 1e-12);
    }
}

TEST(ConditionalRestrict, Examples) {
    const Histogram d = H({0.2, 0.3, 0.5});
    const Histogram r = conditional_restrict(d, {2, 3});
    EXPECT_NEAR(r(1), 0.375, 1e-15);
    EXPECT_NEAR(r(2), 0.625, 1e-15);
    EXPECT_EQ(conditional_restrict(d, {1, 3}).masses(), d.masses());
    EXPECT_THROW(conditional_restrict(H({1, 0, 0}), {2, 3}), std::invalid_argument);
}

// Both D(I), P(I) >= 1 - eps/10 and ||D - P|| > eps imply ||D_I - P_I|| > 0.7 eps.
TEST(ConditionalRestrict, TransferOfFarness) {
    Engine rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const std::size_t n = 3 + rng() % 6;
        const double eps = 0.1 + 0.8 * u(rng);
        const Interval I{2, n - 1};
        const auto shaped = [&] {
            std::vector<double> w = random_pmf(n, rng).masses();
            const double out = eps / 10.0 * u(rng);
            w.front() *= out;
            w.back() *= out;
            return Histogram::from_weights(std::move(w));
        };
        const Histogram d = shaped(), p = shaped();
        if (d.mass(I) < 1 - eps / 10 || p.mass(I) < 1 - eps / 10 || l1_distance(d, p) <= eps) continue;
        EXPECT_GT(l1_distance(conditional_restrict(d, I), conditional_restrict(p, I)), 0.7 * eps);
        ++checked;
    }
}

TEST(DyadicRefine, Examples) {
    EXPECT_EQ(dyadic_refine(Partition::whole(8), 8), Partition::whole(8));
    const Partition r = dyadic_refine(Partition::from_right_ends({1, 7, 8}), 8);
    EXPECT_EQ(r, Partition::from_right_ends({1, 2, 4, 6, 7, 8}));
}

TEST(DyadicRefine, RandomPartitions) {
    Engine rng(17);
    const std::size_t n = 1024;
    for (int trial = 0; trial < 1000; ++trial) {
        const Partition p = testing::random_partition(n, 1 + rng() % 60, rng);
        const Partition r = dyadic_refine(p, n);
        ASSERT_TRUE(r.covers(n));
        EXPECT_TRUE(r.refines(p));
        for (const auto& I : r) EXPECT_TRUE(I.is_dyadic());
        EXPECT_LE(r.size(), p.size() * (2 * 10 + 2));
    }
}

TEST(Membership, Examples) {
    EXPECT_TRUE(is_member(binomial_pmf(10, 0.5), ShapeClass::logconcave()));
    EXPECT_FALSE(is_member(H({0.5, 0, 0.5}), ShapeClass::logconcave()));
    std::vector<double> g(30);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(0.7, static_cast<double>(i)) * 0.3;
    EXPECT_TRUE(is_member(Histogram::from_weights(g), ShapeClass::mhr()));
    EXPECT_THROW(is_member(H({0.5, 0.5}), ShapeClass::pbd()), UnsupportedClass);
}

TEST(Membership, ExactHazardOfTruncatedGeometric) {
    const std::size_t n = 12;
    const double q = 0.3;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(1 - q, static_cast<double>(i)) * q;
    const Histogram d = Histogram::from_weights(w);
    // Truncation makes the hazard q / (1 - (1-q)^(n-i+1)), non-decreasing up to 1.
    double prev = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double h = d(i) / d.tail(i);
        EXPECT_NEAR(h, q / (1 - std::pow(1 - q, static_cast<double>(n - i + 1))), 1e-12);
        EXPECT_GE(h, prev);
        prev = h;
    }
    EXPECT_TRUE(is_member(d, ShapeClass::mhr()));
}

TEST(Membership, ValleyIsNotUnimodal) {
    EXPECT_FALSE(is_member(H({0.4, 0.2, 0.4}), ShapeClass::unimodal()));
    EXPECT_TRUE(is_member(H({0.4, 0.2, 0.4}), ShapeClass::tmodal(1)));
    EXPECT_TRUE(is_member(H({0.1, 0.8, 0.1}), ShapeClass::unimodal()));
}

TEST(Membership, ClassInclusions) {
    Engine rng(19);
    int concave = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 3 + trial % 18;
        Histogram d;
        switch (trial % 3) {
            case 0: d = testing::random_grid_pmf(n, 20, rng); break;
            case 1: d = testing::random_concave(n, rng); break;
            default: d = testing::random_logconcave(n, rng); break;
        }
        const bool c = is_member(d, ShapeClass::concave());
        const bool lc = is_member(d, ShapeClass::logconcave());
        concave += c;
        if (c) {
            EXPECT_TRUE(lc) << trial;
        }
        if (lc) {
            EXPECT_TRUE(is_member(d, ShapeClass::unimodal())) << trial;
        }
    }
    EXPECT_GT(concave, 3000);
}

TEST(Sampling, PointMassAlwaysDrawsIt) {
    HistogramSource src(Histogram::point_mass(5, 1), 3);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(src.draw(), 1u);
    EXPECT_EQ(src.consumed(), 1000u);
}

TEST(Sampling, UniformFrequencies) {
    HistogramSource src(Histogram::uniform(4), 99);
    std::vector<int> c(4, 0);
    for (int i = 0; i < 100000; ++i) ++c[src.draw() - 1];
    for (int x : c) EXPECT_NEAR(x / 1e5, 0.25, 0.01);
}

TEST(Sampling, SameSeedSameStream) {
    Engine rng(1);
    const Histogram d = random_pmf(20, rng);
    HistogramSource a(d, 42), b(d, 42);
    for (int i = 0; i < 500; ++i) ASSERT_EQ(a.draw(), b.draw());
    EXPECT_EQ(a.draw_counts(1000), b.draw_counts(1000));
    EXPECT_EQ(a.consumed(), 1500u);
}

TEST(Sampling, MultinomialCountsMatchMasses) {
    const Histogram d = H({0.1, 0.2, 0.3, 0.4});
    HistogramSource src(d, 8);
    const auto c = src.draw_counts(400000);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(c[i] / 4e5, d.masses()[i], 0.005);
}

TEST(Sampling, LimitThrows) {
    HistogramSource src(Histogram::uniform(3), 1);
    src.set_limit(10);
    src.draw_counts(10);
    EXPECT_THROW(src.draw(), SourceExhausted);
}

TEST(Seeds, MixIsStableAndSpreads) {
    // First output of the reference splitmix64 generator seeded with 0.
    EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
    EXPECT_EQ(mix_seed(123, 456), mix_seed(123, 456));
}

}  // namespace
}  // namespace shapetest
