#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "shapetest/lp.hpp"
#include "shapetest/sampling.hpp"

namespace shapetest::lp {
namespace {

TEST(Solve, SingleLowerBound) {
    LinearProgram p(1);
    p.set_objective({1.0});
    p.add_row({{0, 1.0}}, Rel::Ge, 3.0);
    const auto r = solve(p);
    ASSERT_EQ(r.status, Status::Optimal);
    EXPECT_NEAR(r.x[0], 3.0, 1e-9);
    EXPECT_NEAR(r.objective, 3.0, 1e-9);
}

TEST(Solve, Infeasible) {
    LinearProgram p(1);
    p.add_row({{0, 1.0}}, Rel::Le, 1.0);
    p.add_row({{0, 1.0}}, Rel::Ge, 2.0);
    EXPECT_EQ(solve(p).status, Status::Infeasible);
}

TEST(Solve, Unbounded) {
    LinearProgram p(2);
    p.set_objective({-1.0, 0.0});
    p.add_row({{0, 1.0}, {1, -1.0}}, Rel::Le, 1.0);
    EXPECT_EQ(solve(p).status, Status::Unbounded);
}

TEST(Solve, FeasibilityMode) {
    LinearProgram p(2);
    p.add_row({{0, 1.0}, {1, 1.0}}, Rel::Eq, 1.0);
    p.add_row({{0, 1.0}, {1, -1.0}}, Rel::Ge, 0.5);
    const auto r = solve(p);
    ASSERT_TRUE(r.feasible());
    EXPECT_LE(p.max_violation(r.x), 1e-7);
}

// min |0.2 - q1| + |0.8 - q2| over q1 >= q2, q1 + q2 = 1, with t_i >= |d_i - q_i|.
TEST(Solve, MonotoneL1Fit) {
    const double d[2] = {0.2, 0.8};
    LinearProgram p(4);  // q1 q2 t1 t2
    p.set_objective({0, 0, 1, 1});
    for (std::size_t i = 0; i < 2; ++i) {
        p.add_row({{2 + i, 1.0}, {i, 1.0}}, Rel::Ge, d[i]);
        p.add_row({{2 + i, 1.0}, {i, -1.0}}, Rel::Ge, -d[i]);
    }
    p.add_row({{0, 1.0}, {1, -1.0}}, Rel::Ge, 0.0);
    p.add_row({{0, 1.0}, {1, 1.0}}, Rel::Eq, 1.0);
    const auto r = solve(p);
    ASSERT_EQ(r.status, Status::Optimal);

    // Grid oracle, step 0.001.
    double best = 1e9;
    for (int a = 0; a <= 1000; ++a) {
        const double q1 = a / 1000.0, q2 = 1.0 - q1;
        if (q1 >= q2) best = std::min(best, std::abs(d[0] - q1) + std::abs(d[1] - q2));
    }
    EXPECT_NEAR(best, 0.6, 1e-12);
    EXPECT_NEAR(r.objective, best, 1e-7);
}

struct HandLp {
    LinearProgram lp;
    double optimum;
    std::vector<double> dual;  // hand-derived row duals
};

// Each case lists a dual point worked out by hand; with x >= 0 and no finite
// upper bounds, c - A^T y >= 0 plus sign conditions make it dual feasible
// and b^T y is a lower bound on the primal.
std::vector<HandLp> hand_lps() {
    std::vector<HandLp> out;
    {
        LinearProgram p(2);
        p.set_objective({1, 1});
        p.add_row({{0, 1}, {1, 2}}, Rel::Ge, 4);
        p.add_row({{0, 3}, {1, 1}}, Rel::Ge, 6);
        out.push_back({p, 2.8, {0.4, 0.2}});
    }
    {
        LinearProgram p(2);
        p.set_objective({-1, -1});
        p.add_row({{0, 1}, {1, 1}}, Rel::Le, 3);
        p.add_row({{0, 1}}, Rel::Le, 2);
        out.push_back({p, -3.0, {-1.0, 0.0}});
    }
    {
        LinearProgram p(3);
        p.set_objective({2, 3, 1});
        p.add_row({{0, 1}, {1, 1}, {2, 1}}, Rel::Eq, 1);
        p.add_row({{0, 1}, {1, -1}}, Rel::Ge, 0);
        out.push_back({p, 1.0, {1.0, 0.0}});
    }
    {
        LinearProgram p(2);
        p.set_objective({3, 2});
        p.add_row({{0, 1}, {1, 1}}, Rel::Ge, 2);
        p.add_row({{0, 1}, {1, -1}}, Rel::Le, 1);
        out.push_back({p, 4.0, {2.0, 0.0}});
    }
    {
        LinearProgram p(3);
        p.set_objective({1, 2, 3});
        p.add_row({{0, 1}, {1, 1}}, Rel::Ge, 1);
        p.add_row({{1, 1}, {2, 1}}, Rel::Ge, 1);
        p.add_row({{0, 1}, {2, 1}}, Rel::Ge, 1);
        // Optimal face x = (1-t, 1-t, t), t in [0, 1/2], cost 3.
        out.push_back({p, 3.0, {0.0, 2.0, 1.0}});
    }
    return out;
}

TEST(Duality, HandDualsCertifyOptimum) {
    for (const auto& h : hand_lps()) {
        const auto r = solve(h.lp);
        ASSERT_EQ(r.status, Status::Optimal);
        EXPECT_NEAR(r.objective, h.optimum, 1e-9);
        EXPECT_LE(h.lp.max_violation(r.x), 1e-7);

        // Dual feasibility of the hand point.
        std::vector<double> reduced = h.lp.objective();
        double bty = 0.0;
        for (std::size_t i = 0; i < h.lp.rows().size(); ++i) {
            const auto& row = h.lp.rows()[i];
            if (row.rel == Rel::Ge) {
                EXPECT_GE(h.dual[i], 0.0);
            } else if (row.rel == Rel::Le) {
                EXPECT_LE(h.dual[i], 0.0);
            }
            for (const auto& [j, a] : row.coefs) reduced[j] -= a * h.dual[i];
            bty += row.rhs * h.dual[i];
        }
        for (double rc : reduced) EXPECT_GE(rc, -1e-12);
        EXPECT_NEAR(bty, h.optimum, 1e-12);

        // The solver's own duals close the gap too.
        ASSERT_EQ(r.duals.size(), h.lp.rows().size());
        double solver_bty = 0.0;
        for (std::size_t i = 0; i < r.duals.size(); ++i) solver_bty += h.lp.rows()[i].rhs * r.duals[i];
        EXPECT_NEAR(solver_bty, r.objective, 1e-6);
    }
}

TEST(Duality, UpperBoundedCase) {
    LinearProgram p(2);
    p.set_objective({-1, -2});
    p.set_bounds(0, 0, 1);
    p.set_bounds(1, 0, 1);
    p.add_row({{0, 1}, {1, 1}}, Rel::Le, 1.5);
    const auto r = solve(p);
    ASSERT_EQ(r.status, Status::Optimal);
    EXPECT_NEAR(r.objective, -2.5, 1e-9);
    EXPECT_NEAR(r.x[0], 0.5, 1e-9);
    EXPECT_NEAR(r.x[1], 1.0, 1e-9);
}

// Random LPs built around a known feasible point.
TEST(Solve, RandomFeasibleLpsSatisfyConstraints) {
    Engine rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t nv = 2 + trial % 12, nr = 1 + trial % 15;
        LinearProgram p(nv);
        std::vector<double> x0(nv), c(nv);
        for (std::size_t j = 0; j < nv; ++j) {
            x0[j] = 0.5 * (u(rng) + 1.0);
            p.set_bounds(j, 0.0, 1.0);
            c[j] = u(rng);
        }
        p.set_objective(c);
        for (std::size_t i = 0; i < nr; ++i) {
            std::vector<double> a(nv);
            double ax = 0.0;
            for (std::size_t j = 0; j < nv; ++j) {
                a[j] = u(rng);
                ax += a[j] * x0[j];
            }
            const int kind = static_cast<int>(rng() % 3);
            if (kind == 0) p.add_dense_row(a, Rel::Le, ax + 0.1 * (u(rng) + 1.0));
            else if (kind == 1) p.add_dense_row(a, Rel::Ge, ax - 0.1 * (u(rng) + 1.0));
            else p.add_dense_row(a, Rel::Eq, ax);
        }
        const auto r = solve(p);
        ASSERT_EQ(r.status, Status::Optimal) << trial;
        EXPECT_LE(p.max_violation(r.x), 1e-7) << trial;
        double cx0 = 0.0;
        for (std::size_t j = 0; j < nv; ++j) cx0 += c[j] * x0[j];
        EXPECT_LE(r.objective, cx0 + 1e-9) << trial;
    }
}

TEST(Solve, DegenerateProblemTerminates) {
    // Many redundant constraints through one vertex.
    LinearProgram p(3);
    p.set_objective({-1, -1, -1});
    for (int k = 1; k <= 30; ++k) p.add_row({{0, 1.0 * k}, {1, 1.0}, {2, 1.0}}, Rel::Le, 1.0);
    const auto r = solve(p);
    ASSERT_EQ(r.status, Status::Optimal);
    EXPECT_NEAR(r.objective, -1.0, 1e-9);
}

TEST(Solve, RejectsMalformedRows) {
    LinearProgram p(2);
    EXPECT_THROW(p.add_row({{5, 1.0}}, Rel::Le, 1.0), std::invalid_argument);
    EXPECT_THROW(p.add_dense_row({1.0}, Rel::Le, 1.0), std::invalid_argument);
    EXPECT_THROW(p.set_objective({1.0}), std::invalid_argument);
}

TEST(Dump, TextualForm) {
    LinearProgram p(2);
    p.set_objective({1, -2});
    p.add_row({{0, 1}, {1, 1}}, Rel::Le, 4);
    std::ostringstream os;
    p.dump(os);
    const std::string s = os.str();
    EXPECT_NE(s.find("Minimize"), std::string::npos);
    EXPECT_NE(s.find("Subject To"), std::string::npos);
    EXPECT_NE(s.find("<= 4"), std::string::npos);
    EXPECT_NE(s.find("End"), std::string::npos);
}

}  // namespace
}  // namespace shapetest::lp
