#pragma once

// Dense two-phase simplex with bounded variables.
//
// Rows are stored sparsely on input. Every inequality row gets a slack
// column and every row an artificial column, so the working problem is
// A x = b with l <= x <= u. Nonbasic columns sit at a finite bound (or at 0
// when free). Pricing is Dantzig's rule, switching to Bland's rule after a
// run of degenerate pivots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shapetest::lp {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class Rel { Le, Eq, Ge };
enum class Status { Optimal, Feasible, Infeasible, Unbounded };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "Optimal";
        case Status::Feasible: return "Feasible";
        case Status::Infeasible: return "Infeasible";
        case Status::Unbounded: return "Unbounded";
    }
    return "?";
}

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Row {
    std::vector<std::pair<std::size_t, double>> coefs;
    Rel rel = Rel::Le;
    double rhs = 0.0;
};

class LinearProgram {
public:
    explicit LinearProgram(std::size_t num_vars = 0)
        : lower_(num_vars, 0.0), upper_(num_vars, inf) {}

    std::size_t num_vars() const { return lower_.size(); }
    std::size_t num_rows() const { return rows_.size(); }

    std::size_t add_var(double lo = 0.0, double hi = inf, double cost = 0.0) {
        lower_.push_back(lo);
        upper_.push_back(hi);
        if (!objective_.empty() || cost != 0.0) {
            objective_.resize(lower_.size() - 1, 0.0);
            objective_.push_back(cost);
        }
        return lower_.size() - 1;
    }

    void set_bounds(std::size_t j, double lo, double hi) {
        lower_.at(j) = lo;
        upper_.at(j) = hi;
    }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }

    // Minimization objective. Leaving it empty means feasibility mode.
    void set_objective(std::vector<double> c) {
        if (c.size() != num_vars()) throw std::invalid_argument("lp: objective length mismatch");
        objective_ = std::move(c);
    }
    void set_cost(std::size_t j, double c) {
        objective_.resize(num_vars(), 0.0);
        objective_.at(j) = c;
    }
    bool has_objective() const { return !objective_.empty(); }
    const std::vector<double>& objective() const { return objective_; }

    void add_row(std::vector<std::pair<std::size_t, double>> coefs, Rel rel, double rhs) {
        for (const auto& [j, a] : coefs)
            if (j >= num_vars()) throw std::invalid_argument("lp: row references unknown variable");
        rows_.push_back({std::move(coefs), rel, rhs});
    }

    void add_dense_row(const std::vector<double>& a, Rel rel, double rhs) {
        if (a.size() != num_vars()) throw std::invalid_argument("lp: row length mismatch");
        std::vector<std::pair<std::size_t, double>> c;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] != 0.0) c.emplace_back(j, a[j]);
        rows_.push_back({std::move(c), rel, rhs});
    }

    const std::vector<Row>& rows() const { return rows_; }

    // Largest violation of any row or bound at x.
    double max_violation(const std::vector<double>& x) const {
        double worst = 0.0;
        for (std::size_t j = 0; j < num_vars(); ++j) {
            worst = std::max(worst, lower_[j] - x[j]);
            worst = std::max(worst, x[j] - upper_[j]);
        }
        for (const auto& r : rows_) {
            double s = 0.0;
            for (const auto& [j, a] : r.coefs) s += a * x[j];
            const double v = s - r.rhs;
            if (r.rel == Rel::Le) worst = std::max(worst, v);
            else if (r.rel == Rel::Ge) worst = std::max(worst, -v);
            else worst = std::max(worst, std::abs(v));
        }
        return worst;
    }

    // CPLEX-LP-like text, for inspection.
    void dump(std::ostream& os) const {
        os << (has_objective() ? "Minimize\n obj:" : "Minimize\n obj: 0");
        if (has_objective())
            for (std::size_t j = 0; j < num_vars(); ++j)
                if (objective_[j] != 0.0) os << ' ' << (objective_[j] < 0 ? "- " : "+ ")
                                             << std::abs(objective_[j]) << " x" << j;
        os << "\nSubject To\n";
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            os << " c" << i << ':';
            for (const auto& [j, a] : rows_[i].coefs)
                os << ' ' << (a < 0 ? "- " : "+ ") << std::abs(a) << " x" << j;
            os << (rows_[i].rel == Rel::Le ? " <= " : rows_[i].rel == Rel::Ge ? " >= " : " = ")
               << rows_[i].rhs << '\n';
        }
        os << "Bounds\n";
        for (std::size_t j = 0; j < num_vars(); ++j) os << ' ' << lower_[j] << " <= x" << j << " <= " << upper_[j] << '\n';
        os << "End\n";
    }

private:
    std::vector<double> lower_, upper_, objective_;
    std::vector<Row> rows_;
};

struct LpResult {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    // Row duals y with reduced costs c - A^T y (Optimal only).
    std::vector<double> duals;
    std::size_t pivots = 0;

    bool feasible() const { return status == Status::Optimal || status == Status::Feasible; }
};

struct SolveOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    double pivot_tol = 1e-9;
    // Accepted residual on the returned point.
    double check_tol = 1e-7;
    std::size_t degenerate_before_bland = 50;
    // 0 means 50 * (rows + columns) + 1000.
    std::size_t max_pivots = 0;
};

namespace detail {

enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

class Tableau {
public:
    Tableau(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {
        m_ = lp.num_rows();
        nv_ = lp.num_vars();
        for (const auto& r : lp.rows())
            if (r.rel != Rel::Eq) ++ns_;
        ncols_ = nv_ + ns_ + m_;
        width_ = ncols_;
        T_.assign(m_ * width_, 0.0);
        lo_.resize(ncols_);
        hi_.resize(ncols_);
        val_.assign(ncols_, 0.0);
        state_.resize(ncols_);
        basis_.resize(m_);
        beta_.resize(m_);
        sign_.resize(m_);

        for (std::size_t j = 0; j < nv_; ++j) {
            lo_[j] = lp.lower(j);
            hi_[j] = lp.upper(j);
            if (lo_[j] > hi_[j]) infeasible_bounds_ = true;
        }
        std::size_t s = nv_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& r = lp.rows()[i];
            double* row = &T_[i * width_];
            for (const auto& [j, a] : r.coefs) row[j] += a;
            if (r.rel != Rel::Eq) {
                row[s] = 1.0;
                lo_[s] = r.rel == Rel::Le ? 0.0 : -inf;
                hi_[s] = r.rel == Rel::Le ? inf : 0.0;
                ++s;
            }
        }
        for (std::size_t j = 0; j < nv_ + ns_; ++j) {
            if (std::isfinite(lo_[j])) {
                state_[j] = VarState::AtLower;
                val_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                state_[j] = VarState::AtUpper;
                val_[j] = hi_[j];
            } else {
                state_[j] = VarState::FreeZero;
                val_[j] = 0.0;
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double* row = &T_[i * width_];
            double resid = lp.rows()[i].rhs;
            for (std::size_t j = 0; j < nv_ + ns_; ++j)
                if (row[j] != 0.0) resid -= row[j] * val_[j];
            sign_[i] = resid >= 0.0 ? 1.0 : -1.0;
            if (sign_[i] < 0.0)
                for (std::size_t j = 0; j < nv_ + ns_; ++j) row[j] = -row[j];
            const std::size_t a = nv_ + ns_ + i;
            row[a] = 1.0;
            lo_[a] = 0.0;
            hi_[a] = inf;
            state_[a] = VarState::Basic;
            basis_[i] = a;
            beta_[i] = std::abs(resid);
        }
        max_pivots_ = opt.max_pivots ? opt.max_pivots : 50 * (m_ + ncols_) + 1000;
    }

    LpResult run() {
        LpResult res;
        if (infeasible_bounds_) return res;

        // Phase 1: minimize the sum of artificials.
        std::vector<double> c1(ncols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) c1[nv_ + ns_ + i] = 1.0;
        set_costs(c1);
        if (iterate(res.pivots) == Outcome::Unbounded)
            throw NumericalFailure("lp: phase 1 reported unbounded");
        double infeas = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= nv_ + ns_) infeas += beta_[i];
        for (std::size_t j = nv_ + ns_; j < ncols_; ++j)
            if (state_[j] != VarState::Basic) infeas += val_[j];
        if (infeas > std::max(opt_.feas_tol, 1e-9 * scale_rhs())) {
            res.status = Status::Infeasible;
            return res;
        }
        // Artificials are pinned at zero from here on.
        for (std::size_t j = nv_ + ns_; j < ncols_; ++j) {
            lo_[j] = hi_[j] = 0.0;
            if (state_[j] != VarState::Basic) {
                state_[j] = VarState::AtLower;
                val_[j] = 0.0;
            }
        }
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= nv_ + ns_) beta_[i] = 0.0;

        std::vector<double> c2(ncols_, 0.0);
        if (lp_.has_objective())
            for (std::size_t j = 0; j < nv_; ++j) c2[j] = lp_.objective()[j];
        set_costs(c2);
        if (lp_.has_objective()) {
            if (iterate(res.pivots) == Outcome::Unbounded) {
                res.status = Status::Unbounded;
                return res;
            }
        }

        res.x.assign(nv_, 0.0);
        std::vector<double> full = values();
        for (std::size_t j = 0; j < nv_; ++j) res.x[j] = clamp_to_bounds(j, full[j]);
        res.status = lp_.has_objective() ? Status::Optimal : Status::Feasible;
        if (lp_.has_objective()) {
            for (std::size_t j = 0; j < nv_; ++j) res.objective += lp_.objective()[j] * res.x[j];
            res.duals.resize(m_);
            for (std::size_t i = 0; i < m_; ++i) res.duals[i] = -d_[nv_ + ns_ + i] * sign_[i];
        }
        const double viol = lp_.max_violation(res.x);
        if (viol > opt_.check_tol * std::max(1.0, scale_rhs()))
            throw NumericalFailure("lp: returned point violates constraints by " + std::to_string(viol));
        return res;
    }

private:
    enum class Outcome { Done, Unbounded };

    double scale_rhs() const {
        double s = 0.0;
        for (const auto& r : lp_.rows()) s = std::max(s, std::abs(r.rhs));
        return s;
    }

    double clamp_to_bounds(std::size_t j, double v) const {
        if (v < lo_[j] && v > lo_[j] - 1e-7) return lo_[j];
        if (v > hi_[j] && v < hi_[j] + 1e-7) return hi_[j];
        return v;
    }

    std::vector<double> values() const {
        std::vector<double> x = val_;
        for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = beta_[i];
        return x;
    }

    void set_costs(const std::vector<double>& c) {
        c_ = c;
        d_ = c;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &T_[i * width_];
            for (std::size_t j = 0; j < ncols_; ++j)
                if (row[j] != 0.0) d_[j] -= cb * row[j];
        }
        for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
    }

    // Direction +1 raises the entering column, -1 lowers it, 0 = not eligible.
    int direction(std::size_t j) const {
        if (lo_[j] == hi_[j]) return 0;
        switch (state_[j]) {
            case VarState::Basic: return 0;
            case VarState::AtLower: return d_[j] < -opt_.opt_tol ? 1 : 0;
            case VarState::AtUpper: return d_[j] > opt_.opt_tol ? -1 : 0;
            case VarState::FreeZero: return d_[j] < -opt_.opt_tol ? 1 : d_[j] > opt_.opt_tol ? -1 : 0;
        }
        return 0;
    }

    Outcome iterate(std::size_t& pivots) {
        std::size_t degenerate = 0;
        bool bland = false;
        while (true) {
            std::size_t q = ncols_;
            int dir = 0;
            double best = 0.0;
            for (std::size_t j = 0; j < ncols_; ++j) {
                const int s = direction(j);
                if (s == 0) continue;
                if (bland) {
                    q = j;
                    dir = s;
                    break;
                }
                const double score = std::abs(d_[j]);
                if (score > best) {
                    best = score;
                    q = j;
                    dir = s;
                }
            }
            if (q == ncols_) return Outcome::Done;
            if (++pivots > max_pivots_) throw NumericalFailure("lp: pivot limit reached");

            // Ratio test.
            double theta = hi_[q] - lo_[q];  // bound flip
            std::size_t r = m_;
            double r_alpha = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = T_[i * width_ + q] * dir;
                if (std::abs(a) <= opt_.pivot_tol) continue;
                const std::size_t b = basis_[i];
                double lim;
                if (a > 0.0) {
                    if (!std::isfinite(lo_[b])) continue;
                    lim = (beta_[i] - lo_[b]) / a;
                } else {
                    if (!std::isfinite(hi_[b])) continue;
                    lim = (hi_[b] - beta_[i]) / -a;
                }
                if (lim < 0.0) lim = 0.0;
                bool take = false;
                if (lim < theta - 1e-12) {
                    take = true;
                } else if (lim <= theta + 1e-12 && r < m_) {
                    take = bland ? basis_[i] < basis_[r] : std::abs(a) > std::abs(r_alpha);
                }
                if (take) {
                    theta = std::min(theta, lim);
                    r = i;
                    r_alpha = a;
                }
            }
            if (!std::isfinite(theta)) return Outcome::Unbounded;

            if (theta <= 1e-12) {
                if (++degenerate >= opt_.degenerate_before_bland) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }

            const double step = theta * dir;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = T_[i * width_ + q];
                if (a != 0.0) beta_[i] -= a * step;
            }
            const double entering_value = current_value(q) + step;

            if (r == m_) {
                // Bound flip, no basis change.
                if (dir > 0) {
                    state_[q] = VarState::AtUpper;
                    val_[q] = hi_[q];
                } else {
                    state_[q] = VarState::AtLower;
                    val_[q] = lo_[q];
                }
                continue;
            }

            const std::size_t leave = basis_[r];
            const double a_leave = T_[r * width_ + q] * dir;
            if (a_leave > 0.0) {
                state_[leave] = VarState::AtLower;
                val_[leave] = lo_[leave];
            } else {
                state_[leave] = VarState::AtUpper;
                val_[leave] = hi_[leave];
            }
            pivot(r, q);
            basis_[r] = q;
            state_[q] = VarState::Basic;
            beta_[r] = entering_value;
        }
    }

    double current_value(std::size_t j) const { return val_[j]; }

    void pivot(std::size_t r, std::size_t q) {
        double* prow = &T_[r * width_];
        const double inv = 1.0 / prow[q];
        nz_.clear();
        for (std::size_t j = 0; j < ncols_; ++j) {
            if (prow[j] == 0.0) continue;
            prow[j] *= inv;
            if (std::abs(prow[j]) < 1e-14) prow[j] = 0.0;
            else nz_.push_back(j);
        }
        prow[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &T_[i * width_];
            const double f = row[q];
            if (f == 0.0) continue;
            for (std::size_t j : nz_) {
                row[j] -= f * prow[j];
                if (std::abs(row[j]) < 1e-14) row[j] = 0.0;
            }
            row[q] = 0.0;
        }
        const double fd = d_[q];
        if (fd != 0.0)
            for (std::size_t j : nz_) d_[j] -= fd * prow[j];
        d_[q] = 0.0;
    }

    const LinearProgram& lp_;
    SolveOptions opt_;
    std::size_t m_ = 0, nv_ = 0, ns_ = 0, ncols_ = 0, width_ = 0;
    std::vector<double> T_;
    std::vector<double> lo_, hi_, val_, beta_, sign_, c_, d_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_, nz_;
    std::size_t max_pivots_ = 0;
    bool infeasible_bounds_ = false;
};

}  // namespace detail

inline LpResult solve(const LinearProgram& lp, const SolveOptions& opt = {}) {
    if (lp.num_rows() == 0) {
        // Only bounds: pick the cheapest bound per variable.
        LpResult res;
        res.x.assign(lp.num_vars(), 0.0);
        for (std::size_t j = 0; j < lp.num_vars(); ++j) {
            const double lo = lp.lower(j), hi = lp.upper(j);
            if (lo > hi) return res;
            const double c = lp.has_objective() ? lp.objective()[j] : 0.0;
            double v = std::isfinite(lo) ? lo : std::isfinite(hi) ? hi : 0.0;
            if (c > 0.0) {
                if (!std::isfinite(lo)) { res.status = Status::Unbounded; return res; }
                v = lo;
            } else if (c < 0.0) {
                if (!std::isfinite(hi)) { res.status = Status::Unbounded; return res; }
                v = hi;
            }
            res.x[j] = v;
            res.objective += c * v;
        }
        res.status = lp.has_objective() ? Status::Optimal : Status::Feasible;
        return res;
    }
    detail::Tableau t(lp, opt);
    return t.run();
}

}  // namespace shapetest::lp
