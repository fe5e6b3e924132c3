#pragma once

// Poisson binomial distributions: exact pmf, a simplified parameter cover,
// and distance estimates to conditioned PBDs and binomials.
//
// A histogram on [n] is read as a law on {0..n-1}: index i carries value i-1,
// so it is compared against PBDs with N = n-1 trials.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "../histogram.hpp"
#include "../shape.hpp"

namespace shapetest {

// Parameters of a PBD: `ones` trials with p = 1, then groups of identical
// trials (p, multiplicity). Remaining trials have p = 0.
struct PbdParams {
    std::size_t ones = 0;
    std::vector<std::pair<double, std::size_t>> groups;

    std::size_t trials() const {
        std::size_t t = ones;
        for (const auto& g : groups) t += g.second;
        return t;
    }
};

// Exact pmf of sum_i Bernoulli(p_i) on {0..N} by the O(N^2) convolution DP.
inline Histogram pbd_pmf(const std::vector<double>& p) {
    std::vector<double> f{1.0};
    f.reserve(p.size() + 1);
    for (double pi : p) {
        if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("pbd_pmf: parameters must lie in [0,1]");
        f.push_back(0.0);
        for (std::size_t k = f.size() - 1; k > 0; --k) f[k] = f[k] * (1.0 - pi) + f[k - 1] * pi;
        f[0] *= 1.0 - pi;
    }
    return Histogram(std::move(f));
}

// pmf of `params` padded with zero trials to N trials.
inline Histogram pbd_pmf(const PbdParams& params, std::size_t N) {
    if (params.trials() > N) throw std::invalid_argument("pbd_pmf: more trials than N");
    std::vector<double> p(params.ones, 1.0);
    for (const auto& [q, c] : params.groups) p.insert(p.end(), c, q);
    p.resize(N, 0.0);
    return pbd_pmf(p);
}

struct PbdCoverOptions {
    // Resolution of the shifted-binomial family, in units of its spread.
    double resolution = 0.05;
    // Grid of the sparse family (at most three distinct probabilities).
    double sparse_step = 0.1;
    std::size_t sparse_max_trials = 30;
};

namespace detail {

class LogFactorials {
public:
    explicit LogFactorials(std::size_t N) : t_(N + 2, 0.0) {
        for (std::size_t i = 1; i < t_.size(); ++i) t_[i] = t_[i - 1] + std::log(static_cast<double>(i));
    }
    double operator()(std::size_t k) const { return t_[k]; }

private:
    std::vector<double> t_;
};

// Values of Bin(m, q) + s on the value window [vlo, vhi], written to `out`
// starting at value max(vlo, s). Returns that first value.
inline std::size_t shifted_binomial_window(const LogFactorials& lf, std::size_t m, double q, std::size_t s,
                                           std::size_t vlo, std::size_t vhi, std::vector<double>& out) {
    out.clear();
    const std::size_t klo = vlo > s ? vlo - s : 0;
    if (vhi < s) return vlo;
    const std::size_t khi = std::min(m, vhi - s);
    if (klo > khi) return vlo;
    if (q <= 0.0 || q >= 1.0) {
        const std::size_t k0 = q <= 0.0 ? 0 : m;
        for (std::size_t k = klo; k <= khi; ++k) out.push_back(k == k0 ? 1.0 : 0.0);
        return s + klo;
    }
    const double lq = std::log(q), lr = std::log1p(-q);
    // Start at the mode inside the window so the recurrence never underflows
    // before reaching the bulk.
    std::size_t kstart = static_cast<std::size_t>(std::floor((static_cast<double>(m) + 1.0) * q));
    kstart = std::clamp(kstart, klo, khi);
    out.assign(khi - klo + 1, 0.0);
    const auto logpmf = [&](std::size_t k) {
        return lf(m) - lf(k) - lf(m - k) + static_cast<double>(k) * lq + static_cast<double>(m - k) * lr;
    };
    const double ratio = q / (1.0 - q);
    double v = std::exp(logpmf(kstart));
    out[kstart - klo] = v;
    for (std::size_t k = kstart; k < khi; ++k) {
        v *= static_cast<double>(m - k) / static_cast<double>(k + 1) * ratio;
        out[k + 1 - klo] = v;
    }
    v = out[kstart - klo];
    for (std::size_t k = kstart; k > klo; --k) {
        v *= static_cast<double>(k) / static_cast<double>(m - k + 1) / ratio;
        out[k - 1 - klo] = v;
    }
    return s + klo;
}

// Cantelli: a law whose mean sits more than 3 sd outside a window keeps at
// most 1/10 of its mass there.
constexpr double window_sd = 3.0;

}  // namespace detail

// Enumerates the simplified cover restricted to PBDs whose bulk can meet the
// hint (1-based index interval). The callback receives each element with its
// pmf on the hint window: values[j] is the mass of value offset + j.
//
// Families: Bin(N, q) on a gamma/N grid of q; point masses; shifted binomials
// s + Bin(m, q) at the given resolution; sparse PBDs with at most three
// distinct probabilities when N is small.
template <class F>
void for_each_pbd_cover_element(std::size_t N, double gamma, const Interval& hint, const PbdCoverOptions& opt,
                                F&& f) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("pbd_cover: gamma must be in (0,1)");
    if (hint.hi < hint.lo || hint.lo < 1 || hint.hi > N + 1) throw std::invalid_argument("pbd_cover: bad hint");
    const std::size_t vlo = hint.lo - 1, vhi = hint.hi - 1;
    const double W = static_cast<double>(vhi - vlo + 1);
    const double rho = opt.resolution;
    const detail::LogFactorials lf(N);
    std::vector<double> buf;
    PbdParams params;

    const auto emit_binomial = [&](std::size_t m, double q, std::size_t s) {
        const std::size_t off = detail::shifted_binomial_window(lf, m, q, s, vlo, vhi, buf);
        if (buf.empty()) return;
        params.ones = s;
        params.groups.assign(1, {q, m});
        f(static_cast<const PbdParams&>(params), off, static_cast<const std::vector<double>&>(buf));
    };
    const double dlo = static_cast<double>(vlo), dhi = static_cast<double>(vhi);
    const auto mean_ok = [&](double mu, double sd) {
        return mu >= dlo - detail::window_sd * sd - 1.0 && mu <= dhi + detail::window_sd * sd + 1.0;
    };

    // Point masses.
    for (std::size_t s = vlo; s <= vhi; ++s) {
        buf.assign(1, 1.0);
        params.ones = s;
        params.groups.clear();
        f(static_cast<const PbdParams&>(params), s, static_cast<const std::vector<double>&>(buf));
    }
    if (N == 0) return;

    // Bin(N, q) for q = j gamma / N.
    {
        const double Nd = static_cast<double>(N);
        const double step = gamma / Nd;
        const auto jmax = static_cast<std::size_t>(std::floor(1.0 / step));
        for (std::size_t j = 1; j <= jmax; ++j) {
            const double q = static_cast<double>(j) * step;
            if (q >= 1.0) break;
            const double sd = std::sqrt(Nd * q * (1.0 - q));
            const double mu = Nd * q;
            if (mu > dhi + detail::window_sd * sd + 1.0) break;
            if (!mean_ok(mu, sd)) continue;
            emit_binomial(N, q, 0);
        }
    }

    // Small spread: m <= 8 trials (plus a few larger m) on a q-grid.
    {
        std::vector<std::size_t> ms;
        for (std::size_t m = 1; m <= std::min<std::size_t>(N, 8); ++m) ms.push_back(m);
        for (std::size_t m : {16, 32, 64})
            if (m < N) ms.push_back(m);
        const auto K = static_cast<std::size_t>(std::ceil(2.0 / rho));
        for (std::size_t m : ms) {
            for (std::size_t k = 1; k < K; ++k) {
                const double q = static_cast<double>(k) / static_cast<double>(K);
                const double md = static_cast<double>(m);
                if (md * q * (1.0 - q) >= 1.0) continue;  // handled below
                const std::size_t s_lo = vlo > m ? vlo - m : 0;
                for (std::size_t s = s_lo; s <= std::min(vhi, N - m); ++s) emit_binomial(m, q, s);
            }
        }
    }

    // Spread >= 1: sd on a (1+rho)-geometric grid, skew u = 1-2q on a grid of
    // step rho*sd, mean on a grid of step rho*sd.
    {
        const double Nd = static_cast<double>(N);
        const double sd_max = std::min(10.0 * W, std::sqrt(Nd) / 2.0);
        for (double sd = 1.0; sd <= sd_max; sd *= 1.0 + rho) {
            const double var = sd * sd;
            const double u_max = std::sqrt(std::max(0.0, 1.0 - 4.0 * var / Nd));
            const double du = rho * sd;
            for (double u = 0.0;; u += du) {
                const bool last = u >= u_max;
                const double uu = std::min(u, u_max);
                auto m = static_cast<std::size_t>(std::llround(4.0 * var / (1.0 - uu * uu)));
                m = std::clamp<std::size_t>(m, 1, N);
                const double disc = std::max(0.0, 1.0 - 4.0 * var / static_cast<double>(m));
                const double q_small = 0.5 * (1.0 - std::sqrt(disc));
                const double md = static_cast<double>(m);
                for (double q0 : {q_small, 1.0 - q_small}) {
                    const double mu_lo = std::max(dlo - detail::window_sd * sd - 1.0, md * q0);
                    const double mu_hi = std::min(dhi + detail::window_sd * sd + 1.0, Nd - md + md * q0);
                    for (double mu = mu_lo; mu <= mu_hi; mu += rho * sd) {
                        const double sf = std::floor(mu - md * q0 + 0.5);
                        if (sf < 0.0 || sf > Nd - md) continue;
                        const auto s = static_cast<std::size_t>(sf);
                        const double q = std::clamp((mu - sf) / md, 0.0, 1.0);
                        emit_binomial(m, q, s);
                    }
                    if (q_small == 0.5) break;
                }
                if (last) break;
            }
        }
    }

    // Sparse PBDs: at most three distinct probabilities from the grid, any
    // multiplicities, shifted by the ones.
    if (N <= opt.sparse_max_trials) {
        std::vector<double> grid;
        for (double p = opt.sparse_step; p < 1.0 - 1e-9; p += opt.sparse_step) grid.push_back(p);
        const std::size_t G = grid.size();
        const auto bin = [&](std::size_t g, std::size_t c) {
            std::vector<double> v(c + 1);
            for (std::size_t k = 0; k <= c; ++k) v[k] = std::exp(detail::log_binom_pmf(c, k, grid[g]));
            return v;
        };
        const auto conv = [](const std::vector<double>& a, const std::vector<double>& b) {
            std::vector<double> r(a.size() + b.size() - 1, 0.0);
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
            return r;
        };
        std::vector<double> window;
        const auto emit_pmf = [&](const std::vector<double>& pmf, std::size_t used) {
            for (std::size_t s = 0; s + used <= N; ++s) {
                if (s > vhi || s + used < vlo) continue;
                const std::size_t a = std::max(vlo, s), b = std::min(vhi, s + used);
                window.assign(pmf.begin() + static_cast<long>(a - s), pmf.begin() + static_cast<long>(b - s + 1));
                params.ones = s;
                f(static_cast<const PbdParams&>(params), a, static_cast<const std::vector<double>&>(window));
            }
        };
        for (std::size_t g1 = 0; g1 < G; ++g1)
            for (std::size_t c1 = 1; c1 <= N; ++c1) {
                const auto b1 = bin(g1, c1);
                params.groups.assign(1, {grid[g1], c1});
                emit_pmf(b1, c1);
                for (std::size_t g2 = g1 + 1; g2 < G; ++g2)
                    for (std::size_t c2 = 1; c1 + c2 <= N; ++c2) {
                        const auto b12 = conv(b1, bin(g2, c2));
                        params.groups.assign({{grid[g1], c1}, {grid[g2], c2}});
                        emit_pmf(b12, c1 + c2);
                        for (std::size_t g3 = g2 + 1; g3 < G; ++g3)
                            for (std::size_t c3 = 1; c1 + c2 + c3 <= N; ++c3) {
                                params.groups.assign({{grid[g1], c1}, {grid[g2], c2}, {grid[g3], c3}});
                                emit_pmf(conv(b12, bin(g3, c3)), c1 + c2 + c3);
                            }
                    }
            }
    }
}

// The cover elements as a list.
inline std::vector<PbdParams> pbd_cover(std::size_t N, double gamma, const Interval& hint,
                                        const PbdCoverOptions& opt = {}) {
    std::vector<PbdParams> out;
    for_each_pbd_cover_element(N, gamma, hint, opt,
                               [&](const PbdParams& p, std::size_t, const std::vector<double>&) { out.push_back(p); });
    return out;
}

struct PbdDistance {
    double tau = std::numeric_limits<double>::infinity();  // +inf: no candidate passed the mass filter
    PbdParams best;
    std::size_t candidates = 0;
};

namespace detail {

// d conditioned on I, as values on the window.
inline std::vector<double> conditioned_window(const Histogram& d, const Interval& I) {
    const double mass = d.mass(I);
    if (!(mass > 0.0)) throw std::invalid_argument("pbd distance: d has no mass on I");
    std::vector<double> w(I.size());
    for (std::size_t i = I.lo; i <= I.hi; ++i) w[i - I.lo] = d(i) / mass;
    return w;
}

// ||dI - Q_I||_1 when Q(I) >= min_mass, else +inf. Q is given on
// [offset, offset + q.size()) in value coordinates.
inline double conditioned_l1(const std::vector<double>& dI, std::size_t vlo, std::size_t offset,
                             const std::vector<double>& q, double min_mass) {
    double mass = 0.0;
    for (double v : q) mass += v;
    if (mass < min_mass || !(mass > 0.0)) return std::numeric_limits<double>::infinity();
    const std::size_t a = offset - vlo, b = a + q.size();
    double l1 = 0.0, inside = 0.0;
    for (std::size_t j = a; j < b; ++j) {
        l1 += std::abs(dI[j] - q[j - a] / mass);
        inside += dI[j];
    }
    return l1 + (1.0 - inside);
}

}  // namespace detail

// min over cover elements Q with Q(I) >= 1 - (mass_eps + gamma/2) of
// ||d_I - Q_I||_1, gamma = eps/250. mass_eps defaults to eps.
inline PbdDistance pbd_distance(const Histogram& d, double eps, const Interval& I, const PbdCoverOptions& opt = {},
                                double mass_eps = -1.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("dist_to_pbd: eps must be in (0,1)");
    const std::size_t N = d.n() - 1;
    const double gamma = eps / 250.0;
    const double min_mass = 1.0 - ((mass_eps > 0.0 ? mass_eps : eps) + gamma / 2.0);
    const auto dI = detail::conditioned_window(d, I);
    PbdDistance out;
    for_each_pbd_cover_element(N, gamma, I, opt, [&](const PbdParams& p, std::size_t off, const std::vector<double>& q) {
        ++out.candidates;
        const double v = detail::conditioned_l1(dI, I.lo - 1, off, q, min_mass);
        if (v < out.tau) {
            out.tau = v;
            out.best = p;
        }
    });
    return out;
}

inline double dist_to_pbd(const Histogram& d, double eps, const Interval& I) { return pbd_distance(d, eps, I).tau; }
inline double dist_to_pbd(const Histogram& d, double eps) { return dist_to_pbd(d, eps, Interval{1, d.n()}); }

struct BinomialDistance {
    double tau = std::numeric_limits<double>::infinity();
    double q = 0.0;
};

// Same objective over Bin(N, q): q on a gamma/N grid, then golden-section
// refinement inside the best grid cell.
inline BinomialDistance binomial_distance(const Histogram& d, double eps, const Interval& I, double mass_eps = -1.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("dist_to_binomial: eps must be in (0,1)");
    const std::size_t N = d.n() - 1;
    const double gamma = eps / 250.0;
    const double min_mass = 1.0 - ((mass_eps > 0.0 ? mass_eps : eps) + gamma / 2.0);
    const auto dI = detail::conditioned_window(d, I);
    const detail::LogFactorials lf(N);
    const std::size_t vlo = I.lo - 1, vhi = I.hi - 1;
    std::vector<double> buf;
    const auto eval = [&](double q) {
        const std::size_t off = detail::shifted_binomial_window(lf, N, q, 0, vlo, vhi, buf);
        if (buf.empty()) return std::numeric_limits<double>::infinity();
        return detail::conditioned_l1(dI, vlo, off, buf, min_mass);
    };
    BinomialDistance out;
    for (double q : {0.0, 1.0}) {
        const double v = eval(q);
        if (v < out.tau) out = {v, q};
    }
    if (N == 0) return out;
    const double Nd = static_cast<double>(N), step = gamma / Nd;
    const auto J = static_cast<std::size_t>(std::ceil(1.0 / step));
    for (std::size_t j = 1; j < J; ++j) {
        const double q = static_cast<double>(j) * step;
        const double sd = std::sqrt(Nd * q * (1.0 - q));
        if (Nd * q > static_cast<double>(vhi) + detail::window_sd * sd + 1.0) break;
        if (Nd * q < static_cast<double>(vlo) - detail::window_sd * sd - 1.0) continue;
        const double v = eval(q);
        if (v < out.tau) out = {v, q};
    }
    if (std::isfinite(out.tau) && out.q > 0.0 && out.q < 1.0) {
        double a = std::max(0.0, out.q - step), b = std::min(1.0, out.q + step);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = eval(x1), f2 = eval(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = eval(x2);
            }
        }
        const double qm = f1 <= f2 ? x1 : x2, fm = std::min(f1, f2);
        if (fm < out.tau) out = {fm, qm};
    }
    return out;
}

inline double dist_to_binomial(const Histogram& d, double eps, const Interval& I) {
    return binomial_distance(d, eps, I).tau;
}
inline double dist_to_binomial(const Histogram& d, double eps) { return dist_to_binomial(d, eps, Interval{1, d.n()}); }

}  // namespace shapetest
