#pragma once

// Fixture distributions over [1,n].

#include <cmath>
#include <stdexcept>
#include <vector>

#include "histogram.hpp"
#include "shape.hpp"

namespace shapetest::gen {

// Non-increasing staircase with `steps` equal-width levels steps, steps-1, ..., 1.
inline Histogram staircase(std::size_t n, std::size_t steps) {
    if (n == 0 || steps == 0 || steps > n) throw std::invalid_argument("staircase: need 1 <= steps <= n");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(steps - i * steps / n);
    return Histogram::from_weights(std::move(w));
}

// p(i) proportional to i (increasing) or n+1-i.
inline Histogram ramp(std::size_t n, bool increasing) {
    if (n == 0) throw std::invalid_argument("ramp: empty domain");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(increasing ? i + 1 : n - i);
    return Histogram::from_weights(std::move(w));
}

// p(i) proportional to r^(i-1).
inline Histogram geometric(std::size_t n, double r) {
    if (n == 0 || !(r > 0.0)) throw std::invalid_argument("geometric: need n > 0 and r > 0");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(r, static_cast<double>(i));
    return Histogram::from_weights(std::move(w));
}

// Bin(n-1, q) read on [1,n].
inline Histogram binomial(std::size_t n, double q) {
    if (n == 0) throw std::invalid_argument("binomial: empty domain");
    return binomial_pmf(n - 1, q);
}

// Equal mixture of two discretized Gaussians centred at c1, c2 (1-based).
inline Histogram bimodal(std::size_t n, double c1, double c2, double width) {
    if (n == 0 || !(width > 0.0)) throw std::invalid_argument("bimodal: need n > 0 and width > 0");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1);
        w[i] = std::exp(-0.5 * std::pow((x - c1) / width, 2)) + std::exp(-0.5 * std::pow((x - c2) / width, 2));
    }
    return Histogram::from_weights(std::move(w));
}

// Mass `left` uniform on [1, len], the rest uniform on [n-len+1, n].
inline Histogram two_block(std::size_t n, std::size_t len, double left) {
    if (len == 0 || 2 * len > n) throw std::invalid_argument("two_block: need 1 <= len <= n/2");
    if (!(left >= 0.0 && left <= 1.0)) throw std::invalid_argument("two_block: left mass must be in [0,1]");
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        m[i] = left / static_cast<double>(len);
        m[n - len + i] = (1.0 - left) / static_cast<double>(len);
    }
    return Histogram(std::move(m));
}

// Two levels: `high` on [1, cut], 1 after.
inline Histogram step(std::size_t n, std::size_t cut, double high) {
    if (cut == 0 || cut >= n || !(high > 0.0)) throw std::invalid_argument("step: need 1 <= cut < n, high > 0");
    std::vector<double> w(n, 1.0);
    for (std::size_t i = 0; i < cut; ++i) w[i] = high;
    return Histogram::from_weights(std::move(w));
}

// `blocks` equal-width blocks alternating between levels high and 1.
inline Histogram alternating(std::size_t n, std::size_t blocks, double high) {
    if (blocks == 0 || blocks > n || !(high > 0.0)) throw std::invalid_argument("alternating: bad parameters");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (i * blocks / n) % 2 ? 1.0 : high;
    return Histogram::from_weights(std::move(w));
}

}  // namespace shapetest::gen
