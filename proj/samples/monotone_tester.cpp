// Test a decreasing ramp and a point mass at the right end for monotonicity.
#include <cstdio>

#include "shapetest/classes.hpp"
#include "shapetest/splittable.hpp"

int main() {
    using namespace shapetest;
    const std::size_t n = 256;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(n - i);
    const auto spec = make_class_spec(ShapeClass::monotone());
    for (const Histogram& d : {Histogram::from_weights(w), Histogram::point_mass(n, n)}) {
        HistogramSource src(d, 1);
        const auto out = test_splittable(src, n, 0.5, spec, 2);
        std::printf("%s after %llu samples (%s)\n", verdict_name(out.verdict),
                    static_cast<unsigned long long>(out.samples_used), out.reason.c_str());
    }
}
