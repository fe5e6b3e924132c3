// Distances from one pmf to several shape classes.
#include <cstdio>

#include "shapetest/project/exact.hpp"
#include "shapetest/project/histogram_dp.hpp"
#include "shapetest/project/pbd.hpp"

int main() {
    using namespace shapetest;
    const Histogram d({0.05, 0.3, 0.1, 0.25, 0.2, 0.1});
    std::printf("monotone   %.4f\n", dist_to_monotone(d));
    std::printf("unimodal   %.4f\n", dist_to_unimodal(d));
    std::printf("2-modal    %.4f\n", dist_to_tmodal(d, 2));
    std::printf("concave    %.4f\n", dist_to_concave(d));
    std::printf("2-hist     %.4f (within 4 OPT + 0.05)\n", dist_to_histogram_t(d, 2, 0.05));
    std::printf("binomial   %.4f (approx)\n", dist_to_binomial(d, 0.05));
}
