// Lower-bound constructions: a Paninski perturbation, a sum of uniform
// variables, and the Binomial embedding of a small pmf.
#include <cstdio>

#include "shapetest/hardness.hpp"

int main() {
    using namespace shapetest;
    const Histogram p = paninski_instance(100, 0.4, std::uint64_t{7});
    std::printf("paninski: L1 to uniform %.3f\n", l1_distance(p, Histogram::uniform(100)));

    const Histogram s = ksiirv_hard_instance(20, 4);
    std::printf("ksiirv(20,4): support %zu, truncated 2/3-norm %.3f\n", s.n(), truncated_twothirds_norm(s, 0.1));

    const auto e = make_binomial_embedding(50, 0.01);
    std::printf("embedding: c %.5f, N %llu, window mass %.4f\n", e.c, static_cast<unsigned long long>(e.N), e.p);
}
