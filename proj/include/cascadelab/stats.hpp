#ifndef CASCADELAB_STATS_HPP
#define CASCADELAB_STATS_HPP

#include <cstddef>
#include <span>

namespace cascadelab {

double mean(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> xs);

struct SignTestResult {
    std::size_t wins = 0;    // pairs with b > a
    std::size_t losses = 0;  // pairs with b < a
    std::size_t ties = 0;    // dropped from the test
    double p_value = 1.0;    // one-sided, H1: b tends to exceed a
};

/// Exact one-sided paired sign test on (a[i], b[i]).
SignTestResult sign_test(std::span<const double> a, std::span<const double> b);

/// P(X >= k) for X ~ Binomial(n, 1/2), exact.
double binomial_upper_tail_half(std::size_t n, std::size_t k);

}  // namespace cascadelab

#endif  // CASCADELAB_STATS_HPP
