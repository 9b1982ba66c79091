#include "cascadelab/stats.hpp"

#include <cmath>

#include "cascadelab/error.hpp"

namespace cascadelab {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double binomial_upper_tail_half(std::size_t n, std::size_t k) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    // Sum C(n, i) / 2^n in log space so large n does not overflow.
    double total = 0.0;
    for (std::size_t i = k; i <= n; ++i) {
        const double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                                std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0);
        total += std::exp(log_term);
    }
    return total < 1.0 ? total : 1.0;
}

SignTestResult sign_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ParameterError("sign test needs paired samples of equal length");
    SignTestResult r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b[i] > a[i]) {
            ++r.wins;
        } else if (b[i] < a[i]) {
            ++r.losses;
        } else {
            ++r.ties;
        }
    }
    r.p_value = binomial_upper_tail_half(r.wins + r.losses, r.wins);
    return r;
}

}  // namespace cascadelab
