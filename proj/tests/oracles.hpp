// Independent reference implementations used to derive expected values.
// Deliberately naive; none of this shares code with the library.
#ifndef CASCADELAB_TESTS_ORACLES_HPP
#define CASCADELAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Repeats counted by pairwise comparison: element i repeats if an earlier
// element equals it.
inline double recurrence_rate(const std::vector<std::string>& v) {
    std::size_t repeats = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (v[j] == v[i]) {
                ++repeats;
                break;
            }
        }
    }
    return static_cast<double>(repeats) / static_cast<double>(v.size());
}

// Non-seed exposure probability on a single edge: every attempt at age a
// succeeds with p0 / c^a, attempts stop once that drops under the floor.
// Powers are computed directly, not by repeated division.
inline double two_node_exposure(double p0, double c, double floor) {
    double miss = 1.0;
    for (int a = 0;; ++a) {
        const double p = p0 / std::pow(c, a);
        if (p < floor) break;
        miss *= 1.0 - p;
    }
    return 1.0 - miss;
}

// Discrete power law P(x) ~ x^-alpha on [xmin, xmax], sampled by inverting
// the cumulative table.
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, std::uint64_t xmin, std::uint64_t xmax) : xmin_(xmin) {
        cdf_.reserve(xmax - xmin + 1);
        long double acc = 0;
        for (std::uint64_t x = xmin; x <= xmax; ++x) {
            acc += std::pow(static_cast<long double>(x), -static_cast<long double>(alpha));
            cdf_.push_back(acc);
        }
        for (auto& v : cdf_) v /= acc;
    }
    template <class Gen>
    std::uint64_t operator()(Gen& gen) {
        const long double u = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return xmin_ + static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
    }

private:
    std::uint64_t xmin_;
    std::vector<long double> cdf_;
};

inline double binomial_upper_tail(std::size_t n, std::size_t k, double p) {
    double total = 0.0;
    for (std::size_t i = k; i <= n; ++i) {
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                          i * std::log(p) + (n - i) * std::log1p(-p));
    }
    return total;
}

}  // namespace oracle

#endif
