#pragma once

// Special-function helpers shared by the Fock-space and radial modules.
// Everything that involves factorials or high powers is evaluated in the
// log domain so that dimensions of a few hundred stay finite.

#include <cmath>
#include <cstddef>
#include <vector>

namespace qha::special {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Generalized Laguerre polynomials L_n^{(alpha)}(x) for n = 0..count-1,
/// stored as mantissa * exp(log_scale). The forward three-term recurrence is
/// stable (polynomials are the dominant solution); the running rescale keeps
/// the mantissa inside double range for large n and x.
class ScaledLaguerre {
public:
    ScaledLaguerre(int count, double alpha, double x) : mantissa_(count), log_scale_(count) {
        if (count == 0) return;
        mantissa_[0] = 1.0;
        log_scale_[0] = 0.0;
        if (count == 1) return;
        double prev = 1.0;
        double cur = 1.0 + alpha - x;
        double acc = 0.0;
        mantissa_[1] = cur;
        log_scale_[1] = 0.0;
        constexpr double kBig = 1e100;
        const double log_big = std::log(kBig);
        for (int n = 1; n + 1 < count; ++n) {
            const double next = ((2.0 * n + 1.0 + alpha - x) * cur - (n + alpha) * prev) / (n + 1.0);
            prev = cur;
            cur = next;
            if (std::abs(cur) > kBig) {
                cur /= kBig;
                prev /= kBig;
                acc += log_big;
            }
            mantissa_[n + 1] = cur;
            log_scale_[n + 1] = acc;
        }
    }

    std::size_t size() const { return mantissa_.size(); }
    double mantissa(std::size_t n) const { return mantissa_[n]; }
    double log_scale(std::size_t n) const { return log_scale_[n]; }

    /// log|L_n|; -inf at an exact zero.
    double log_abs(std::size_t n) const {
        return mantissa_[n] == 0.0 ? -INFINITY : std::log(std::abs(mantissa_[n])) + log_scale_[n];
    }
    double sign(std::size_t n) const { return mantissa_[n] < 0.0 ? -1.0 : 1.0; }
    double value(std::size_t n) const { return mantissa_[n] * std::exp(log_scale_[n]); }

private:
    std::vector<double> mantissa_;
    std::vector<double> log_scale_;
};

/// Poisson(x) probability mass at m, log-domain evaluated.
inline double poisson_pmf(int m, double x) {
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    return std::exp(-x + m * std::log(x) - log_factorial(m));
}

/// P(Poisson(x) >= m), summed upward from m so there is no cancellation.
inline double poisson_upper_tail(int m, double x) {
    if (m <= 0) return 1.0;
    if (x == 0.0) return 0.0;
    double sum = 0.0;
    for (int k = m;; ++k) {
        const double p = poisson_pmf(k, x);
        sum += p;
        if (k > x && p < 1e-18 * sum) break;
        if (k > x && p == 0.0) break;
    }
    return sum;
}

}  // namespace qha::special
