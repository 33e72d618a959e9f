#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace minhash::detail {

// (1-x)^e for x in [0,1], e >= 0, computed as exp(e*log1p(-x)) so that
// exponents like 2^b = 256 do not lose precision for small x.
inline double pow1m(double x, double e) {
    if (e == 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    if (x == 1.0) return 0.0;
    return std::exp(e * std::log1p(-x));
}

// 1 - (1-x)^e, accurate when (1-x)^e is close to 1.
inline double one_minus_pow1m(double x, double e) {
    if (e == 0.0) return 0.0;
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    return -std::expm1(e * std::log1p(-x));
}

// exp(u) - exp(v) without cancellation between nearly equal operands; the
// bounded expm1 factor is anchored at the larger argument so underflow of the
// other side cannot produce 0 * inf.
inline double exp_diff(double u, double v) {
    if (u == v) return 0.0;  // covers u = v = -inf
    if (u > v) return std::exp(u) * -std::expm1(v - u);
    return std::exp(v) * std::expm1(u - v);
}

// Kahan-compensated accumulator; the cell matrices sum 2^16 terms and the
// normalization checks budget 1e-13.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace minhash::detail
