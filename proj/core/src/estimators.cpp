#include "minhash/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace minhash {

namespace {

double clamp_to(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

EstimateResult finish(double a_raw, double f1, double f2, uint64_t k,
                      std::string tag, bool boundary) {
    EstimateResult res;
    res.a_hat_raw = a_raw;
    res.a_hat = clamp_to(a_raw, 0.0, std::min(f1, f2));
    res.r_hat = res.a_hat / (f1 + f2 - res.a_hat);
    res.t_hat = res.a_hat / std::min(f1, f2);
    res.at_boundary = boundary || res.a_hat != a_raw;
    res.estimator_tag = std::move(tag);
    (void)k;
    return res;
}

}  // namespace

ThreeCellProbs three_cell_probs(double f1, double f2, double a) {
    const double u = f1 + f2 - a;
    if (!(u > 0)) throw Error("union size must be positive");
    return {a / u, (f1 - a) / u, (f2 - a) / u};
}

ThreeCellProbs three_cell_probs(const PairGroundTruth& gt) {
    return three_cell_probs(double(gt.f1()), double(gt.f2()), double(gt.intersection()));
}

EstimateResult estimate_simple(const PairCounts3& counts, int64_t f1, int64_t f2,
                               SimpleEstimator which) {
    PairGroundTruth(f1, f2, 0);  // validates f1, f2 >= 1
    const uint64_t k = counts.total();
    if (k == 0) throw Error("counts are empty");
    const double df1 = double(f1), df2 = double(f2);

    double a_raw = 0;
    std::string tag;
    VarianceTarget vt;
    switch (which) {
        case SimpleEstimator::eq:
            a_raw = (df1 + df2) * double(counts.k_eq) / double(k + counts.k_eq);
            tag = "eq";
            vt = VarianceTarget::eq;
            break;
        case SimpleEstimator::lt:
            if (counts.k_lt == k) throw Error("k_lt = k: estimator a_lt degenerate");
            a_raw = df1 - df2 * double(counts.k_lt) / double(k - counts.k_lt);
            tag = "lt";
            vt = VarianceTarget::lt;
            break;
        case SimpleEstimator::gt:
            if (counts.k_gt == k) throw Error("k_gt = k: estimator a_gt degenerate");
            a_raw = df2 - df1 * double(counts.k_gt) / double(k - counts.k_gt);
            tag = "gt";
            vt = VarianceTarget::gt;
            break;
        default:
            throw Error("bad estimator");
    }
    EstimateResult res = finish(a_raw, df1, df2, k, std::move(tag), false);
    res.var_asymptotic = variance_simple(df1, df2, res.a_hat, k, vt);
    return res;
}

double variance_simple(double f1, double f2, double a, uint64_t k,
                       VarianceTarget which) {
    if (k == 0) throw Error("k must be >= 1");
    const double u = f1 + f2 - a;
    const double dk = double(k);
    switch (which) {
        case VarianceTarget::eq:
            return u * u * a * (f1 + f2 - 2 * a) / ((f1 + f2) * (f1 + f2)) / dk;
        case VarianceTarget::lt:
            return u * u * (f1 - a) / f2 / dk;
        case VarianceTarget::gt:
            return u * u * (f2 - a) / f1 / dk;
        case VarianceTarget::classic_r: {
            const double r = a / u;
            return r * (1 - r) / dk;
        }
    }
    throw Error("bad variance target");
}

double variance_simple(const PairGroundTruth& gt, uint64_t k, VarianceTarget which) {
    return variance_simple(double(gt.f1()), double(gt.f2()), double(gt.intersection()),
                           k, which);
}

Mle3Variance variance_mle3(double f1, double f2, double a, uint64_t k) {
    if (k == 0) throw Error("k must be >= 1");
    if (a <= 0 || a >= std::min(f1, f2)) return {0.0, true};
    const double u = f1 + f2 - a;
    const double info = (f1 + f2) / a + f2 / (f1 - a) + f1 / (f2 - a);
    return {u * u / info / double(k), false};
}

Mle3Variance variance_mle3(const PairGroundTruth& gt, uint64_t k) {
    return variance_mle3(double(gt.f1()), double(gt.f2()), double(gt.intersection()), k);
}

EstimateResult estimate_mle3(const PairCounts3& counts, int64_t f1, int64_t f2) {
    PairGroundTruth(f1, f2, 0);
    const uint64_t k = counts.total();
    if (k == 0) throw Error("counts are empty");

    const double df1 = double(f1), df2 = double(f2);
    const double hi = std::min(df1, df2);
    const double keq = double(counts.k_eq);
    const double klt = double(counts.k_lt);
    const double kgt = double(counts.k_gt);

    // strictly decreasing in a on (0, hi)
    const auto g = [&](double a) {
        return keq * (df1 + df2) / a - klt * df2 / (df1 - a) - kgt * df1 / (df2 - a);
    };

    double a_hat;
    bool boundary = false;
    if (counts.k_eq == 0) {
        a_hat = 0.0;  // likelihood decreasing
        boundary = true;
    } else if (counts.k_lt == 0 && counts.k_gt == 0) {
        a_hat = hi;  // likelihood increasing
        boundary = true;
    } else {
        const double eps = hi * 1e-12;
        double lo = eps, up = hi - eps;
        double glo = g(lo), gup = g(up);
        if (glo <= 0) {
            a_hat = 0.0;  // g < 0 on the whole interval
            boundary = true;
        } else if (gup >= 0) {
            a_hat = hi;  // g > 0 on the whole interval
            boundary = true;
        } else {
            for (int it = 0; it < 200 && (up - lo) > eps; ++it) {
                const double mid = 0.5 * (lo + up);
                if (g(mid) > 0)
                    lo = mid;
                else
                    up = mid;
            }
            a_hat = 0.5 * (lo + up);
        }
    }

    EstimateResult res = finish(a_hat, df1, df2, k, "mle", boundary);
    const Mle3Variance var = variance_mle3(df1, df2, res.a_hat, k);
    res.var_asymptotic = var.value;
    res.at_boundary = res.at_boundary || var.at_boundary;
    return res;
}

}  // namespace minhash
