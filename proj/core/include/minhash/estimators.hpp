#pragma once

#include <cstdint>
#include <string>

#include "minhash/types.hpp"

namespace minhash {

struct ThreeCellProbs {
    double p_eq = 0;
    double p_lt = 0;
    double p_gt = 0;
};

// P_= = a/(f1+f2-a), P_< = (f1-a)/(f1+f2-a), P_> = (f2-a)/(f1+f2-a)
ThreeCellProbs three_cell_probs(double f1, double f2, double a);
ThreeCellProbs three_cell_probs(const PairGroundTruth& gt);

enum class SimpleEstimator { eq, lt, gt };

// which variance to evaluate; classic_r is Var(R_hat) = R(1-R)/k, the
// resemblance estimator, not an estimator of a
enum class VarianceTarget { eq, lt, gt, classic_r };

struct EstimateResult {
    double a_hat = 0;          // clamped to [0, min(f1, f2)]
    double a_hat_raw = 0;      // before clamping (diagnostic)
    double r_hat = 0;
    double t_hat = 0;
    double var_asymptotic = 0;  // leading O(1/k) term, plug-in at a_hat
    bool at_boundary = false;
    std::string estimator_tag;
};

// a_eq = (f1+f2) k_eq/(k+k_eq); a_lt = f1 - f2 k_lt/(k-k_lt);
// a_gt = f2 - f1 k_gt/(k-k_gt). Throws on division-degenerate counts
// (k_lt = k for lt, k_gt = k for gt).
EstimateResult estimate_simple(const PairCounts3& counts, int64_t f1, int64_t f2,
                               SimpleEstimator which);

// Leading O(1/k) variance of the chosen estimator, evaluated at (f1, f2, a).
// Real-valued arguments so rate-scale grids can reuse the closed forms.
double variance_simple(double f1, double f2, double a, uint64_t k,
                       VarianceTarget which);
double variance_simple(const PairGroundTruth& gt, uint64_t k, VarianceTarget which);

struct Mle3Variance {
    double value = 0;
    bool at_boundary = false;  // a in {0, min(f1,f2)}: Fisher information diverges
};

// (1/k) (f1+f2-a)^2 / [ (f1+f2)/a + f2/(f1-a) + f1/(f2-a) ]
Mle3Variance variance_mle3(double f1, double f2, double a, uint64_t k);
Mle3Variance variance_mle3(const PairGroundTruth& gt, uint64_t k);

// 3-cell maximum-likelihood estimate: the root of
//   g(a) = k_eq (f1+f2)/a - k_lt f2/(f1-a) - k_gt f1/(f2-a)
// on (0, min(f1,f2)), found by bisection (g is strictly decreasing). Boundary
// count patterns resolve to the boundary where the likelihood is larger.
EstimateResult estimate_mle3(const PairCounts3& counts, int64_t f1, int64_t f2);

}  // namespace minhash
