#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minhash/bbit_model.hpp"
#include "minhash/types.hpp"

namespace minhash {

// One-parameter multinomial cell model: m cell probabilities q_i(theta),
// nonnegative and summing to 1 on the closed domain [theta_lo, theta_hi].
// derivs is optional; when absent, derivatives come from Richardson-
// extrapolated central differences. Evaluation must be re-entrant.
struct CellModel {
    std::size_t m = 0;
    double theta_lo = 0;
    double theta_hi = 0;
    std::function<std::vector<double>(double)> probs;
    std::function<std::vector<double>(double)> derivs;  // may be empty
};

struct MleSolution {
    double theta_hat = 0;
    double log_lik = 0;
    double fisher_info = 0;     // I(theta_hat), includes the factor k
    double var_asymptotic = 0;  // 1 / I
    bool at_boundary = false;
};

// sum k_i log q_i(theta); k_i = 0 terms contribute 0 even when q_i = 0, and
// k_i > 0 with q_i = 0 yields -inf as a sentinel.
double log_likelihood(const CellModel& model, std::span<const uint64_t> counts,
                      double theta);

// q_i'(theta) for all cells
std::vector<double> cell_derivatives(const CellModel& model, double theta);

// l'(theta) = sum k_i q_i'/q_i
double score(const CellModel& model, std::span<const uint64_t> counts, double theta);

// I(theta) = k sum_i [q_i'(theta)]^2 / q_i(theta)  (sum q_i'' = 0 since the
// probabilities sum to 1). Cells with q_i < 1e-300 are skipped when their
// derivative is negligible; diverging terms cap the result.
double fisher_info(const CellModel& model, double theta, uint64_t k);

// Maximizes the log-likelihood by golden-section search over the domain, with
// a probe scan guarding against non-unimodal likelihoods (falls back to a
// 4096-point grid) and a bisection polish on the numeric score.
MleSolution solve_mle(const CellModel& model, std::span<const uint64_t> counts);

// ready-made models
CellModel three_cell_model(double f1, double f2);                    // theta = a
CellModel bbit_cell_model(const GroupingScheme& scheme, double r1,   // theta = s
                          double r2);

}  // namespace minhash
