#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minhash/estimators.hpp"
#include "minhash/types.hpp"

namespace minhash {

// (r1, r2, s) = (f1/D, f2/D, a/D). Requires r1, r2 > 0, 0 <= s <= min(r1, r2)
// and r1 + r2 - s <= 1 (the union cannot exceed the universe). Tiny floating
// point overshoots from grid arithmetic are clamped.
class RateTriple {
public:
    RateTriple(double r1, double r2, double s);

    double r1() const { return r1_; }
    double r2() const { return r2_; }
    double s() const { return s_; }
    double union_rate() const { return r1_ + r2_ - s_; }

    RateTriple swapped() const { return RateTriple(r2_, r1_, s_); }

private:
    double r1_, r2_, s_;
};

// The five cell groupings of the 2^b x 2^b table:
//   full     all 2^(2b) cells
//   diag_off 2^b diagonal cells + the two off-diagonal sums       (2^b + 2)
//   diag     2^b diagonal cells + one off-diagonal sum            (2^b + 1)
//   three    (P_eq, P_lt, P_gt)                                   (3)
//   eq       (P_eq, 1 - P_eq)                                     (2)
enum class Grouping : uint8_t { full, diag_off, diag, three, eq };

struct GroupingScheme {
    Grouping tag;
    uint32_t b;

    uint64_t cell_count() const;
    std::string name() const;
};

// full is capped at b <= 8 (65536 cells); the other groupings allow b <= 32
GroupingScheme make_scheme(Grouping tag, uint32_t b);

// Cell probabilities P_{b,(t,d)} for one (b, rates), with the geometric
// factors precomputed so each cell is O(1). Full-matrix access needs b <= 8.
class BbitCellMatrix {
public:
    BbitCellMatrix(uint32_t b, const RateTriple& rates);

    uint32_t b() const { return b_; }
    uint32_t side() const { return n_; }

    double cell(uint32_t t, uint32_t d) const {
        if (t == d) return diag_coeff_ * zeta_[t];
        if (t < d)
            return p_lt_ * gap2_[d - t - 1] * zeta_[t] +
                   p_gt_ * gap1_[t + n_ - d - 1] * zeta_[d];
        return p_gt_ * gap1_[t - d - 1] * zeta_[d] +
               p_lt_ * gap2_[d + n_ - t - 1] * zeta_[t];
    }

    // P_{b,=} via the diagonal sum (the union-geometric factor telescopes to 1)
    double diag_total() const { return diag_coeff_; }
    double diag_cell(uint32_t t) const { return diag_coeff_ * zeta_[t]; }

private:
    uint32_t b_;
    uint32_t n_;
    double p_lt_, p_gt_;
    double diag_coeff_;
    std::vector<double> gap1_, gap2_, zeta_;
};

// Single joint cell probability P_{b,(t,d)}; b <= 8 for 0 <= t,d < 2^b
double cell_prob(uint32_t b, const RateTriple& rates, uint32_t t, uint32_t d);

// (P_{b,=}, P_{b,<}, P_{b,>}) from the closed forms; any b <= 32
ThreeCellProbs summary_probs(uint32_t b, const RateTriple& rates);

// P_{b,=} through the diagonal-sum identity R + P_< C2 + P_> C1; testing hook
// for the closed-form route above
double summary_p_eq_diagonal(uint32_t b, const RateTriple& rates);

// Probability vector of a grouping, ordered:
//   full:     row-major (t * 2^b + d)
//   diag_off: diag(0..2^b-1), P_lt, P_gt
//   diag:     diag(0..2^b-1), P_lt + P_gt
//   three:    P_eq, P_lt, P_gt
//   eq:       P_eq, 1 - P_eq
std::vector<double> grouped_probs(const GroupingScheme& scheme, const RateTriple& rates);

// Observed counts collapsed identically to grouped_probs
std::vector<uint64_t> grouped_counts(const ContingencyTable& table,
                                     const GroupingScheme& scheme);

// three/eq groupings straight from a 3-cell comparison (works for b > 8)
std::vector<uint64_t> grouped_counts(const PairCounts3& counts,
                                     const GroupingScheme& scheme);

}  // namespace minhash
