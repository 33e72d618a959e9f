#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "minhash/bbit_model.hpp"
#include "minhash/types.hpp"

// Independent ground-truth machinery used to test the model modules: exact
// finite-D joint-minimum probabilities, exhaustive permutation enumeration
// for tiny universes, and the large-D geometric limit formulas.
namespace minhash::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact Pr(z1 = z2 = i) under a uniformly random permutation of {0..D-1}:
//   (a/D) * prod_{t=0}^{i-1} (D - f1 - f2 + a - t) / (D - 1 - t)
// in exact rational arithmetic; 0 when i is out of range.
Rational exact_equal_min_prob(uint64_t d, uint64_t f1, uint64_t f2, uint64_t a,
                              uint64_t i);

// Exhaustive enumeration over all D! permutations for one set pair.
struct EnumeratedJoint {
    uint32_t d = 0;
    int64_t permutations = 0;       // D!
    std::vector<int64_t> joint;     // (i, j) -> joint[i*d + j]
    int64_t count_eq = 0, count_lt = 0, count_gt = 0;

    int64_t joint_at(uint32_t i, uint32_t j) const { return joint[size_t(i) * d + j]; }
};
EnumeratedJoint enumerate_joint(uint32_t d, std::span<const uint64_t> s1,
                                std::span<const uint64_t> s2);

// 3-cell counts over all D! permutations for every pair of non-empty subsets
// of {0..d-1}; entry index (mask1 - 1) * (2^d - 1) + (mask2 - 1).
struct ThreeCellCounts {
    int64_t eq = 0, lt = 0, gt = 0;
};
std::vector<ThreeCellCounts> enumerate_all_pairs_three_cell(uint32_t d);

// Large-D limit of Pr(z1 = i, z2 = j):
//   i < j: r2 (r1-s) (1-r2)^(j-i-1) (1-c)^i
//   i > j: r1 (r2-s) (1-r1)^(i-j-1) (1-c)^j
//   i = j: s (1-c)^i                          with c = r1 + r2 - s
double limit_joint_prob(const RateTriple& rates, uint64_t i, uint64_t j);

// P_{b,(t,d)} by direct summation of limit_joint_prob over the residue
// classes z1 = t + i*2^b, z2 = d + j*2^b, truncated with an explicit
// geometric remainder bound below 1e-14. Independent of the closed-form
// cell model.
double bbit_cell_prob_by_summation(uint32_t b, const RateTriple& rates, uint32_t t,
                                   uint32_t d);

}  // namespace minhash::oracle
