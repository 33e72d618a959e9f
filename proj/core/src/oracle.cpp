#include "minhash/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "minhash/detail/numeric.hpp"

namespace minhash::oracle {

using detail::pow1m;

Rational exact_equal_min_prob(uint64_t d, uint64_t f1, uint64_t f2, uint64_t a,
                              uint64_t i) {
    if (f1 == 0 || f2 == 0) throw Error("cardinalities must be >= 1");
    if (a > std::min(f1, f2)) throw Error("intersection exceeds the smaller set");
    if (f1 + f2 - a > d) throw Error("union exceeds the universe");
    if (a == 0) return 0;
    const uint64_t slack = d - (f1 + f2 - a);  // largest feasible i
    if (i > slack) return 0;

    BigInt num = a;
    BigInt den = d;
    for (uint64_t t = 0; t < i; ++t) {
        num *= BigInt(d - f1 - f2 + a - t);
        den *= BigInt(d - 1 - t);
    }
    return Rational(num, den);
}

namespace {

constexpr uint32_t kMaxEnumeration = 10;  // 10! permutations as a hard stop

int64_t factorial(uint32_t d) {
    int64_t f = 1;
    for (uint32_t i = 2; i <= d; ++i) f *= i;
    return f;
}

// min of p over each subset mask, built by peeling the lowest element
void subset_mins(const std::vector<uint32_t>& p, std::vector<uint32_t>& minv) {
    const uint32_t nmask = uint32_t(1) << p.size();
    minv[0] = std::numeric_limits<uint32_t>::max();
    for (uint32_t mask = 1; mask < nmask; ++mask) {
        const uint32_t e = std::countr_zero(mask);
        minv[mask] = std::min(p[e], minv[mask & (mask - 1)]);
    }
}

uint32_t mask_of(uint32_t d, std::span<const uint64_t> s) {
    uint32_t mask = 0;
    for (uint64_t e : s) {
        if (e >= d) throw Error("set element outside the universe");
        mask |= uint32_t(1) << e;
    }
    if (mask == 0) throw Error("set is empty");
    return mask;
}

}  // namespace

EnumeratedJoint enumerate_joint(uint32_t d, std::span<const uint64_t> s1,
                                std::span<const uint64_t> s2) {
    if (d < 1 || d > kMaxEnumeration) throw Error("enumeration supports 1 <= D <= 10");
    const uint32_t m1 = mask_of(d, s1);
    const uint32_t m2 = mask_of(d, s2);

    EnumeratedJoint out;
    out.d = d;
    out.joint.assign(size_t(d) * d, 0);

    std::vector<uint32_t> p(d);
    std::iota(p.begin(), p.end(), 0);
    std::vector<uint32_t> minv(size_t(1) << d);
    do {
        subset_mins(p, minv);
        const uint32_t z1 = minv[m1], z2 = minv[m2];
        ++out.joint[size_t(z1) * d + z2];
        if (z1 == z2)
            ++out.count_eq;
        else if (z1 < z2)
            ++out.count_lt;
        else
            ++out.count_gt;
    } while (std::next_permutation(p.begin(), p.end()));

    out.permutations = factorial(d);
    return out;
}

std::vector<ThreeCellCounts> enumerate_all_pairs_three_cell(uint32_t d) {
    if (d < 1 || d > kMaxEnumeration) throw Error("enumeration supports 1 <= D <= 10");
    const uint32_t nsets = (uint32_t(1) << d) - 1;
    std::vector<ThreeCellCounts> out(size_t(nsets) * nsets);

    std::vector<uint32_t> p(d);
    std::iota(p.begin(), p.end(), 0);
    std::vector<uint32_t> minv(size_t(1) << d);
    do {
        subset_mins(p, minv);
        for (uint32_t m1 = 1; m1 <= nsets; ++m1) {
            const uint32_t z1 = minv[m1];
            ThreeCellCounts* row = out.data() + size_t(m1 - 1) * nsets;
            for (uint32_t m2 = 1; m2 <= nsets; ++m2) {
                const uint32_t z2 = minv[m2];
                ThreeCellCounts& c = row[m2 - 1];
                if (z1 == z2)
                    ++c.eq;
                else if (z1 < z2)
                    ++c.lt;
                else
                    ++c.gt;
            }
        }
    } while (std::next_permutation(p.begin(), p.end()));

    return out;
}

double limit_joint_prob(const RateTriple& rates, uint64_t i, uint64_t j) {
    const double r1 = rates.r1(), r2 = rates.r2(), s = rates.s();
    const double c = rates.union_rate();
    if (i == j) return s * pow1m(c, double(i));
    if (i < j)
        return r2 * (r1 - s) * pow1m(r2, double(j - i - 1)) * pow1m(c, double(i));
    return r1 * (r2 - s) * pow1m(r1, double(i - j - 1)) * pow1m(c, double(j));
}

namespace {

// wraps needed so the neglected tail (1-r)^(t + wraps*n) stays below target
uint64_t wraps_for_tail(double r, uint32_t t, double n, double log_target) {
    const double lr = std::log1p(-r);
    if (!(lr < 0)) throw Error("rate too small for the summation oracle");
    const double need = (log_target / lr - double(t)) / n;
    const uint64_t wraps = need <= 1 ? 1 : uint64_t(std::ceil(need));
    if (wraps > (uint64_t(1) << 26)) throw Error("rate too small for the summation oracle");
    return wraps;
}

}  // namespace

double bbit_cell_prob_by_summation(uint32_t b, const RateTriple& rates, uint32_t t,
                                   uint32_t d) {
    if (b < 1 || b > 8) throw Error("summation oracle supports 1 <= b <= 8");
    const uint32_t n = uint32_t(1) << b;
    if (t >= n || d >= n) throw Error("cell index out of range");

    // per-axis tails below 1e-16 keep the whole truncation under 1e-14
    constexpr double kLogTarget = -36.85;  // log(1e-16)
    const uint64_t w1 = wraps_for_tail(rates.r1(), t, double(n), kLogTarget);
    const uint64_t w2 = wraps_for_tail(rates.r2(), d, double(n), kLogTarget);

    detail::KahanSum sum;
    for (uint64_t i = 0; i < w1; ++i) {
        const uint64_t z1 = t + i * n;
        for (uint64_t j = 0; j < w2; ++j) {
            const uint64_t z2 = d + j * n;
            sum.add(limit_joint_prob(rates, z1, z2));
        }
    }
    return sum.value();
}

}  // namespace minhash::oracle
