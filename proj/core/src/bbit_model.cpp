#include "minhash/bbit_model.hpp"

#include <cmath>

#include "minhash/detail/numeric.hpp"

namespace minhash {

using detail::exp_diff;
using detail::one_minus_pow1m;
using detail::pow1m;

RateTriple::RateTriple(double r1, double r2, double s) : r1_(r1), r2_(r2), s_(s) {
    if (!(r1 > 0) || r1 > 1 || !(r2 > 0) || r2 > 1) throw Error("rates must be in (0, 1]");
    const double lo = std::min(r1, r2);
    if (!(s >= -1e-15) || s > lo * (1 + 1e-9)) throw Error("s must be in [0, min(r1, r2)]");
    s_ = std::min(std::max(s, 0.0), lo);
    if (r1_ + r2_ - s_ > 1 + 1e-12) throw Error("union rate r1 + r2 - s exceeds 1");
}

uint64_t GroupingScheme::cell_count() const {
    const uint64_t n = uint64_t(1) << b;
    switch (tag) {
        case Grouping::full: return n * n;
        case Grouping::diag_off: return n + 2;
        case Grouping::diag: return n + 1;
        case Grouping::three: return 3;
        case Grouping::eq: return 2;
    }
    throw Error("bad grouping");
}

std::string GroupingScheme::name() const {
    switch (tag) {
        case Grouping::full: return "full";
        case Grouping::diag_off: return "do";
        case Grouping::diag: return "d";
        case Grouping::three: return "3";
        case Grouping::eq: return "=";
    }
    throw Error("bad grouping");
}

GroupingScheme make_scheme(Grouping tag, uint32_t b) {
    if (b < 1) throw Error("grouping needs b >= 1");
    if (tag == Grouping::full && b > 8) throw Error("full grouping is capped at b <= 8");
    if (b > 32) throw Error("grouping needs b <= 32");
    return GroupingScheme{tag, b};
}

namespace {

// wrapped geometric weight r (1-r)^e / (1 - (1-r)^n)
double gap_weight(double r, double e, double n) {
    return r * pow1m(r, e) / one_minus_pow1m(r, n);
}

// Closed form for P_{b,<} = sum_{t<d} P_{b,(t,d)}. Both geometric double sums
// telescope; the products are arranged so the removable factors (r1-s) and
// (r2-s) multiply before any division, and nearly-equal powers subtract in
// log space via exp_diff.
double closed_p_lt(uint32_t b, double r1, double r2, double s) {
    const double n = std::ldexp(1.0, int(b));  // 2^b exactly
    const double c = r1 + r2 - s;

    // Tiny rates (n*c << 1): the minimums sit far apart on the 2^b scale, so
    // conditioned on z1 != z2 the truncated values wrap to independent uniform
    // residues and the order carries equal mass each way. The full expression
    // cancels catastrophically here (relative error ~ eps/(n*c)); the limit is
    // exact to O(n*c).
    if (n * c <= 1e-8) {
        const double p_ne = (r1 - s) / c + (r2 - s) / c;
        return p_ne * (n - 1) / (2 * n);
    }

    const double l1 = std::log1p(-r1);
    const double l2 = std::log1p(-r2);
    const double lc = std::log1p(-c);

    const double om_c_n = one_minus_pow1m(c, n);
    const double om_c_nm1 = one_minus_pow1m(c, n - 1);

    // (r1-s) [1 - (1-c)^(n-1)]/c  -  [(1-r2)^n - (1-c)^(n-1) (1-r2)]
    const double num1 =
        (r1 - s) * om_c_nm1 / c - exp_diff(n * l2, (n - 1) * lc + l2);
    const double term1 = num1 / (one_minus_pow1m(r2, n) * om_c_n);

    // [(1-c)(1-r1)^(n-1) - (1-c)^n]  -  (r2-s)(1-r1)^(n-1) [(1-c) - (1-c)^n]/c
    const double num2 = exp_diff(lc + (n - 1) * l1, n * lc) -
                        (r2 - s) * pow1m(r1, n - 1) * pow1m(c, 1) * om_c_nm1 / c;
    const double term2 = num2 / (one_minus_pow1m(r1, n) * om_c_n);

    return term1 + term2;
}

void check_cell_range(uint32_t b, uint32_t t, uint32_t d) {
    const uint32_t n = uint32_t(1) << b;
    if (t >= n || d >= n) throw Error("cell index out of range");
}

}  // namespace

BbitCellMatrix::BbitCellMatrix(uint32_t b, const RateTriple& rates) : b_(b) {
    if (b < 1 || b > 8) throw Error("cell matrix needs 1 <= b <= 8");
    n_ = uint32_t(1) << b;
    const double n = double(n_);
    const double c = rates.union_rate();
    const ThreeCellProbs probs = three_cell_probs(rates.r1(), rates.r2(), rates.s());
    p_lt_ = probs.p_lt;
    p_gt_ = probs.p_gt;

    gap1_.resize(n_);
    gap2_.resize(n_);
    zeta_.resize(n_);
    for (uint32_t e = 0; e < n_; ++e) {
        gap1_[e] = gap_weight(rates.r1(), double(e), n);
        gap2_[e] = gap_weight(rates.r2(), double(e), n);
        zeta_[e] = gap_weight(c, double(e), n);
    }
    diag_coeff_ = probs.p_eq + p_lt_ * gap2_[n_ - 1] + p_gt_ * gap1_[n_ - 1];
}

double cell_prob(uint32_t b, const RateTriple& rates, uint32_t t, uint32_t d) {
    if (b < 1 || b > 8) throw Error("cell_prob needs 1 <= b <= 8");
    check_cell_range(b, t, d);
    const double n = std::ldexp(1.0, int(b));
    const double c = rates.union_rate();
    const ThreeCellProbs probs = three_cell_probs(rates.r1(), rates.r2(), rates.s());

    const auto zeta = [&](uint32_t i) { return gap_weight(c, double(i), n); };
    if (t == d) {
        const double coeff = probs.p_eq +
                             probs.p_lt * gap_weight(rates.r2(), n - 1, n) +
                             probs.p_gt * gap_weight(rates.r1(), n - 1, n);
        return coeff * zeta(t);
    }
    if (t < d)
        return probs.p_lt * gap_weight(rates.r2(), double(d - t - 1), n) * zeta(t) +
               probs.p_gt * gap_weight(rates.r1(), double(t) + n - d - 1, n) * zeta(d);
    return probs.p_gt * gap_weight(rates.r1(), double(t - d - 1), n) * zeta(d) +
           probs.p_lt * gap_weight(rates.r2(), double(d) + n - t - 1, n) * zeta(t);
}

ThreeCellProbs summary_probs(uint32_t b, const RateTriple& rates) {
    if (b < 1 || b > 32) throw Error("summary_probs needs 1 <= b <= 32");
    ThreeCellProbs out;
    out.p_lt = closed_p_lt(b, rates.r1(), rates.r2(), rates.s());
    out.p_gt = closed_p_lt(b, rates.r2(), rates.r1(), rates.s());
    // the diagonal identity, not 1 - lt - gt: P_eq can sit 20 orders of
    // magnitude below the off-diagonal mass (large b*r2 at small s) where the
    // complement form is pure cancellation noise
    out.p_eq = summary_p_eq_diagonal(b, rates);
    return out;
}

double summary_p_eq_diagonal(uint32_t b, const RateTriple& rates) {
    if (b < 1 || b > 32) throw Error("summary_p_eq_diagonal needs 1 <= b <= 32");
    const double n = std::ldexp(1.0, int(b));
    const ThreeCellProbs probs = three_cell_probs(rates.r1(), rates.r2(), rates.s());
    return probs.p_eq + probs.p_lt * gap_weight(rates.r2(), n - 1, n) +
           probs.p_gt * gap_weight(rates.r1(), n - 1, n);
}

std::vector<double> grouped_probs(const GroupingScheme& scheme, const RateTriple& rates) {
    make_scheme(scheme.tag, scheme.b);  // re-validate

    // For b <= 8 every grouping is a partial sum of the same cell matrix, so
    // coarse vectors are exact refinements of fine ones; the Fisher-ordering
    // guarantees then survive numeric differentiation. Beyond b = 8 the
    // matrix is out of reach and the closed forms take over.
    if (scheme.b <= 8) {
        const BbitCellMatrix m(scheme.b, rates);
        const uint32_t n = m.side();
        if (scheme.tag == Grouping::full) {
            std::vector<double> out(size_t(n) * n);
            for (uint32_t t = 0; t < n; ++t)
                for (uint32_t d = 0; d < n; ++d) out[size_t(t) * n + d] = m.cell(t, d);
            return out;
        }
        double lt = 0, gt = 0, eq = 0;
        for (uint32_t t = 0; t < n; ++t)
            for (uint32_t d = 0; d < n; ++d) {
                const double p = m.cell(t, d);
                if (t == d)
                    eq += p;
                else if (t < d)
                    lt += p;
                else
                    gt += p;
            }
        switch (scheme.tag) {
            case Grouping::diag_off:
            case Grouping::diag: {
                std::vector<double> out;
                out.reserve(size_t(n) + 2);
                for (uint32_t t = 0; t < n; ++t) out.push_back(m.diag_cell(t));
                if (scheme.tag == Grouping::diag_off) {
                    out.push_back(lt);
                    out.push_back(gt);
                } else {
                    out.push_back(lt + gt);
                }
                return out;
            }
            case Grouping::three:
                return {eq, lt, gt};
            case Grouping::eq:
                return {eq, lt + gt};
            default:
                throw Error("bad grouping");
        }
    }

    const ThreeCellProbs sp = summary_probs(scheme.b, rates);
    switch (scheme.tag) {
        case Grouping::diag_off:
        case Grouping::diag: {
            const uint64_t n = uint64_t(1) << scheme.b;
            const double nd = double(n);
            const double c = rates.union_rate();
            const double coeff = summary_p_eq_diagonal(scheme.b, rates);
            std::vector<double> out;
            out.reserve(n + 2);
            for (uint64_t t = 0; t < n; ++t)
                out.push_back(coeff * gap_weight(c, double(t), nd));
            if (scheme.tag == Grouping::diag_off) {
                out.push_back(sp.p_lt);
                out.push_back(sp.p_gt);
            } else {
                out.push_back(sp.p_lt + sp.p_gt);
            }
            return out;
        }
        case Grouping::three:
            return {sp.p_eq, sp.p_lt, sp.p_gt};
        case Grouping::eq:
            return {sp.p_eq, sp.p_lt + sp.p_gt};
        default:
            throw Error("bad grouping");
    }
}

std::vector<uint64_t> grouped_counts(const ContingencyTable& table,
                                     const GroupingScheme& scheme) {
    if (scheme.b != table.b()) throw Error("grouping bit width does not match table");
    const uint32_t n = table.side();
    const PairCounts3 c3 = table.collapse();
    switch (scheme.tag) {
        case Grouping::full:
            return table.cells();
        case Grouping::diag_off:
        case Grouping::diag: {
            std::vector<uint64_t> out;
            out.reserve(size_t(n) + 2);
            for (uint32_t t = 0; t < n; ++t) out.push_back(table.at(t, t));
            if (scheme.tag == Grouping::diag_off) {
                out.push_back(c3.k_lt);
                out.push_back(c3.k_gt);
            } else {
                out.push_back(c3.k_lt + c3.k_gt);
            }
            return out;
        }
        case Grouping::three:
        case Grouping::eq:
            return grouped_counts(c3, scheme);
    }
    throw Error("bad grouping");
}

std::vector<uint64_t> grouped_counts(const PairCounts3& counts,
                                     const GroupingScheme& scheme) {
    if (scheme.tag == Grouping::three) return {counts.k_eq, counts.k_lt, counts.k_gt};
    if (scheme.tag == Grouping::eq) return {counts.k_eq, counts.k_lt + counts.k_gt};
    throw Error("grouping needs the full contingency table");
}

}  // namespace minhash
