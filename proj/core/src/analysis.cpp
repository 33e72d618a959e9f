#include "minhash/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "minhash/hashing.hpp"
#include "minhash/mle.hpp"

namespace minhash {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }
};

std::vector<double> linspace(double lo, double hi, size_t n) {
    std::vector<double> xs(n);
    for (size_t i = 0; i < n; ++i)
        xs[i] = (n == 1) ? lo : lo + (hi - lo) * double(i) / double(n - 1);
    return xs;
}

void print_float(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

bool is_bbit_tag(const std::string& tag) { return tag.rfind("bbit-", 0) == 0; }

Grouping grouping_from_tag(const std::string& tag) {
    if (tag == "bbit-full") return Grouping::full;
    if (tag == "bbit-do") return Grouping::diag_off;
    if (tag == "bbit-d") return Grouping::diag;
    if (tag == "bbit-3") return Grouping::three;
    if (tag == "bbit-eq") return Grouping::eq;
    throw Error("unknown b-bit estimator tag '" + tag + "'");
}

std::vector<double> default_ratio_axis(size_t n) { return linspace(0.02, 1.0, n); }
std::vector<double> default_containment_axis(size_t n) { return linspace(0.0, 0.99, n); }
std::vector<double> standard_ratio_axis() { return linspace(0.1, 1.0, 10); }
std::vector<double> standard_containment_axis() { return linspace(0.0, 0.99, 10); }

namespace {

// theoretical per-k variance of one estimator tag; nan with flag when the
// variance degenerates
struct VarAtPoint {
    double value = kNan;
    bool boundary = false;
};

VarAtPoint minwise_variance(const std::string& tag, double f1, double f2, double a) {
    if (tag == "standard") return {variance_simple(f1, f2, a, 1, VarianceTarget::eq), false};
    if (tag == "lt") return {variance_simple(f1, f2, a, 1, VarianceTarget::lt), false};
    if (tag == "gt") return {variance_simple(f1, f2, a, 1, VarianceTarget::gt), false};
    if (tag == "mle") {
        const Mle3Variance v = variance_mle3(f1, f2, a, 1);
        return {v.value, v.at_boundary};
    }
    throw Error("unknown minwise estimator tag '" + tag + "'");
}

VarAtPoint bbit_variance(const std::string& tag, uint32_t b, double r1, double r2,
                         double s) {
    const GroupingScheme scheme = make_scheme(grouping_from_tag(tag), b);
    const CellModel model = bbit_cell_model(scheme, r1, r2);
    const double info = fisher_info(model, s, 1);
    if (!(info > 0) || info >= std::numeric_limits<double>::max())
        return {kNan, true};
    return {1.0 / info, false};
}

}  // namespace

std::vector<GridRow> variance_ratio_grid(const VarianceGridSpec& spec) {
    if (spec.comparisons.empty()) throw Error("grid needs at least one comparison");
    if (spec.b > 8) throw Error("grid needs b <= 8 (full grouping cap)");
    if (spec.b >= 1 && !(spec.r1 > 0 && spec.r1 <= 1))
        throw Error("grid needs 0 < r1 <= 1");
    const auto& ratios = spec.ratio_axis.empty() ? default_ratio_axis() : spec.ratio_axis;
    const auto& contain =
        spec.containment_axis.empty() ? default_containment_axis() : spec.containment_axis;

    std::vector<GridRow> rows;
    rows.reserve(ratios.size() * contain.size());
    for (double ratio : ratios) {
        if (!(ratio > 0 && ratio <= 1)) throw Error("r2/r1 values must be in (0, 1]");
        for (double t : contain) {
            if (!(t >= 0 && t < 1)) throw Error("s/r2 values must be in [0, 1)");
            GridRow row;
            row.r2_over_r1 = ratio;
            row.s_over_r2 = t;

            const bool infeasible =
                spec.b >= 1 && spec.r1 * (1 + ratio - ratio * t) > 1 + 1e-12;
            std::map<std::string, VarAtPoint> cache;
            const auto var_of = [&](const std::string& tag) {
                auto it = cache.find(tag);
                if (it != cache.end()) return it->second;
                VarAtPoint v;
                if (spec.b == 0)
                    v = minwise_variance(tag, 1.0, ratio, ratio * t);
                else
                    v = bbit_variance(tag, spec.b, spec.r1, spec.r1 * ratio,
                                      spec.r1 * ratio * t);
                cache.emplace(tag, v);
                return v;
            };

            for (const auto& [num_tag, den_tag] : spec.comparisons) {
                if (infeasible) {
                    row.ratios.push_back(kNan);
                    row.flags.push_back(2);
                    continue;
                }
                const VarAtPoint num = var_of(num_tag);
                const VarAtPoint den = var_of(den_tag);
                if (num.boundary || den.boundary || !(den.value > 0) ||
                    !std::isfinite(num.value)) {
                    row.ratios.push_back(kNan);
                    row.flags.push_back(1);
                } else {
                    row.ratios.push_back(num.value / den.value);
                    row.flags.push_back(0);
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_grid_csv(std::ostream& out, const VarianceGridSpec& spec,
                    std::span<const GridRow> rows) {
    out << "r2_over_r1,s_over_r2";
    for (const auto& [num, den] : spec.comparisons)
        out << ',' << num << "_over_" << den << ',' << num << "_over_" << den << "_flag";
    out << '\n';
    for (const GridRow& row : rows) {
        print_float(out, row.r2_over_r1);
        out << ',';
        print_float(out, row.s_over_r2);
        for (size_t i = 0; i < row.ratios.size(); ++i) {
            out << ',';
            print_float(out, row.ratios[i]);
            out << ',' << row.flags[i];
        }
        out << '\n';
    }
}

std::pair<SetRecord, SetRecord> make_synthetic_pair(const PairGroundTruth& gt,
                                                    const UniverseConfig& universe) {
    const uint64_t f1 = uint64_t(gt.f1());
    const uint64_t f2 = uint64_t(gt.f2());
    const uint64_t a = uint64_t(gt.intersection());
    const uint64_t u = f1 + f2 - a;
    if (!universe.is_full() && u > universe.size())
        throw Error("universe too small for the requested pair");

    std::vector<uint64_t> e1(f1), e2(f2);
    for (uint64_t i = 0; i < f1; ++i) e1[i] = i;  // shared block then private
    for (uint64_t i = 0; i < a; ++i) e2[i] = i;
    for (uint64_t i = a; i < f2; ++i) e2[i] = f1 + (i - a);
    return {SetRecord("s1", std::move(e1), universe),
            SetRecord("s2", std::move(e2), universe)};
}

namespace {

struct EstimatorPlan {
    std::string tag;
    bool bbit = false;
    SimpleEstimator simple = SimpleEstimator::eq;
    bool is_mle3 = false;
    GroupingScheme scheme{Grouping::three, 1};
};

EstimatorPlan plan_estimator(const std::string& tag, uint32_t b) {
    EstimatorPlan p;
    p.tag = tag;
    if (is_bbit_tag(tag)) {
        p.bbit = true;
        p.scheme = make_scheme(grouping_from_tag(tag), b);
        return p;
    }
    if (tag == "standard") p.simple = SimpleEstimator::eq;
    else if (tag == "lt") p.simple = SimpleEstimator::lt;
    else if (tag == "gt") p.simple = SimpleEstimator::gt;
    else if (tag == "mle") p.is_mle3 = true;
    else throw Error("unknown estimator tag '" + tag + "'");
    return p;
}

// Raw (unclamped) simple estimates: the leading-order variances under test
// describe the estimator before clamping, and min(f1,f2) can sit within a
// sigma of the true a, where clamping would visibly cut the error tail. Degenerate count
// patterns (all mass in the lt or gt cell) fall back to the boundary instead
// of throwing.
double simple_estimate_raw(const PairCounts3& c, int64_t f1, int64_t f2,
                           SimpleEstimator which) {
    const uint64_t k = c.total();
    if ((which == SimpleEstimator::lt && c.k_lt == k) ||
        (which == SimpleEstimator::gt && c.k_gt == k))
        return 0.0;
    return estimate_simple(c, f1, f2, which).a_hat_raw;
}

PairCounts3 sample_counts3(const ThreeCellProbs& p, uint64_t k, SplitMix64& rng) {
    PairCounts3 c;
    for (uint64_t i = 0; i < k; ++i) {
        const double u = rng.next_double();
        if (u < p.p_eq)
            ++c.k_eq;
        else if (u < p.p_eq + p.p_lt)
            ++c.k_lt;
        else
            ++c.k_gt;
    }
    return c;
}

ContingencyTable sample_table(const std::vector<double>& cdf, uint32_t b, uint64_t k,
                              SplitMix64& rng) {
    ContingencyTable table(b);
    const uint32_t n = table.side();
    for (uint64_t i = 0; i < k; ++i) {
        const double u = rng.next_double();
        const size_t cell =
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const size_t idx = std::min(cell, cdf.size() - 1);
        ++table.at(uint32_t(idx / n), uint32_t(idx % n));
    }
    return table;
}

}  // namespace

std::vector<SimulationRow> run_simulation(const SimulationSpec& spec) {
    if (spec.replications < 1) throw Error("simulation needs replications >= 1");
    if (spec.k_values.empty()) throw Error("simulation needs at least one k");
    if (spec.estimators.empty()) throw Error("simulation needs at least one estimator");

    const PairGroundTruth& gt = spec.ground_truth;
    const double d = spec.universe.size_as_double();
    if (!spec.universe.is_full() &&
        uint64_t(gt.union_size()) > spec.universe.size())
        throw Error("universe too small for the requested pair");

    std::vector<EstimatorPlan> plans;
    bool any_minwise = false, any_bbit = false, need_table = false;
    for (const auto& tag : spec.estimators) {
        plans.push_back(plan_estimator(tag, spec.b));
        if (plans.back().bbit) {
            any_bbit = true;
            if (plans.back().scheme.tag != Grouping::three &&
                plans.back().scheme.tag != Grouping::eq)
                need_table = true;
        } else {
            any_minwise = true;
        }
    }
    if (any_bbit && spec.b > 8) throw Error("simulation b-bit estimators need b <= 8");

    const double f1 = double(gt.f1()), f2 = double(gt.f2()), a = double(gt.intersection());
    const ThreeCellProbs p3 = three_cell_probs(f1, f2, a);
    const double r1 = f1 / d, r2 = f2 / d, s_true = a / d;

    // per-estimator state: model, theoretical variance, accumulators
    struct PerEstimator {
        EstimatorPlan plan;
        CellModel model;  // bbit only
        double var_theory = 0;
    };
    std::vector<PerEstimator> est;
    for (const auto& p : plans) {
        PerEstimator pe;
        pe.plan = p;
        if (p.bbit) pe.model = bbit_cell_model(p.scheme, r1, r2);
        est.push_back(std::move(pe));
    }

    // full-table CDF for counts sampling of b-bit estimators
    std::vector<double> table_cdf;
    if (any_bbit && spec.sampling == SimSampling::counts) {
        const auto probs =
            grouped_probs(make_scheme(Grouping::full, spec.b), RateTriple(r1, r2, s_true));
        table_cdf.resize(probs.size());
        std::partial_sum(probs.begin(), probs.end(), table_cdf.begin());
    }

    std::pair<SetRecord, SetRecord> sets = make_synthetic_pair(gt, spec.universe);

    std::vector<SimulationRow> rows;
    for (uint64_t k : spec.k_values) {
        if (k < 1) throw Error("k values must be >= 1");
        for (auto& pe : est) {
            if (pe.plan.bbit)
                pe.var_theory = (d * d) / fisher_info(pe.model, s_true, k);
            else if (pe.plan.is_mle3)
                pe.var_theory = variance_mle3(f1, f2, a, k).value;
            else
                pe.var_theory = variance_simple(
                    f1, f2, a, k,
                    pe.plan.simple == SimpleEstimator::eq   ? VarianceTarget::eq
                    : pe.plan.simple == SimpleEstimator::lt ? VarianceTarget::lt
                                                            : VarianceTarget::gt);
        }

        std::vector<double> sum(est.size(), 0.0), sum_sq(est.size(), 0.0);
        for (uint32_t rep = 0; rep < spec.replications; ++rep) {
            const uint64_t rep_seed = mix64(mix64(spec.seed) ^ (rep + 1));

            PairCounts3 c3{};
            ContingencyTable table(any_bbit ? spec.b : 1);
            PairCounts3 bbit_c3{};
            if (spec.sampling == SimSampling::counts) {
                SplitMix64 rng(rep_seed);
                if (any_minwise) c3 = sample_counts3(p3, k, rng);
                if (any_bbit) {
                    table = sample_table(table_cdf, spec.b, k, rng);
                    bbit_c3 = table.collapse();
                }
            } else {
                const HashFamily family(rep_seed, uint32_t(k), spec.universe);
                const MinwiseSketch s1 = sketch_minwise(sets.first, family);
                const MinwiseSketch s2 = sketch_minwise(sets.second, family);
                if (any_minwise) c3 = compare_minwise(s1, s2);
                if (any_bbit) {
                    const BBitSketch b1 = truncate_to_bbit(s1, spec.b);
                    const BBitSketch b2 = truncate_to_bbit(s2, spec.b);
                    if (need_table) {
                        table = compare_bbit(b1, b2);
                        bbit_c3 = table.collapse();
                    } else {
                        bbit_c3 = compare_bbit_summary(b1, b2);
                    }
                }
            }

            for (size_t e = 0; e < est.size(); ++e) {
                const EstimatorPlan& p = est[e].plan;
                double a_hat;
                if (p.bbit) {
                    const std::vector<uint64_t> counts =
                        (p.scheme.tag == Grouping::three || p.scheme.tag == Grouping::eq)
                            ? grouped_counts(bbit_c3, p.scheme)
                            : grouped_counts(table, p.scheme);
                    a_hat = solve_mle(est[e].model, counts).theta_hat * d;
                } else if (p.is_mle3) {
                    a_hat = estimate_mle3(c3, gt.f1(), gt.f2()).a_hat;
                } else {
                    a_hat = simple_estimate_raw(c3, gt.f1(), gt.f2(), p.simple);
                }
                sum[e] += a_hat;
                const double err = a_hat - a;
                sum_sq[e] += err * err;
            }
        }

        for (size_t e = 0; e < est.size(); ++e) {
            SimulationRow row;
            row.estimator = est[e].plan.tag;
            row.k = k;
            row.mean_a_hat = sum[e] / spec.replications;
            row.bias = row.mean_a_hat - a;
            row.mse = sum_sq[e] / spec.replications;
            row.var_theoretical = est[e].var_theory;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_simulation_csv(std::ostream& out, std::span<const SimulationRow> rows) {
    out << "estimator,k,mean_a_hat,bias,mse,var_theoretical\n";
    for (const SimulationRow& row : rows) {
        out << row.estimator << ',' << row.k << ',';
        print_float(out, row.mean_a_hat);
        out << ',';
        print_float(out, row.bias);
        out << ',';
        print_float(out, row.mse);
        out << ',';
        print_float(out, row.var_theoretical);
        out << '\n';
    }
}

}  // namespace minhash
