#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "minhash/analysis.hpp"
#include "minhash/estimators.hpp"

using namespace minhash;

namespace {

VarianceGridSpec minwise_spec() {
    VarianceGridSpec spec;
    spec.b = 0;
    spec.ratio_axis = {0.05, 0.2, 0.5, 0.8, 1.0};
    spec.containment_axis = {0.0, 0.25, 0.5, 0.75, 0.95};
    spec.comparisons = {{"standard", "mle"}, {"lt", "mle"}, {"gt", "mle"}, {"gt", "lt"}};
    return spec;
}

}  // namespace

TEST_CASE("minwise grid hits the worked 11.53 ratio") {
    const auto rows = variance_ratio_grid(minwise_spec());
    bool found = false;
    for (const auto& row : rows)
        if (row.r2_over_r1 == 0.2 && row.s_over_r2 == 0.95) {
            found = true;
            CHECK(row.flags[0] == 0);
            CHECK(std::abs(row.ratios[0] - 11.53) < 0.01);
        }
    CHECK(found);
}

TEST_CASE("simple estimators never beat the MLE on the grid") {
    for (const auto& row : variance_ratio_grid(minwise_spec()))
        for (size_t c = 0; c < 3; ++c)
            if (row.flags[c] == 0) CHECK(row.ratios[c] >= 1.0 - 1e-12);
}

TEST_CASE("a_gt beats a_lt whenever f1 > f2") {
    for (const auto& row : variance_ratio_grid(minwise_spec()))
        if (row.r2_over_r1 < 1.0 && row.flags[3] == 0) CHECK(row.ratios[3] < 1.0);
}

TEST_CASE("boundary rows are flagged, not divided") {
    // s = 0 makes both the standard and the MLE variance vanish
    for (const auto& row : variance_ratio_grid(minwise_spec()))
        if (row.s_over_r2 == 0.0) {
            CHECK(row.flags[0] == 1);
            CHECK(std::isnan(row.ratios[0]));
        }
}

TEST_CASE("infeasible rate corners are flagged as such") {
    VarianceGridSpec spec;
    spec.b = 2;
    spec.r1 = 0.8;
    spec.ratio_axis = {1.0};
    spec.containment_axis = {0.0, 0.9};
    spec.comparisons = {{"bbit-eq", "bbit-full"}};
    const auto rows = variance_ratio_grid(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].flags[0] == 2);  // r1 + r2 - s = 1.6
    CHECK(std::isnan(rows[0].ratios[0]));
    CHECK(rows[1].flags[0] == 0);  // s = 0.72 brings the union back under 1
}

TEST_CASE("b-bit grid: refinement ordering of the ratio columns") {
    VarianceGridSpec spec;
    spec.b = 2;
    spec.r1 = 0.5;
    spec.ratio_axis = {0.2, 0.6, 1.0};
    spec.containment_axis = {0.1, 0.5, 0.9};
    spec.comparisons = {{"bbit-do", "bbit-full"},
                        {"bbit-d", "bbit-full"},
                        {"bbit-3", "bbit-full"},
                        {"bbit-eq", "bbit-full"}};
    for (const auto& row : variance_ratio_grid(spec)) {
        if (row.flags[0] != 0) continue;
        CHECK(row.ratios[0] >= 1.0 - 1e-9);                      // full is optimal
        CHECK(row.ratios[0] <= row.ratios[3] * (1 + 1e-9));      // do <= eq
        CHECK(row.ratios[0] <= row.ratios[1] * (1 + 1e-9));      // do <= d
        CHECK(row.ratios[0] <= row.ratios[2] * (1 + 1e-9));      // do <= three
        CHECK(row.ratios[2] <= row.ratios[3] * (1 + 1e-9));      // three <= eq
    }
}

TEST_CASE("b = 8 high-containment point shows at least 5x improvement") {
    VarianceGridSpec spec;
    spec.b = 8;
    spec.r1 = 0.8;
    spec.ratio_axis = {0.2};
    spec.containment_axis = {0.9};
    spec.comparisons = {{"bbit-eq", "bbit-full"}};
    const auto rows = variance_ratio_grid(spec);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].flags[0] == 0);
    CHECK(rows[0].ratios[0] >= 5.0);
}

TEST_CASE("grid output is deterministic and CSV-formatted") {
    const VarianceGridSpec spec = minwise_spec();
    const auto rows1 = variance_ratio_grid(spec);
    const auto rows2 = variance_ratio_grid(spec);
    std::ostringstream csv1, csv2;
    write_grid_csv(csv1, spec, rows1);
    write_grid_csv(csv2, spec, rows2);
    CHECK(csv1.str() == csv2.str());

    std::istringstream in(csv1.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "r2_over_r1,s_over_r2,standard_over_mle,standard_over_mle_flag,"
          "lt_over_mle,lt_over_mle_flag,gt_over_mle,gt_over_mle_flag,"
          "gt_over_lt,gt_over_lt_flag");
    size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == rows1.size());
}

TEST_CASE("synthetic pairs have the requested overlap structure") {
    const auto pair = make_synthetic_pair(validate_ground_truth(7, 5, 3),
                                          UniverseConfig::of(64));
    CHECK(pair.first.cardinality() == 7);
    CHECK(pair.second.cardinality() == 5);
    std::set<uint64_t> s1(pair.first.elements().begin(), pair.first.elements().end());
    size_t shared = 0;
    for (uint64_t e : pair.second.elements()) shared += s1.count(e);
    CHECK(shared == 3);
    CHECK_THROWS_AS(make_synthetic_pair(validate_ground_truth(7, 5, 3), UniverseConfig::of(8)),
                    Error);
}

TEST_CASE("simulation is deterministic given the spec") {
    SimulationSpec spec{validate_ground_truth(4, 2, 1)};
    spec.k_values = {64};
    spec.replications = 200;
    spec.seed = 9;
    spec.estimators = {"standard", "mle"};
    const auto rows1 = run_simulation(spec);
    const auto rows2 = run_simulation(spec);
    REQUIRE(rows1.size() == rows2.size());
    for (size_t i = 0; i < rows1.size(); ++i) {
        CHECK(rows1[i].mean_a_hat == rows2[i].mean_a_hat);
        CHECK(rows1[i].mse == rows2[i].mse);
    }
}

TEST_CASE("counts sampling matches theory for the MLE") {
    SimulationSpec spec{validate_ground_truth(4, 2, 1)};
    spec.k_values = {50, 500};
    spec.replications = 10000;
    spec.seed = 4242;
    spec.estimators = {"mle"};
    const auto rows = run_simulation(spec);
    REQUIRE(rows.size() == 2);

    // bias shrinks with k, MSE tracks the asymptotic variance at k = 500
    const auto& at50 = rows[0];
    const auto& at500 = rows[1];
    CHECK(at500.var_theoretical == doctest::Approx(variance_mle3(4, 2, 1, 500).value));
    CHECK(std::abs(at500.mse / at500.var_theoretical - 1.0) < 0.15);
    CHECK(std::abs(at500.bias) < std::abs(at50.bias));
}

TEST_CASE("sketch sampling agrees with counts sampling") {
    SimulationSpec spec{validate_ground_truth(40, 25, 10)};
    spec.k_values = {128};
    spec.replications = 600;
    spec.seed = 11;
    spec.estimators = {"standard", "mle"};

    spec.sampling = SimSampling::counts;
    const auto counts_rows = run_simulation(spec);
    spec.sampling = SimSampling::sketches;
    const auto sketch_rows = run_simulation(spec);
    REQUIRE(counts_rows.size() == sketch_rows.size());
    for (size_t i = 0; i < counts_rows.size(); ++i) {
        // both are unbiased draws of the same statistic: means within 5 joint sigma
        const double se = std::sqrt(2 * counts_rows[i].var_theoretical / 600.0);
        CHECK(std::abs(counts_rows[i].mean_a_hat - sketch_rows[i].mean_a_hat) < 5 * se);
    }
}

TEST_CASE("b-bit estimators in the simulation harness") {
    SimulationSpec spec{validate_ground_truth(500, 250, 200)};
    spec.universe = UniverseConfig::of(1000);
    spec.k_values = {400};
    spec.replications = 400;
    spec.seed = 31;
    spec.b = 2;
    spec.estimators = {"bbit-full", "bbit-3", "bbit-eq"};
    const auto rows = run_simulation(spec);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.var_theoretical > 0);
        // loose 5-sigma sanity band on the mean
        CHECK(std::abs(row.bias) < 5 * std::sqrt(row.var_theoretical / 400.0) +
                                       0.05 * 200);
    }
    // Fisher ordering of the theoretical columns
    CHECK(rows[0].var_theoretical <= rows[1].var_theoretical * (1 + 1e-9));
    CHECK(rows[1].var_theoretical <= rows[2].var_theoretical * (1 + 1e-9));
}

TEST_CASE("simulation CSV round-trips the numbers at full precision") {
    SimulationSpec spec{validate_ground_truth(4, 2, 1)};
    spec.k_values = {32};
    spec.replications = 50;
    spec.seed = 2;
    spec.estimators = {"standard"};
    const auto rows = run_simulation(spec);
    std::ostringstream csv;
    write_simulation_csv(csv, rows);

    std::istringstream in(csv.str());
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "estimator,k,mean_a_hat,bias,mse,var_theoretical");
    std::getline(in, line);
    std::istringstream fields(line);
    std::string est, kf, meanf;
    std::getline(fields, est, ',');
    std::getline(fields, kf, ',');
    std::getline(fields, meanf, ',');
    CHECK(est == "standard");
    CHECK(kf == "32");
    CHECK(std::stod(meanf) == rows[0].mean_a_hat);  // 17 significant digits
}

TEST_CASE("estimator tag parsing") {
    CHECK(is_bbit_tag("bbit-full"));
    CHECK(!is_bbit_tag("standard"));
    CHECK(grouping_from_tag("bbit-do") == Grouping::diag_off);
    CHECK_THROWS_AS(grouping_from_tag("bbit-x"), Error);

    SimulationSpec spec{validate_ground_truth(4, 2, 1)};
    spec.k_values = {8};
    spec.replications = 2;
    spec.estimators = {"nope"};
    CHECK_THROWS_AS(run_simulation(spec), Error);
}
