#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minhash/estimators.hpp"
#include "minhash/types.hpp"

using namespace minhash;

TEST_CASE("ground truth validation and derived measures") {
    const PairGroundTruth gt = validate_ground_truth(4, 2, 1);
    CHECK(gt.resemblance() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(gt.containment() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gt.union_size() == 5);

    const PairGroundTruth same = validate_ground_truth(3, 3, 3);
    CHECK(same.resemblance() == 1.0);
    CHECK(same.containment() == 1.0);

    CHECK_THROWS_AS(validate_ground_truth(2, 5, 3), Error);
    CHECK_THROWS_AS(validate_ground_truth(0, 2, 0), Error);
    CHECK_THROWS_AS(validate_ground_truth(2, 0, 0), Error);
    CHECK_THROWS_AS(validate_ground_truth(4, 2, -1), Error);
}

TEST_CASE("three cell probabilities sum to one exactly on integers") {
    // numerators a, f1-a, f2-a against denominator f1+f2-a
    for (int64_t f1 = 1; f1 <= 12; ++f1)
        for (int64_t f2 = 1; f2 <= 12; ++f2)
            for (int64_t a = 0; a <= std::min(f1, f2); ++a) {
                CHECK(a + (f1 - a) + (f2 - a) == f1 + f2 - a);
                const auto p = three_cell_probs(validate_ground_truth(f1, f2, a));
                CHECK(p.p_eq + p.p_lt + p.p_gt == doctest::Approx(1.0).epsilon(1e-15));
            }
}

TEST_CASE("set record validation") {
    CHECK_THROWS_AS(SetRecord("x", {}), Error);
    CHECK_THROWS_AS(SetRecord("x", {3, 2}), Error);
    CHECK_THROWS_AS(SetRecord("x", {2, 2}), Error);
    CHECK_THROWS_AS(SetRecord("x", {0, 7}, UniverseConfig::of(7)), Error);
    const SetRecord ok("x", {0, 3, 6}, UniverseConfig::of(7));
    CHECK(ok.cardinality() == 3);
}

TEST_CASE("universe config") {
    CHECK_THROWS_AS(UniverseConfig::of(0), Error);
    CHECK(UniverseConfig::full().contains(~uint64_t(0)));
    CHECK(!UniverseConfig::of(8).contains(8));
    CHECK(UniverseConfig::of(8).rate(2.0) == doctest::Approx(0.25));
    CHECK(UniverseConfig::full().size_as_double() == doctest::Approx(1.8446744073709552e19));
}

TEST_CASE("contingency table collapse preserves the total count") {
    ContingencyTable table(2);
    uint64_t k = 0;
    for (uint32_t t = 0; t < 4; ++t)
        for (uint32_t d = 0; d < 4; ++d) {
            table.at(t, d) = t * 7 + d + 1;
            k += t * 7 + d + 1;
        }
    const PairCounts3 c = table.collapse();
    CHECK(c.total() == k);
    CHECK(c.total() == table.total());
    CHECK(c.k_eq == 1 + 9 + 17 + 25);

    CHECK_THROWS_AS(ContingencyTable(0), Error);
    CHECK_THROWS_AS(ContingencyTable(9), Error);
}
