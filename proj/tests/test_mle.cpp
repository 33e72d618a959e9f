#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minhash/estimators.hpp"
#include "minhash/hashing.hpp"
#include "minhash/mle.hpp"

using namespace minhash;

namespace {

CellModel binomial_model() {
    CellModel m;
    m.m = 2;
    m.theta_lo = 0;
    m.theta_hi = 1;
    m.probs = [](double t) { return std::vector<double>{t, 1 - t}; };
    return m;
}

struct SplitMix {
    uint64_t state;
    uint64_t next() { return (state = mix64(state)); }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

TEST_CASE("log-likelihood basics") {
    const CellModel m = binomial_model();
    const std::vector<uint64_t> zero{0, 0};
    CHECK(log_likelihood(m, zero, 0.3) == 0.0);

    const std::vector<uint64_t> counts{3, 1};
    CHECK(log_likelihood(m, counts, 0.75) ==
          doctest::Approx(3 * std::log(0.75) + std::log(0.25)).epsilon(1e-14));

    // mass in a zero-probability cell is the -inf sentinel, not a throw
    const std::vector<uint64_t> impossible{1, 0};
    CHECK(log_likelihood(m, impossible, 0.0) == -std::numeric_limits<double>::infinity());

    const std::vector<uint64_t> wrong_len{1, 2, 3};
    CHECK_THROWS_AS(log_likelihood(m, wrong_len, 0.5), Error);
}

TEST_CASE("binomial MLE is the sample proportion") {
    const std::vector<uint64_t> counts{3, 1};
    const MleSolution sol = solve_mle(binomial_model(), counts);
    CHECK(sol.theta_hat == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(!sol.at_boundary);
    // I = k/(theta(1-theta)) = 4/(0.75*0.25)
    CHECK(sol.fisher_info == doctest::Approx(4 / 0.1875).epsilon(1e-7));
}

TEST_CASE("fisher information of the binomial model") {
    for (double theta : {0.1, 0.5, 0.9})
        for (uint64_t k : {1ull, 10ull, 1000ull})
            CHECK(fisher_info(binomial_model(), theta, k) ==
                  doctest::Approx(double(k) / (theta * (1 - theta))).epsilon(1e-9));
}

TEST_CASE("solver rejects flat and empty inputs") {
    CellModel flat;
    flat.m = 2;
    flat.theta_lo = 0;
    flat.theta_hi = 1;
    flat.probs = [](double) { return std::vector<double>{0.5, 0.5}; };
    const std::vector<uint64_t> counts{3, 1};
    CHECK_THROWS_AS(solve_mle(flat, counts), Error);

    const std::vector<uint64_t> empty{0, 0};
    CHECK_THROWS_AS(solve_mle(binomial_model(), empty), Error);
}

TEST_CASE("generic solver matches the dedicated 3-cell root finder") {
    SplitMix rng{42};
    for (int trial = 0; trial < 40; ++trial) {
        const int64_t f2 = 1 + int64_t(rng.next() % 60);
        const int64_t f1 = f2 + int64_t(rng.next() % 60);
        PairCounts3 c{rng.next() % 25, rng.next() % 25, rng.next() % 25};
        if (c.total() == 0) c.k_lt = 3;

        const CellModel model = three_cell_model(double(f1), double(f2));
        const std::vector<uint64_t> counts{c.k_eq, c.k_lt, c.k_gt};
        const MleSolution sol = solve_mle(model, counts);
        const EstimateResult direct = estimate_mle3(c, f1, f2);
        CHECK(std::abs(sol.theta_hat - direct.a_hat) < 1e-9 * double(f2) + 1e-9);
    }
}

TEST_CASE("criterion counts: solver and root agree near a = 1") {
    const CellModel model = three_cell_model(4, 2);
    const std::vector<uint64_t> counts{2, 6, 2};
    const MleSolution sol = solve_mle(model, counts);
    CHECK(std::abs(sol.theta_hat - 1.0) < 1e-9);
}

TEST_CASE("inverse Fisher information reproduces the 3-cell variance formula") {
    for (double f1 : {3.0, 10.0, 250.0})
        for (double f2 : {2.0, 9.0, 100.0})
            for (int i = 1; i <= 8; ++i) {
                const double a = std::min(f1, f2) * i / 9.0;
                const CellModel model = three_cell_model(f1, f2);
                const double inv_info = 1.0 / fisher_info(model, a, 17);
                const double formula = variance_mle3(f1, f2, a, 17).value;
                CHECK(inv_info == doctest::Approx(formula).epsilon(1e-10));
            }
}

TEST_CASE("b = 1 eq-grouping MLE matches the algebraic inversion") {
    // P_{1,=} is linear in the resemblance: P = C1 + (1 - C2) R with
    //   A_i = r_i (1-r_i)^(n-1) / (1 - (1-r_i)^n)
    //   C1 = (A1 r2 + A2 r1)/(r1+r2), C2 = (A1 r1 + A2 r2)/(r1+r2)
    const double r1 = 0.3, r2 = 0.2;
    const double n = 2;
    const auto aterm = [&](double r) {
        return r * std::pow(1 - r, n - 1) / (1 - std::pow(1 - r, n));
    };
    const double a1 = aterm(r1), a2 = aterm(r2);
    const double c1 = (a1 * r2 + a2 * r1) / (r1 + r2);
    const double c2 = (a1 * r1 + a2 * r2) / (r1 + r2);

    const GroupingScheme scheme = make_scheme(Grouping::eq, 1);
    const CellModel model = bbit_cell_model(scheme, r1, r2);
    const std::vector<uint64_t> counts{5517, 4483};

    const double p_hat = 5517.0 / 10000.0;
    const double r_hat = (p_hat - c1) / (1 - c2);
    const double s_closed = r_hat * (r1 + r2) / (1 + r_hat);
    REQUIRE(s_closed > 0);
    REQUIRE(s_closed < std::min(r1, r2));

    const MleSolution sol = solve_mle(model, counts);
    CHECK(std::abs(sol.theta_hat - s_closed) < 1e-10);
}

TEST_CASE("sampled counts concentrate around the true parameter") {
    const double r1 = 0.4, r2 = 0.3, s_true = 0.2;
    const GroupingScheme scheme = make_scheme(Grouping::three, 2);
    const auto probs = grouped_probs(scheme, RateTriple(r1, r2, s_true));
    const CellModel model = bbit_cell_model(scheme, r1, r2);

    SplitMix rng{7};
    const uint64_t k = 100000;
    std::vector<uint64_t> counts(probs.size(), 0);
    for (uint64_t i = 0; i < k; ++i) {
        double u = rng.uniform();
        size_t cell = 0;
        while (cell + 1 < probs.size() && u >= probs[cell]) u -= probs[cell], ++cell;
        ++counts[cell];
    }

    const MleSolution sol = solve_mle(model, counts);
    CHECK(std::abs(sol.theta_hat - s_true) < 5 * std::sqrt(sol.var_asymptotic));
}

TEST_CASE("score vanishes at interior optima") {
    const CellModel model = three_cell_model(40, 30);
    const std::vector<uint64_t> counts{10, 25, 15};
    const MleSolution sol = solve_mle(model, counts);
    CHECK(!sol.at_boundary);
    CHECK(std::abs(score(model, counts, sol.theta_hat)) <= 1e-8 * 50);
}

TEST_CASE("boundary solutions are flagged with finite information") {
    const CellModel model = three_cell_model(4, 2);
    const std::vector<uint64_t> all_eq{50, 0, 0};
    const MleSolution hi = solve_mle(model, all_eq);
    CHECK(hi.theta_hat == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hi.at_boundary);
    CHECK(hi.var_asymptotic >= 0);

    const std::vector<uint64_t> none_eq{0, 30, 20};
    const MleSolution lo = solve_mle(model, none_eq);
    CHECK(lo.theta_hat == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lo.at_boundary);
}

TEST_CASE("numeric derivatives pass a Richardson step-halving check") {
    const GroupingScheme scheme = make_scheme(Grouping::three, 4);
    const CellModel model = bbit_cell_model(scheme, 0.5, 0.4);
    const double theta = 0.2;
    const auto d = cell_derivatives(model, theta);

    // plain central differences at a 4x smaller step
    const double h = 1e-5 * 0.5 / 4;
    const auto qp = model.probs(theta + h);
    const auto qm = model.probs(theta - h);
    for (size_t i = 0; i < model.m; ++i) {
        const double ref = (qp[i] - qm[i]) / (2 * h);
        CHECK(d[i] == doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("information ordering under cell refinement") {
    const double r1 = 0.5, r2 = 0.25, s = 0.15;
    const uint32_t b = 2;
    const auto info = [&](Grouping g) {
        return fisher_info(bbit_cell_model(make_scheme(g, b), r1, r2), s, 1);
    };
    const double i_full = info(Grouping::full);
    const double i_do = info(Grouping::diag_off);
    const double i_d = info(Grouping::diag);
    const double i_three = info(Grouping::three);
    const double i_eq = info(Grouping::eq);
    CHECK(i_full * (1 + 1e-9) >= i_do);
    CHECK(i_do * (1 + 1e-9) >= i_d);
    CHECK(i_do * (1 + 1e-9) >= i_three);
    CHECK(i_d * (1 + 1e-9) >= i_eq);
    CHECK(i_three * (1 + 1e-9) >= i_eq);
}
