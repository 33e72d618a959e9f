#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minhash/bbit_model.hpp"
#include "minhash/estimators.hpp"
#include "minhash/types.hpp"

namespace minhash {

// Estimator tags shared by the grid, the simulation harness and the CLI:
//   minwise (b = 0): "standard" (a_eq), "lt", "gt", "mle"
//   b-bit:           "bbit-full", "bbit-do", "bbit-d", "bbit-3", "bbit-eq"
bool is_bbit_tag(const std::string& tag);
Grouping grouping_from_tag(const std::string& tag);

// Grid of theoretical variance ratios over (r2/r1, s/r2). For b = 0 the
// ratios come from the minwise closed forms (scale-free, so r1 only matters
// for b >= 1); for b >= 1 from inverse Fisher information of the groupings.
// Ratios are leading-order and therefore k-free.
struct VarianceGridSpec {
    uint32_t b = 0;  // 0 = plain minwise
    double r1 = 0.5;
    std::vector<double> ratio_axis;        // r2/r1
    std::vector<double> containment_axis;  // s/r2
    // variance ratios Var(first)/Var(second)
    std::vector<std::pair<std::string, std::string>> comparisons;
};

std::vector<double> default_ratio_axis(size_t n = 50);        // [0.02, 1]
std::vector<double> default_containment_axis(size_t n = 50);  // [0, 0.99]
// the 10x10 axes used by the verification grids
std::vector<double> standard_ratio_axis();        // [0.1, 1]
std::vector<double> standard_containment_axis();  // [0, 0.99]

// per-comparison flags: 0 = ok, 1 = boundary (a variance is 0 or diverges,
// ratio reported as nan), 2 = infeasible rates (r1 + r2 - s > 1)
struct GridRow {
    double r2_over_r1 = 0;
    double s_over_r2 = 0;
    std::vector<double> ratios;
    std::vector<int> flags;
};

std::vector<GridRow> variance_ratio_grid(const VarianceGridSpec& spec);
void write_grid_csv(std::ostream& out, const VarianceGridSpec& spec,
                    std::span<const GridRow> rows);

// Monte Carlo study of estimator error against the theoretical variances.
// counts sampling draws the multinomial cell outcomes directly (identical in
// distribution to sketching under the permutation model); sketches sampling
// builds and hashes synthetic sets end to end.
enum class SimSampling { counts, sketches };

struct SimulationSpec {
    explicit SimulationSpec(PairGroundTruth gt) : ground_truth(gt) {}

    PairGroundTruth ground_truth;
    UniverseConfig universe;  // must hold f1 + f2 - a elements
    std::vector<uint64_t> k_values;
    uint32_t replications = 1;
    uint64_t seed = 1;
    std::vector<std::string> estimators;
    uint32_t b = 1;  // bit width used by bbit-* estimators
    SimSampling sampling = SimSampling::counts;
};

struct SimulationRow {
    std::string estimator;
    uint64_t k = 0;
    double mean_a_hat = 0;
    double bias = 0;
    double mse = 0;
    double var_theoretical = 0;  // at the true parameters
};

std::vector<SimulationRow> run_simulation(const SimulationSpec& spec);
void write_simulation_csv(std::ostream& out, std::span<const SimulationRow> rows);

// synthetic pair: a shared elements, then f1-a and f2-a private ones,
// IDs assigned consecutively
std::pair<SetRecord, SetRecord> make_synthetic_pair(const PairGroundTruth& gt,
                                                    const UniverseConfig& universe);

}  // namespace minhash
