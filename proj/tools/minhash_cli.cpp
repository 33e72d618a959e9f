// Command-line surface: sketching, pair estimation, variance-ratio grids,
// Monte Carlo simulation and corpus statistics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "minhash/analysis.hpp"
#include "minhash/corpus.hpp"
#include "minhash/estimators.hpp"
#include "minhash/hashing.hpp"
#include "minhash/mle.hpp"
#include "minhash/sketch_io.hpp"

namespace {

using namespace minhash;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

UniverseConfig universe_from_flag(uint64_t d) {
    return d == 0 ? UniverseConfig::full() : UniverseConfig::of(d);
}

std::string safe_filename(const std::string& id) {
    std::string out = id;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' &&
            c != '-')
            c = '_';
    return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    return file;
}

int cmd_sketch(const std::string& input, const std::string& format_name, uint32_t k,
               uint64_t seed, uint32_t b, uint64_t d_flag, const std::string& out_dir) {
    const UniverseConfig universe = universe_from_flag(d_flag);
    const InputCorpus corpus = load_corpus(input, parse_corpus_format(format_name), universe);
    if (corpus.sets.empty()) throw Error(input + ": no sets");

    std::filesystem::create_directories(out_dir);
    const HashFamily family(seed, k, universe);

    std::vector<std::string> seen;
    for (const SetRecord& set : corpus.sets) {
        const std::string name = safe_filename(set.id());
        if (std::find(seen.begin(), seen.end(), name) != seen.end())
            throw Error("duplicate set id '" + set.id() + "'");
        seen.push_back(name);

        const MinwiseSketch sketch = sketch_minwise(set, family);
        const std::string path = (std::filesystem::path(out_dir) / (name + ".mhs")).string();
        if (b > 0)
            save_sketch(truncate_to_bbit(sketch, b), path);
        else
            save_sketch(sketch, path);
    }
    std::cout << "wrote " << corpus.sets.size() << " sketches to " << out_dir << "\n";
    return 0;
}

int cmd_estimate(const std::string& path_a, const std::string& path_b,
                 const std::string& estimator, uint64_t d_flag) {
    const AnySketch sa = load_sketch(path_a);
    const AnySketch sb = load_sketch(path_b);
    const UniverseConfig universe = universe_from_flag(d_flag);
    const double d = universe.size_as_double();

    EstimateResult res;
    uint64_t k = 0;
    uint32_t b = 0;

    if (estimator == "standard" || estimator == "mle") {
        if (sketch_kind(sa) != SketchKind::full64 || sketch_kind(sb) != SketchKind::full64)
            throw Error("estimator '" + estimator + "' needs full 64-bit sketches");
        const auto& m1 = std::get<MinwiseSketch>(sa);
        const auto& m2 = std::get<MinwiseSketch>(sb);
        const PairCounts3 counts = compare_minwise(m1, m2);
        k = counts.total();
        const int64_t f1 = int64_t(m1.f()), f2 = int64_t(m2.f());
        res = (estimator == "standard") ? estimate_simple(counts, f1, f2, SimpleEstimator::eq)
                                        : estimate_mle3(counts, f1, f2);
    } else if (is_bbit_tag(estimator)) {
        if (sketch_kind(sa) != SketchKind::bbit || sketch_kind(sb) != SketchKind::bbit)
            throw Error("estimator '" + estimator + "' needs b-bit sketches");
        const auto& b1 = std::get<BBitSketch>(sa);
        const auto& b2 = std::get<BBitSketch>(sb);
        b = b1.b();
        const GroupingScheme scheme = make_scheme(grouping_from_tag(estimator), b);

        std::vector<uint64_t> counts;
        if (scheme.tag == Grouping::three || scheme.tag == Grouping::eq) {
            const PairCounts3 c3 = compare_bbit_summary(b1, b2);
            k = c3.total();
            counts = grouped_counts(c3, scheme);
        } else {
            const ContingencyTable table = compare_bbit(b1, b2);
            k = table.total();
            counts = grouped_counts(table, scheme);
        }

        const double f1 = double(b1.f()), f2 = double(b2.f());
        const CellModel model = bbit_cell_model(scheme, f1 / d, f2 / d);
        const MleSolution sol = solve_mle(model, counts);
        res.a_hat = sol.theta_hat * d;
        res.a_hat_raw = res.a_hat;
        res.r_hat = res.a_hat / (f1 + f2 - res.a_hat);
        res.t_hat = res.a_hat / std::min(f1, f2);
        res.var_asymptotic = sol.var_asymptotic * d * d;
        res.at_boundary = sol.at_boundary;
        res.estimator_tag = estimator;
    } else {
        throw Error("unknown estimator '" + estimator + "'");
    }

    std::cout << "estimator=" << estimator << " k=" << k << " b=" << b
              << " a_hat=" << fmt(res.a_hat) << " resemblance=" << fmt(res.r_hat)
              << " containment=" << fmt(res.t_hat)
              << " stderr=" << fmt(std::sqrt(res.var_asymptotic))
              << " at_boundary=" << (res.at_boundary ? 1 : 0) << "\n";
    return 0;
}

int cmd_grid(uint32_t b, double r1, std::vector<std::string> compare, uint32_t resolution,
             const std::string& out_path) {
    VarianceGridSpec spec;
    spec.b = b;
    spec.r1 = r1;
    spec.ratio_axis = default_ratio_axis(resolution);
    spec.containment_axis = default_containment_axis(resolution);

    if (compare.empty()) {
        if (b == 0)
            compare = {"standard/mle", "lt/mle", "gt/mle", "gt/lt"};
        else
            compare = {"bbit-do/bbit-full", "bbit-d/bbit-full", "bbit-3/bbit-full",
                       "bbit-eq/bbit-full"};
    }
    for (const std::string& c : compare) {
        const size_t slash = c.find('/');
        if (slash == std::string::npos)
            throw Error("comparison '" + c + "' must be <numerator>/<denominator>");
        spec.comparisons.emplace_back(c.substr(0, slash), c.substr(slash + 1));
    }

    const auto rows = variance_ratio_grid(spec);
    std::ofstream file;
    write_grid_csv(open_out(file, out_path), spec, rows);
    return 0;
}

int cmd_simulate(int64_t f1, int64_t f2, int64_t a, uint64_t d_flag,
                 std::vector<uint64_t> k_values, uint32_t reps, uint64_t seed,
                 const std::string& estimators, uint32_t b, const std::string& sampling,
                 const std::string& out_path) {
    SimulationSpec spec{validate_ground_truth(f1, f2, a)};
    spec.universe = universe_from_flag(d_flag);
    spec.k_values = std::move(k_values);
    spec.replications = reps;
    spec.seed = seed;
    spec.b = b;
    if (sampling == "counts")
        spec.sampling = SimSampling::counts;
    else if (sampling == "sketches")
        spec.sampling = SimSampling::sketches;
    else
        throw Error("sampling must be counts or sketches");

    std::stringstream names(estimators);
    std::string tag;
    while (std::getline(names, tag, ','))
        if (!tag.empty()) spec.estimators.push_back(tag);

    const auto rows = run_simulation(spec);
    std::ofstream file;
    write_simulation_csv(open_out(file, out_path), rows);
    return 0;
}

int cmd_stats(const std::string& input, const std::string& format_name,
              uint64_t pairs_sample, uint64_t seed) {
    const InputCorpus corpus = load_corpus(input, parse_corpus_format(format_name));
    const size_t n = corpus.sets.size();
    if (n == 0) throw Error(input + ": no sets");

    std::vector<double> fs(n);
    for (size_t i = 0; i < n; ++i) fs[i] = double(corpus.sets[i].cardinality());
    const double f_min = *std::min_element(fs.begin(), fs.end());
    const double f_max = *std::max_element(fs.begin(), fs.end());
    double mean = 0;
    for (double f : fs) mean += f;
    mean /= double(n);
    double var = 0;
    for (double f : fs) var += (f - mean) * (f - mean);
    var = n > 1 ? var / double(n - 1) : 0.0;

    std::cout << "sets=" << n << " f_min=" << fmt(f_min) << " f_max=" << fmt(f_max)
              << " f_mean=" << fmt(mean) << " f_std=" << fmt(std::sqrt(var)) << "\n";

    constexpr int kBins = 20;
    const double width = (f_max > f_min) ? (f_max - f_min) / kBins : 1.0;
    std::vector<uint64_t> hist(kBins, 0);
    for (double f : fs) {
        int bin = int((f - f_min) / width);
        if (bin >= kBins) bin = kBins - 1;
        ++hist[size_t(bin)];
    }
    for (int i = 0; i < kBins; ++i)
        std::cout << "hist " << fmt(f_min + i * width) << " " << fmt(f_min + (i + 1) * width)
                  << " " << hist[size_t(i)] << "\n";

    // pairwise size-ratio statistics, exhaustive when the sample budget covers
    // all pairs, otherwise sampled with replacement
    if (n >= 2) {
        const uint64_t total_pairs = uint64_t(n) * (n - 1) / 2;
        double rsum = 0, rsumsq = 0;
        uint64_t used = 0;
        if (pairs_sample == 0 || pairs_sample >= total_pairs) {
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i + 1; j < n; ++j) {
                    const double r = std::max(fs[i], fs[j]) / std::min(fs[i], fs[j]);
                    rsum += r;
                    rsumsq += r * r;
                    ++used;
                }
        } else {
            uint64_t state = seed;
            const auto next = [&state]() { return (state = mix64(state)); };
            for (uint64_t t = 0; t < pairs_sample; ++t) {
                const size_t i = size_t(next() % n);
                size_t j = size_t(next() % (n - 1));
                if (j >= i) ++j;
                const double r = std::max(fs[i], fs[j]) / std::min(fs[i], fs[j]);
                rsum += r;
                rsumsq += r * r;
                ++used;
            }
        }
        const double rmean = rsum / double(used);
        const double rvar =
            used > 1 ? (rsumsq - double(used) * rmean * rmean) / double(used - 1) : 0.0;
        std::cout << "pairs_total=" << total_pairs << " pairs_used=" << used
                  << " exhaustive=" << (pairs_sample == 0 || pairs_sample >= total_pairs ? 1 : 0)
                  << " ratio_mean=" << fmt(rmean)
                  << " ratio_std=" << fmt(std::sqrt(std::max(rvar, 0.0))) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minwise and b-bit minwise hashing sketches with multinomial "
                 "maximum-likelihood estimators"};
    app.require_subcommand(1);

    // sketch
    std::string in_path, format = "lines", out_dir = ".";
    uint32_t k = 256, b_flag = 0;
    uint64_t seed = 1, d_flag = 0;
    auto* sketch = app.add_subcommand("sketch", "sketch every set in a corpus");
    sketch->add_option("--input", in_path, "input corpus")->required();
    sketch->add_option("--format", format, "lines | sparse-index");
    sketch->add_option("--k", k, "number of permutations")->required();
    sketch->add_option("--seed", seed, "master seed");
    sketch->add_option("--b", b_flag, "emit b-bit sketches (default: full 64-bit)");
    sketch->add_option("--D", d_flag, "universe size (default 2^64)");
    sketch->add_option("--out-dir", out_dir, "output directory");

    // estimate
    std::string path_a, path_b, estimator = "mle";
    uint64_t est_d = 0;
    auto* estimate = app.add_subcommand("estimate", "estimate intersection from two sketches");
    estimate->add_option("--a", path_a, "first sketch file")->required();
    estimate->add_option("--b", path_b, "second sketch file")->required();
    estimate->add_option("--estimator", estimator,
                         "standard | mle | bbit-full | bbit-do | bbit-d | bbit-3 | bbit-eq");
    estimate->add_option("--D", est_d, "universe size (default 2^64)");

    // grid
    uint32_t grid_b = 0, resolution = 50;
    double r1 = 0.5;
    std::vector<std::string> compare;
    std::string grid_out;
    auto* grid = app.add_subcommand("grid", "theoretical variance-ratio grid as CSV");
    grid->add_option("--b", grid_b, "bits (0 = plain minwise)")->check(CLI::Range(0, 8));
    grid->add_option("--r1", r1, "base rate r1 = f1/D (b >= 1)");
    grid->add_option("--compare", compare, "ratio <numerator>/<denominator>, repeatable");
    grid->add_option("--resolution", resolution, "grid points per axis")
        ->check(CLI::Range(2, 2000));
    grid->add_option("--out", grid_out, "output CSV (default stdout)");

    // simulate
    int64_t f1 = 0, f2 = 0, a = 0;
    uint64_t sim_d = 0, sim_seed = 1;
    std::vector<uint64_t> sim_k;
    uint32_t reps = 1000, sim_b = 1;
    std::string estimators = "standard,mle", sampling = "counts", sim_out;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimator study as CSV");
    simulate->add_option("--f1", f1, "cardinality of set 1")->required();
    simulate->add_option("--f2", f2, "cardinality of set 2")->required();
    simulate->add_option("--a", a, "intersection size")->required();
    simulate->add_option("--D", sim_d, "universe size (default 2^64)");
    simulate->add_option("--k", sim_k, "number of permutations, repeatable")->required();
    simulate->add_option("--reps", reps, "replications");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--estimators", estimators, "comma-separated estimator tags");
    simulate->add_option("--b", sim_b, "bit width for bbit-* estimators");
    simulate->add_option("--sampling", sampling, "counts | sketches");
    simulate->add_option("--out", sim_out, "output CSV (default stdout)");

    // stats
    std::string stats_in, stats_format = "lines";
    uint64_t pairs_sample = 0, stats_seed = 1;
    auto* stats = app.add_subcommand("stats", "corpus cardinality and pair-ratio statistics");
    stats->add_option("--input", stats_in, "input corpus")->required();
    stats->add_option("--format", stats_format, "lines | sparse-index");
    stats->add_option("--pairs-sample", pairs_sample,
                      "sample this many pairs (0 = exhaustive)");
    stats->add_option("--seed", stats_seed, "sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sketch->parsed())
            return cmd_sketch(in_path, format, k, seed, b_flag, d_flag, out_dir);
        if (estimate->parsed()) return cmd_estimate(path_a, path_b, estimator, est_d);
        if (grid->parsed()) return cmd_grid(grid_b, r1, compare, resolution, grid_out);
        if (simulate->parsed())
            return cmd_simulate(f1, f2, a, sim_d, sim_k, reps, sim_seed, estimators, sim_b,
                                sampling, sim_out);
        if (stats->parsed()) return cmd_stats(stats_in, stats_format, pairs_sample, stats_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
