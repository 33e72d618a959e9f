#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace minhash {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Universe {0, ..., D-1}. Production use is the full 64-bit domain; a smaller
// D is supported for testing and for the exact oracle.
class UniverseConfig {
public:
    constexpr UniverseConfig() = default;  // full 64-bit domain

    static constexpr UniverseConfig full() { return UniverseConfig{}; }

    static UniverseConfig of(uint64_t d) {
        if (d == 0) throw Error("universe size must be >= 1");
        UniverseConfig u;
        u.d_ = d;
        return u;
    }

    constexpr bool is_full() const { return d_ == 0; }

    // valid only when !is_full()
    constexpr uint64_t size() const { return d_; }

    double size_as_double() const {
        return is_full() ? 18446744073709551616.0 : static_cast<double>(d_);
    }

    constexpr bool contains(uint64_t element) const {
        return is_full() || element < d_;
    }

    double rate(double cardinality) const { return cardinality / size_as_double(); }

    friend bool operator==(const UniverseConfig&, const UniverseConfig&) = default;

private:
    uint64_t d_ = 0;  // 0 encodes 2^64
};

// A finite set of element IDs, strictly increasing. Empty sets are rejected.
class SetRecord {
public:
    SetRecord(std::string id, std::vector<uint64_t> elements,
              const UniverseConfig& universe = UniverseConfig::full())
        : id_(std::move(id)), elements_(std::move(elements)) {
        if (elements_.empty()) throw Error("set '" + id_ + "' is empty");
        for (size_t i = 0; i < elements_.size(); ++i) {
            if (i > 0 && elements_[i] <= elements_[i - 1])
                throw Error("set '" + id_ + "' is not strictly increasing");
            if (!universe.contains(elements_[i]))
                throw Error("set '" + id_ + "' has element outside the universe");
        }
    }

    const std::string& id() const { return id_; }
    const std::vector<uint64_t>& elements() const { return elements_; }
    uint64_t cardinality() const { return elements_.size(); }

private:
    std::string id_;
    std::vector<uint64_t> elements_;
};

// Known (f1, f2, a) for a pair of sets. No orientation is enforced;
// operations that assume f1 >= f2 handle orientation explicitly.
class PairGroundTruth {
public:
    PairGroundTruth(int64_t f1, int64_t f2, int64_t a) : f1_(f1), f2_(f2), a_(a) {
        if (f1 < 1 || f2 < 1) throw Error("cardinalities must be >= 1");
        if (a < 0) throw Error("intersection size must be >= 0");
        if (a > std::min(f1, f2)) throw Error("intersection exceeds the smaller set");
    }

    int64_t f1() const { return f1_; }
    int64_t f2() const { return f2_; }
    int64_t intersection() const { return a_; }
    int64_t union_size() const { return f1_ + f2_ - a_; }

    double resemblance() const {
        return static_cast<double>(a_) / static_cast<double>(union_size());
    }

    // against the smaller set
    double containment() const {
        return static_cast<double>(a_) / static_cast<double>(std::min(f1_, f2_));
    }

    PairGroundTruth swapped() const { return PairGroundTruth(f2_, f1_, a_); }

private:
    int64_t f1_;
    int64_t f2_;
    int64_t a_;
};

inline PairGroundTruth validate_ground_truth(int64_t f1, int64_t f2, int64_t a) {
    return PairGroundTruth(f1, f2, a);
}

// Observed 3-cell counts from comparing two sketches of k permutations.
struct PairCounts3 {
    uint64_t k_eq = 0;
    uint64_t k_lt = 0;  // z1 < z2
    uint64_t k_gt = 0;  // z1 > z2

    uint64_t total() const { return k_eq + k_lt + k_gt; }
};

// Full 2^b x 2^b contingency table of b-bit value pairs (u1 = t, u2 = d).
// The full table is kept only for b <= 8; larger b works with the collapsed
// summaries.
class ContingencyTable {
public:
    explicit ContingencyTable(uint32_t b) : b_(b) {
        if (b < 1 || b > 8) throw Error("contingency table needs 1 <= b <= 8");
        counts_.assign(size_t(1) << (2 * b), 0);
    }

    uint32_t b() const { return b_; }
    uint32_t side() const { return uint32_t(1) << b_; }

    uint64_t& at(uint32_t t, uint32_t d) { return counts_[size_t(t) * side() + d]; }
    uint64_t at(uint32_t t, uint32_t d) const { return counts_[size_t(t) * side() + d]; }

    const std::vector<uint64_t>& cells() const { return counts_; }

    uint64_t total() const {
        uint64_t sum = 0;
        for (uint64_t c : counts_) sum += c;
        return sum;
    }

    PairCounts3 collapse() const {
        PairCounts3 out;
        const uint32_t n = side();
        for (uint32_t t = 0; t < n; ++t)
            for (uint32_t d = 0; d < n; ++d) {
                uint64_t c = at(t, d);
                if (t == d)
                    out.k_eq += c;
                else if (t < d)
                    out.k_lt += c;
                else
                    out.k_gt += c;
            }
        return out;
    }

private:
    uint32_t b_;
    std::vector<uint64_t> counts_;
};

}  // namespace minhash
