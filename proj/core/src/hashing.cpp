#include "minhash/hashing.hpp"

#include <bit>

namespace minhash {

PermutationHash::PermutationHash(uint64_t subkey, const UniverseConfig& universe)
    : subkey_(subkey) {
    if (universe.is_full()) return;

    domain_ = universe.size();
    const int m = (domain_ <= 1) ? 1 : std::bit_width(domain_ - 1);
    mask_ = (m == 64) ? ~uint64_t(0) : ((uint64_t(1) << m) - 1);

    // round keys and odd multipliers from the subkey stream
    uint64_t state = subkey_;
    for (int r = 0; r < kRounds; ++r) {
        add_key_[r] = mix64(state + 1) & mask_;
        mul_key_[r] = (mix64(state + 2) | 1) & mask_;
        state = mix64(state + 3);
    }
    // xorshift amounts scaled to the m-bit word, mirroring the 64-bit chain
    const int base[kRounds + 1] = {30, 27, 31, 30, 27};
    for (int r = 0; r <= kRounds; ++r) {
        int s = (m * base[r]) / 64;
        shift_[r] = s < 1 ? 1 : s;
    }
}

std::vector<uint8_t> pack_bbit_values(std::span<const uint32_t> values, uint32_t b) {
    if (b < 1 || b > 32) throw Error("bit width must satisfy 1 <= b <= 32");
    const size_t nbits = values.size() * size_t(b);
    std::vector<uint8_t> bytes((nbits + 7) / 8, 0);
    for (size_t j = 0; j < values.size(); ++j) {
        uint64_t v = values[j];
        size_t bit = j * b;
        for (uint32_t i = 0; i < b; ++i, ++bit)
            bytes[bit >> 3] |= uint8_t(((v >> i) & 1) << (bit & 7));
    }
    return bytes;
}

std::vector<uint32_t> unpack_bbit_values(std::span<const uint8_t> bytes, uint32_t k,
                                         uint32_t b) {
    if (b < 1 || b > 32) throw Error("bit width must satisfy 1 <= b <= 32");
    if (bytes.size() * 8 < size_t(k) * b) throw Error("packed payload too short");
    std::vector<uint32_t> values(k, 0);
    for (uint32_t j = 0; j < k; ++j) {
        uint32_t v = 0;
        size_t bit = size_t(j) * b;
        for (uint32_t i = 0; i < b; ++i, ++bit)
            v |= uint32_t((bytes[bit >> 3] >> (bit & 7)) & 1) << i;
        values[j] = v;
    }
    return values;
}

BBitSketch::BBitSketch(uint64_t f, uint64_t seed, uint32_t k, uint32_t b,
                       std::vector<uint8_t> packed)
    : f_(f), seed_(seed), k_(k), b_(b), packed_(std::move(packed)) {
    if (k == 0) throw Error("sketch needs k >= 1");
    if (b < 1 || b > 32) throw Error("bit width must satisfy 1 <= b <= 32");
    if (packed_.size() != (size_t(k) * b + 7) / 8)
        throw Error("packed payload has wrong size");
}

uint32_t BBitSketch::value(uint32_t j) const {
    if (j >= k_) throw Error("sketch index out of range");
    uint32_t v = 0;
    size_t bit = size_t(j) * b_;
    for (uint32_t i = 0; i < b_; ++i, ++bit)
        v |= uint32_t((packed_[bit >> 3] >> (bit & 7)) & 1) << i;
    return v;
}

MinwiseSketch sketch_minwise(const SetRecord& set, const HashFamily& family) {
    const auto& xs = set.elements();
    if (!family.universe().contains(xs.back()))  // elements are ascending
        throw Error("set '" + set.id() + "' has element outside the hash universe");
    std::vector<uint64_t> mins(family.k());
    for (uint32_t j = 0; j < family.k(); ++j) {
        const PermutationHash h = family.permutation(j);
        uint64_t m = h(xs[0]);
        for (size_t i = 1; i < xs.size(); ++i) {
            uint64_t v = h(xs[i]);
            if (v < m) m = v;
        }
        mins[j] = m;
    }
    return MinwiseSketch(set.cardinality(), family.master_seed(), std::move(mins));
}

BBitSketch truncate_to_bbit(const MinwiseSketch& sketch, uint32_t b) {
    if (b < 1 || b > 32) throw Error("bit width must satisfy 1 <= b <= 32");
    const uint64_t mask = (uint64_t(1) << b) - 1;
    std::vector<uint32_t> values(sketch.k());
    for (uint32_t j = 0; j < sketch.k(); ++j)
        values[j] = static_cast<uint32_t>(sketch.mins()[j] & mask);
    return BBitSketch(sketch.f(), sketch.seed(), sketch.k(), b,
                      pack_bbit_values(values, b));
}

PairCounts3 compare_minwise(const MinwiseSketch& s1, const MinwiseSketch& s2) {
    if (s1.seed() != s2.seed()) throw Error("sketch seed mismatch");
    if (s1.k() != s2.k()) throw Error("sketch k mismatch");
    PairCounts3 counts;
    for (uint32_t j = 0; j < s1.k(); ++j) {
        uint64_t z1 = s1.mins()[j], z2 = s2.mins()[j];
        if (z1 == z2)
            ++counts.k_eq;
        else if (z1 < z2)
            ++counts.k_lt;
        else
            ++counts.k_gt;
    }
    return counts;
}

ContingencyTable compare_bbit(const BBitSketch& s1, const BBitSketch& s2) {
    if (s1.seed() != s2.seed()) throw Error("sketch seed mismatch");
    if (s1.k() != s2.k()) throw Error("sketch k mismatch");
    if (s1.b() != s2.b()) throw Error("sketch bit width mismatch");
    if (s1.b() > 8) throw Error("full contingency table needs b <= 8");
    ContingencyTable table(s1.b());
    const auto v1 = s1.values();
    const auto v2 = s2.values();
    for (uint32_t j = 0; j < s1.k(); ++j) ++table.at(v1[j], v2[j]);
    return table;
}

PairCounts3 compare_bbit_summary(const BBitSketch& s1, const BBitSketch& s2) {
    if (s1.seed() != s2.seed()) throw Error("sketch seed mismatch");
    if (s1.k() != s2.k()) throw Error("sketch k mismatch");
    if (s1.b() != s2.b()) throw Error("sketch bit width mismatch");
    PairCounts3 counts;
    const auto v1 = s1.values();
    const auto v2 = s2.values();
    for (uint32_t j = 0; j < s1.k(); ++j) {
        if (v1[j] == v2[j])
            ++counts.k_eq;
        else if (v1[j] < v2[j])
            ++counts.k_lt;
        else
            ++counts.k_gt;
    }
    return counts;
}

}  // namespace minhash
