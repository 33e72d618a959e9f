#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "minhash/types.hpp"

namespace minhash {

// 64-bit avalanche finalizer (splitmix64 step); bijective on 64-bit values.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// One seeded permutation of the universe. Full-domain permutations are the
// finalizer applied to (x XOR subkey). For D < 2^64 the same multiply-xorshift
// rounds run on ceil(log2 D) bits with cycle-walking back into [0, D), so the
// map stays a bijection on [0, D): a hashed stand-in for a random permutation
// with no value collisions.
class PermutationHash {
public:
    PermutationHash(uint64_t subkey, const UniverseConfig& universe);

    uint64_t operator()(uint64_t x) const {
        if (domain_ == 0) return mix64(x ^ subkey_);
        uint64_t v = x;
        do {
            v = permute_bits(v);
        } while (v >= domain_);
        return v;
    }

private:
    static constexpr int kRounds = 4;

    uint64_t permute_bits(uint64_t v) const {
        for (int r = 0; r < kRounds; ++r) {
            v = (v + add_key_[r]) & mask_;
            v ^= v >> shift_[r];
            v = (v * mul_key_[r]) & mask_;
        }
        v ^= v >> shift_[kRounds];
        return v;
    }

    uint64_t subkey_;
    uint64_t domain_ = 0;  // 0 = full 64-bit domain
    uint64_t mask_ = 0;
    uint64_t add_key_[kRounds] = {};
    uint64_t mul_key_[kRounds] = {};
    int shift_[kRounds + 1] = {};
};

// Deterministic family of k seeded permutations standing in for pi_1..pi_k.
class HashFamily {
public:
    HashFamily(uint64_t master_seed, uint32_t k,
               UniverseConfig universe = UniverseConfig::full())
        : master_seed_(master_seed), k_(k), universe_(universe) {
        if (k == 0) throw Error("hash family needs k >= 1");
    }

    uint64_t master_seed() const { return master_seed_; }
    uint32_t k() const { return k_; }
    const UniverseConfig& universe() const { return universe_; }

    uint64_t subkey(uint32_t j) const { return mix64(master_seed_ + j); }

    PermutationHash permutation(uint32_t j) const {
        return PermutationHash(subkey(j), universe_);
    }

    // hash_j(x), a pure function of (master_seed, j, x)
    uint64_t value(uint32_t j, uint64_t x) const { return permutation(j)(x); }

private:
    uint64_t master_seed_;
    uint32_t k_;
    UniverseConfig universe_;
};

// k stored minimum hash values plus the exact set cardinality f (both MLE
// families need f1, f2 as known constants).
class MinwiseSketch {
public:
    MinwiseSketch(uint64_t f, uint64_t seed, std::vector<uint64_t> mins)
        : f_(f), seed_(seed), mins_(std::move(mins)) {
        if (mins_.empty()) throw Error("sketch needs k >= 1");
    }

    uint64_t f() const { return f_; }
    uint64_t seed() const { return seed_; }
    uint32_t k() const { return static_cast<uint32_t>(mins_.size()); }
    std::span<const uint64_t> mins() const { return mins_; }

private:
    uint64_t f_;
    uint64_t seed_;
    std::vector<uint64_t> mins_;
};

// Pack k b-bit values LSB-first: value j occupies bits [j*b, (j+1)*b) of the
// bit stream, little-endian within the stream.
std::vector<uint8_t> pack_bbit_values(std::span<const uint32_t> values, uint32_t b);
std::vector<uint32_t> unpack_bbit_values(std::span<const uint8_t> bytes, uint32_t k,
                                         uint32_t b);

// k bit-packed b-bit truncations of minimums plus f.
class BBitSketch {
public:
    BBitSketch(uint64_t f, uint64_t seed, uint32_t k, uint32_t b,
               std::vector<uint8_t> packed);

    uint64_t f() const { return f_; }
    uint64_t seed() const { return seed_; }
    uint32_t k() const { return k_; }
    uint32_t b() const { return b_; }
    std::span<const uint8_t> packed_bits() const { return packed_; }

    uint32_t value(uint32_t j) const;
    std::vector<uint32_t> values() const { return unpack_bbit_values(packed_, k_, b_); }

private:
    uint64_t f_;
    uint64_t seed_;
    uint32_t k_;
    uint32_t b_;
    std::vector<uint8_t> packed_;
};

MinwiseSketch sketch_minwise(const SetRecord& set, const HashFamily& family);

// u = z mod 2^b, 1 <= b <= 32
BBitSketch truncate_to_bbit(const MinwiseSketch& sketch, uint32_t b);

// requires same seed and k
PairCounts3 compare_minwise(const MinwiseSketch& s1, const MinwiseSketch& s2);

// full 2^b x 2^b table; requires same seed, k, b and b <= 8
ContingencyTable compare_bbit(const BBitSketch& s1, const BBitSketch& s2);

// collapsed 3-cell comparison, any b <= 32
PairCounts3 compare_bbit_summary(const BBitSketch& s1, const BBitSketch& s2);

}  // namespace minhash
