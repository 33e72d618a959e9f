#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "minhash/hashing.hpp"

namespace minhash {

// Binary sketch file, little-endian:
//   magic "MHS1" (4 bytes)
//   version  u8 = 1
//   kind     u8   0 = full 64-bit values, 1 = b-bit packed
//   b        u8   0 for kind 0
//   reserved u8 = 0
//   k        u32
//   seed     u64
//   f        u64
//   payload: kind 0 -> k u64 values
//            kind 1 -> ceil(k*b/8) bytes, values packed LSB-first in index
//                      order (value j occupies bits [j*b, (j+1)*b))
enum class SketchKind : uint8_t { full64 = 0, bbit = 1 };

using AnySketch = std::variant<MinwiseSketch, BBitSketch>;

std::vector<uint8_t> serialize_sketch(const MinwiseSketch& sketch);
std::vector<uint8_t> serialize_sketch(const BBitSketch& sketch);
std::vector<uint8_t> serialize_sketch(const AnySketch& sketch);

AnySketch deserialize_sketch(std::span<const uint8_t> bytes);

void save_sketch(const AnySketch& sketch, const std::string& path);
AnySketch load_sketch(const std::string& path);

inline SketchKind sketch_kind(const AnySketch& s) {
    return std::holds_alternative<MinwiseSketch>(s) ? SketchKind::full64
                                                    : SketchKind::bbit;
}

}  // namespace minhash
