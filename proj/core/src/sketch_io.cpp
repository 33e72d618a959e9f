#include "minhash/sketch_io.hpp"

#include <cstring>
#include <fstream>

namespace minhash {

namespace {

constexpr char kMagic[4] = {'M', 'H', 'S', '1'};
constexpr uint8_t kVersion = 1;

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    uint8_t u8() { return take(1)[0]; }

    uint32_t u32() {
        auto p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
        return v;
    }

    uint64_t u64() {
        auto p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
        return v;
    }

    std::span<const uint8_t> take(size_t n) {
        if (pos_ + n > bytes_.size()) throw Error("sketch file truncated");
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

std::vector<uint8_t> header(SketchKind kind, uint8_t b, uint32_t k, uint64_t seed,
                            uint64_t f) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(uint8_t(kind));
    out.push_back(b);
    out.push_back(0);  // reserved
    put_u32(out, k);
    put_u64(out, seed);
    put_u64(out, f);
    return out;
}

}  // namespace

std::vector<uint8_t> serialize_sketch(const MinwiseSketch& sketch) {
    auto out = header(SketchKind::full64, 0, sketch.k(), sketch.seed(), sketch.f());
    for (uint64_t v : sketch.mins()) put_u64(out, v);
    return out;
}

std::vector<uint8_t> serialize_sketch(const BBitSketch& sketch) {
    auto out = header(SketchKind::bbit, uint8_t(sketch.b()), sketch.k(), sketch.seed(),
                      sketch.f());
    out.insert(out.end(), sketch.packed_bits().begin(), sketch.packed_bits().end());
    return out;
}

std::vector<uint8_t> serialize_sketch(const AnySketch& sketch) {
    return std::visit([](const auto& s) { return serialize_sketch(s); }, sketch);
}

AnySketch deserialize_sketch(std::span<const uint8_t> bytes) {
    Reader r(bytes);
    auto magic = r.take(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw Error("bad sketch magic");
    if (r.u8() != kVersion) throw Error("unsupported sketch version");
    const uint8_t kind = r.u8();
    const uint8_t b = r.u8();
    r.u8();  // reserved
    const uint32_t k = r.u32();
    const uint64_t seed = r.u64();
    const uint64_t f = r.u64();

    if (kind == uint8_t(SketchKind::full64)) {
        if (b != 0) throw Error("full sketch with nonzero b");
        std::vector<uint64_t> mins(k);
        for (uint32_t j = 0; j < k; ++j) mins[j] = r.u64();
        if (!r.done()) throw Error("trailing bytes in sketch file");
        return MinwiseSketch(f, seed, std::move(mins));
    }
    if (kind == uint8_t(SketchKind::bbit)) {
        if (b < 1 || b > 32) throw Error("bad sketch bit width");
        const size_t nbytes = (size_t(k) * b + 7) / 8;
        auto payload = r.take(nbytes);
        if (!r.done()) throw Error("trailing bytes in sketch file");
        return BBitSketch(f, seed, k, b,
                          std::vector<uint8_t>(payload.begin(), payload.end()));
    }
    throw Error("unknown sketch kind");
}

void save_sketch(const AnySketch& sketch, const std::string& path) {
    auto bytes = serialize_sketch(sketch);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + path + "'");
}

AnySketch load_sketch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return deserialize_sketch(bytes);
}

}  // namespace minhash
