#include "rmm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rmm {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO writes raw little-endian payloads");

namespace {

constexpr char kMagic[4] = {'R', 'M', 'M', '1'};

void put_bytes(std::ofstream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get_bytes(std::ifstream& in, void* p, std::size_t n, const char* what) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw std::runtime_error(std::string("checkpoint: truncated while reading ") + what);
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& items) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    put_bytes(out, kMagic, 4);
    const std::uint32_t count = static_cast<std::uint32_t>(items.size());
    put_bytes(out, &count, 4);
    for (const NamedTensor& it : items) {
        if (it.name.size() > 0xFFFF)
            throw std::invalid_argument("checkpoint: tensor name too long: " + it.name);
        const std::uint16_t len = static_cast<std::uint16_t>(it.name.size());
        put_bytes(out, &len, 2);
        put_bytes(out, it.name.data(), it.name.size());
        if (it.value.rank() > 0xFF)
            throw std::invalid_argument("checkpoint: rank too large for " + it.name);
        const std::uint8_t rank = static_cast<std::uint8_t>(it.value.rank());
        put_bytes(out, &rank, 1);
        for (int e : it.value.shape) {
            const std::uint64_t ext = static_cast<std::uint64_t>(e);
            put_bytes(out, &ext, 8);
        }
        put_bytes(out, it.value.data.data(), it.value.data.size() * sizeof(float));
    }
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::vector<NamedTensor> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[4];
    get_bytes(in, magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    std::uint32_t count = 0;
    get_bytes(in, &count, 4, "tensor count");
    std::vector<NamedTensor> items;
    items.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint16_t len = 0;
        get_bytes(in, &len, 2, "name length");
        std::string name(len, '\0');
        if (len) get_bytes(in, name.data(), len, "name");
        std::uint8_t rank = 0;
        get_bytes(in, &rank, 1, "rank");
        std::vector<int> shape(rank);
        for (int r = 0; r < rank; ++r) {
            std::uint64_t ext = 0;
            get_bytes(in, &ext, 8, "extent");
            if (ext > 0x7FFFFFFFULL)
                throw std::runtime_error("checkpoint: extent overflow in " + name);
            shape[static_cast<std::size_t>(r)] = static_cast<int>(ext);
        }
        Tensor t(shape);
        get_bytes(in, t.data.data(), t.data.size() * sizeof(float), "payload");
        items.push_back({std::move(name), std::move(t)});
    }
    return items;
}

Tensor encode_u64(std::uint64_t v) {
    Tensor t({4});
    for (int i = 0; i < 4; ++i)
        t.data[static_cast<std::size_t>(i)] = static_cast<float>((v >> (16 * i)) & 0xFFFFu);
    return t;
}

std::uint64_t decode_u64(const Tensor& t) {
    if (t.numel() != 4) throw std::invalid_argument("decode_u64: want 4 limbs");
    std::uint64_t v = 0;
    for (int i = 0; i < 4; ++i) {
        const float f = t.data[static_cast<std::size_t>(i)];
        if (f < 0.0f || f > 65535.0f || f != static_cast<float>(static_cast<std::uint32_t>(f)))
            throw std::invalid_argument("decode_u64: limb not integral");
        v |= static_cast<std::uint64_t>(static_cast<std::uint32_t>(f)) << (16 * i);
    }
    return v;
}

Tensor encode_f64(double v) { return encode_u64(std::bit_cast<std::uint64_t>(v)); }

double decode_f64(const Tensor& t) { return std::bit_cast<double>(decode_u64(t)); }

Tensor encode_f64_vec(const std::vector<double>& v) {
    Tensor t({static_cast<int>(v.size()), 4});
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(v[i]);
        for (int j = 0; j < 4; ++j)
            t.data[i * 4 + static_cast<std::size_t>(j)] =
                static_cast<float>((bits >> (16 * j)) & 0xFFFFu);
    }
    return t;
}

std::vector<double> decode_f64_vec(const Tensor& t) {
    if (t.rank() != 2 || t.shape[1] != 4)
        throw std::invalid_argument("decode_f64_vec: want [n,4] limbs");
    std::vector<double> out(static_cast<std::size_t>(t.shape[0]));
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int j = 0; j < 4; ++j) {
            const float f = t.data[i * 4 + static_cast<std::size_t>(j)];
            if (f < 0.0f || f > 65535.0f)
                throw std::invalid_argument("decode_f64_vec: limb out of range");
            bits |= static_cast<std::uint64_t>(static_cast<std::uint32_t>(f)) << (16 * j);
        }
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

}  // namespace rmm
