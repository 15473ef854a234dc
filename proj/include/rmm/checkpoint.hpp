#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmm/tensor.hpp"

namespace rmm {

struct NamedTensor {
    std::string name;
    Tensor value;
};

// Checkpoint container: magic "RMM1", then little-endian u32 tensor count and
// per tensor u16 name length, UTF-8 name, u8 rank, u64 extents, raw f32
// payload. Writing is byte-deterministic in the item order given.
void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& items);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

// Non-f32 run state rides in f32 tensors as four 16-bit limbs of the 64-bit
// pattern (least significant first); each limb is integral so the round trip
// is exact.
Tensor encode_u64(std::uint64_t v);
std::uint64_t decode_u64(const Tensor& t);
Tensor encode_f64(double v);
double decode_f64(const Tensor& t);
Tensor encode_f64_vec(const std::vector<double>& v);
std::vector<double> decode_f64_vec(const Tensor& t);

}  // namespace rmm
