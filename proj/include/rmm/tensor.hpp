#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmm {

// Dense row-major float tensor. Rank 0 is a scalar with one element.
struct Tensor {
    std::vector<int> shape;
    std::vector<float> data;

    Tensor() = default;

    explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel_of(shape), 0.0f) {}

    Tensor(std::vector<int> s, std::vector<float> d) : shape(std::move(s)), data(std::move(d)) {
        if (static_cast<std::int64_t>(data.size()) != numel_of(shape))
            throw std::invalid_argument("tensor: data length does not match shape");
    }

    static Tensor scalar(float v) {
        Tensor t;
        t.data.assign(1, v);
        return t;
    }

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

    static Tensor full(std::vector<int> s, float v) {
        Tensor t(std::move(s));
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }

    static std::int64_t numel_of(const std::vector<int>& s) {
        std::int64_t n = 1;
        for (int e : s) {
            if (e < 0) throw std::invalid_argument("tensor: negative extent");
            n *= e;
        }
        return n;
    }

    std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }

    int extent(int axis) const { return shape.at(static_cast<std::size_t>(axis)); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    float& at(std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
    float at(std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }

    // NCHW convenience accessors.
    float& at4(int n, int c, int h, int w) {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }
    float at4(int n, int c, int h, int w) const {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }

    float& at2(int r, int c) { return data[static_cast<std::size_t>(r) * shape[1] + c]; }
    float at2(int r, int c) const { return data[static_cast<std::size_t>(r) * shape[1] + c]; }

    bool all_finite() const {
        for (float v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline std::string shape_str(const std::vector<int>& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + shape_str(a.shape) +
                                    " vs " + shape_str(b.shape));
}

}  // namespace rmm
