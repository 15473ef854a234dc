#include "rmm/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rmm {
namespace {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("data: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

std::uint32_t be32(const unsigned char* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
}

}  // namespace

Image make_image(int h, int w, int c) {
    if (h < 1 || w < 1 || (c != 1 && c != 3))
        throw std::invalid_argument("image: bad dimensions");
    Image img;
    img.h = h;
    img.w = w;
    img.c = c;
    img.pix.assign(static_cast<std::size_t>(h) * w * c, 0.0f);
    return img;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    const auto ib = read_file(images_path);
    if (ib.size() < 16 || be32(ib.data()) != 0x00000803u)
        throw std::runtime_error("idx: bad image magic in " + images_path);
    const std::uint32_t n = be32(ib.data() + 4);
    const std::uint32_t rows = be32(ib.data() + 8);
    const std::uint32_t cols = be32(ib.data() + 12);
    const std::size_t want = 16 + static_cast<std::size_t>(n) * rows * cols;
    if (ib.size() != want)
        throw std::runtime_error("idx: truncated image payload in " + images_path);

    const auto lb = read_file(labels_path);
    if (lb.size() < 8 || be32(lb.data()) != 0x00000801u)
        throw std::runtime_error("idx: bad label magic in " + labels_path);
    const std::uint32_t ln = be32(lb.data() + 4);
    if (lb.size() != 8 + static_cast<std::size_t>(ln))
        throw std::runtime_error("idx: truncated label payload in " + labels_path);
    if (ln != n) throw std::runtime_error("idx: image/label count mismatch");

    Dataset ds;
    ds.name = "idx";
    ds.images.reserve(n);
    ds.labels.reserve(n);
    int max_label = 0;
    const unsigned char* px = ib.data() + 16;
    for (std::uint32_t i = 0; i < n; ++i) {
        Image img = make_image(static_cast<int>(rows), static_cast<int>(cols), 1);
        for (std::size_t j = 0; j < static_cast<std::size_t>(rows) * cols; ++j)
            img.pix[j] = static_cast<float>(px[j]) / 255.0f;
        px += static_cast<std::size_t>(rows) * cols;
        ds.images.push_back(std::move(img));
        const int label = lb[8 + i];
        ds.labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    ds.num_classes = max_label + 1;
    return ds;
}

Dataset load_idx(const std::string& images_path) {
    std::string labels_path = images_path;
    replace_all(labels_path, "images", "labels");
    replace_all(labels_path, "idx3", "idx1");
    if (labels_path == images_path)
        throw std::runtime_error("idx: cannot derive label path from " + images_path);
    return load_idx(images_path, labels_path);
}

Dataset load_cifar_binary(const std::string& path) {
    const auto bytes = read_file(path);
    constexpr std::size_t kRecord = 1 + 3 * 32 * 32;
    if (bytes.empty() || bytes.size() % kRecord != 0)
        throw std::runtime_error("cifar: file length not a multiple of 3073 in " + path);
    const std::size_t n = bytes.size() / kRecord;
    Dataset ds;
    ds.name = "cifar";
    ds.num_classes = 10;
    ds.images.reserve(n);
    ds.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* rec = bytes.data() + i * kRecord;
        const int label = rec[0];
        if (label > 9) throw std::runtime_error("cifar: label out of range in " + path);
        Image img = make_image(32, 32, 3);
        for (std::size_t j = 0; j < 3 * 32 * 32; ++j)
            img.pix[j] = static_cast<float>(rec[1 + j]) / 255.0f;
        ds.labels.push_back(label);
        ds.images.push_back(std::move(img));
    }
    return ds;
}

namespace {

struct GlyphPose {
    float cx, cy;     // center in [0,1] image coords
    float scale;      // glyph radius as a fraction of size/2
    float cosr, sinr; // rotation
};

// Hard membership test in glyph-local coordinates (u,v) roughly in [-1,1].
bool glyph_inside(int cls, float u, float v) {
    const float r = std::sqrt(u * u + v * v);
    switch (cls) {
        case 0:  // disk
            return r <= 0.62f;
        case 1:  // ring
            return r >= 0.38f && r <= 0.66f;
        case 2:  // cross
            return (std::fabs(u) <= 0.18f && std::fabs(v) <= 0.68f) ||
                   (std::fabs(v) <= 0.18f && std::fabs(u) <= 0.68f);
        case 3:    // bars at 0, 45, 90, 135 degrees
        case 4:
        case 5:
        case 6: {
            const float ang = 3.14159265358979323846f * 0.25f * (cls - 3);
            const float ca = std::cos(ang), sa = std::sin(ang);
            const float bu = ca * u + sa * v;
            const float bv = -sa * u + ca * v;
            return std::fabs(bv) <= 0.16f && std::fabs(bu) <= 0.72f;
        }
        case 7: {  // triangle, apex up
            if (v < -0.55f || v > 0.65f) return false;
            const float half = 0.55f * (0.65f - v) / 1.2f;
            return std::fabs(u) <= half;
        }
        case 8: {  // 4x4 checker
            if (std::fabs(u) > 0.7f || std::fabs(v) > 0.7f) return false;
            const int iu = static_cast<int>(std::floor((u + 0.7f) / 0.35f));
            const int iv = static_cast<int>(std::floor((v + 0.7f) / 0.35f));
            return ((iu + iv) & 1) == 0;
        }
        case 9: {  // 3x3 dot grid
            for (int gy = -1; gy <= 1; ++gy)
                for (int gx = -1; gx <= 1; ++gx) {
                    const float du = u - 0.48f * gx;
                    const float dv = v - 0.48f * gy;
                    if (du * du + dv * dv <= 0.13f * 0.13f) return true;
                }
            return false;
        }
        default:
            return false;
    }
}

Image render_glyph(int cls, int size, const GlyphPose& pose, float noise_sigma,
                   RandomSource& noise_rng) {
    Image img = make_image(size, size, 1);
    const float half = 0.5f * static_cast<float>(size);
    const float inv_radius = 1.0f / (pose.scale * half);
    // 2x2 supersampling antialiases the hard membership tests.
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            int hits = 0;
            for (int sy = 0; sy < 2; ++sy) {
                for (int sx = 0; sx < 2; ++sx) {
                    const float px = (x + 0.25f + 0.5f * sx) / size - pose.cx;
                    const float py = (y + 0.25f + 0.5f * sy) / size - pose.cy;
                    const float u = (pose.cosr * px + pose.sinr * py) * size * inv_radius;
                    const float v = (-pose.sinr * px + pose.cosr * py) * size * inv_radius;
                    if (glyph_inside(cls, u, v)) ++hits;
                }
            }
            float val = 0.25f * hits;
            if (noise_sigma > 0.0f)
                val += noise_sigma * static_cast<float>(normal_unit(noise_rng));
            img.at(0, y, x) = std::clamp(val, 0.0f, 1.0f);
        }
    }
    return img;
}

}  // namespace

Dataset make_synthetic_glyphs(std::uint64_t seed, int n_classes, int n_per_class, int size,
                              float noise_sigma) {
    if (n_classes < 2 || n_classes > 10)
        throw std::invalid_argument("glyphs: n_classes must be in [2,10]");
    if (size < 16) throw std::invalid_argument("glyphs: size must be >= 16");
    if (n_per_class < 1) throw std::invalid_argument("glyphs: n_per_class must be >= 1");
    Dataset ds;
    ds.name = "glyphs";
    ds.num_classes = n_classes;
    ds.images.reserve(static_cast<std::size_t>(n_classes) * n_per_class);
    ds.labels.reserve(static_cast<std::size_t>(n_classes) * n_per_class);
    for (int cls = 0; cls < n_classes; ++cls) {
        for (int i = 0; i < n_per_class; ++i) {
            StreamRng rng(seed, StreamPurpose::kGlyph, static_cast<std::uint64_t>(cls),
                          static_cast<std::uint64_t>(i));
            GlyphPose pose;
            pose.cx = 0.5f + 0.12f * (static_cast<float>(uniform_unit(rng)) - 0.5f) * 2.0f;
            pose.cy = 0.5f + 0.12f * (static_cast<float>(uniform_unit(rng)) - 0.5f) * 2.0f;
            pose.scale = 0.62f + 0.28f * static_cast<float>(uniform_unit(rng));
            const float rot =
                0.17f * (static_cast<float>(uniform_unit(rng)) - 0.5f) * 2.0f;  // ~±10 deg
            pose.cosr = std::cos(rot);
            pose.sinr = std::sin(rot);
            ds.images.push_back(render_glyph(cls, size, pose, noise_sigma, rng));
            ds.labels.push_back(cls);
        }
    }
    return ds;
}

Split split_labeled(const Dataset& ds, const SplitSpec& spec) {
    const int c = ds.num_classes;
    if (spec.labels_per_class < 1)
        throw std::invalid_argument("split: labels_per_class must be >= 1");
    if (static_cast<std::size_t>(spec.labels_per_class) * c > ds.size())
        throw std::invalid_argument("split: labels_per_class too large for dataset");

    std::vector<int> order(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    StreamRng rng(spec.seed, StreamPurpose::kSplit, 0, 0);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = uniform_below(rng, i);
        std::swap(order[i - 1], order[j]);
    }

    std::vector<int> taken(static_cast<std::size_t>(c), 0);
    std::vector<char> is_labeled(ds.size(), 0);
    int remaining = spec.labels_per_class * c;
    for (int idx : order) {
        if (remaining == 0) break;
        const int label = ds.labels[static_cast<std::size_t>(idx)];
        if (taken[static_cast<std::size_t>(label)] < spec.labels_per_class) {
            ++taken[static_cast<std::size_t>(label)];
            is_labeled[static_cast<std::size_t>(idx)] = 1;
            --remaining;
        }
    }
    for (int cls = 0; cls < c; ++cls)
        if (taken[static_cast<std::size_t>(cls)] < spec.labels_per_class)
            throw std::invalid_argument("split: class " + std::to_string(cls) +
                                        " has too few examples");

    Split out;
    out.labeled.name = ds.name + "/labeled";
    out.labeled.num_classes = c;
    out.unlabeled.name = ds.name + "/unlabeled";
    out.unlabeled.num_classes = c;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (is_labeled[i]) {
            out.labeled.images.push_back(ds.images[i]);
            out.labeled.labels.push_back(ds.labels[i]);
        }
        if (!is_labeled[i] || spec.include_labeled_in_unlabeled) {
            out.unlabeled.images.push_back(ds.images[i]);
            out.unlabeled.labels.push_back(ds.labels[i]);
        }
    }
    return out;
}

IndexStream::IndexStream(int pool_size, int batch, std::uint64_t seed, StreamPurpose purpose)
    : pool_(pool_size), batch_(batch), seed_(seed), purpose_(purpose) {
    if (pool_size < 1) throw std::invalid_argument("stream: empty pool");
    if (batch < 1) throw std::invalid_argument("stream: batch must be >= 1");
    reshuffle(0);
}

void IndexStream::reshuffle(std::uint64_t epoch) {
    epoch_ = epoch;
    pos_ = 0;
    order_.resize(static_cast<std::size_t>(pool_));
    for (int i = 0; i < pool_; ++i) order_[static_cast<std::size_t>(i)] = i;
    StreamRng rng(seed_, purpose_, epoch, 0);
    for (std::size_t i = order_.size(); i > 1; --i) {
        const std::size_t j = uniform_below(rng, i);
        std::swap(order_[i - 1], order_[j]);
    }
}

std::vector<int> IndexStream::next() {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(batch_));
    for (int i = 0; i < batch_; ++i) {
        if (pos_ == pool_) reshuffle(epoch_ + 1);
        out.push_back(order_[static_cast<std::size_t>(pos_++)]);
    }
    draws_ += static_cast<std::uint64_t>(batch_);
    return out;
}

void IndexStream::seek(std::uint64_t draws) {
    draws_ = draws;
    const std::uint64_t n = static_cast<std::uint64_t>(pool_);
    reshuffle(draws / n);
    pos_ = static_cast<int>(draws % n);
}

PairStream::PairStream(int labeled_size, int unlabeled_size, int batch, int mu,
                       std::uint64_t seed)
    : labeled_(labeled_size, batch, seed, StreamPurpose::kShuffleLabeled),
      unlabeled_(unlabeled_size, batch * mu, seed, StreamPurpose::kShuffleUnlabeled),
      batch_(batch),
      mu_(mu) {
    if (mu < 1) throw std::invalid_argument("stream: mu must be >= 1");
}

PairStream::Pair PairStream::next() { return {labeled_.next(), unlabeled_.next()}; }

void PairStream::seek(std::uint64_t iterations) {
    // Draw counts per iteration are fixed, so absolute position follows.
    labeled_.seek(iterations * static_cast<std::uint64_t>(batch_));
    unlabeled_.seek(iterations * static_cast<std::uint64_t>(batch_) * mu_);
}

Tensor images_to_batch(const std::vector<Image>& images) {
    if (images.empty()) throw std::invalid_argument("batch: no images");
    const int h = images[0].h, w = images[0].w, c = images[0].c;
    Tensor out({static_cast<int>(images.size()), c, h, w});
    const std::size_t stride = static_cast<std::size_t>(c) * h * w;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const Image& img = images[i];
        if (img.h != h || img.w != w || img.c != c)
            throw std::invalid_argument("batch: inconsistent image shapes");
        std::memcpy(out.data.data() + i * stride, img.pix.data(), stride * sizeof(float));
    }
    return out;
}

Tensor gather_batch(const Dataset& ds, const std::vector<int>& indices) {
    std::vector<Image> picked;
    picked.reserve(indices.size());
    for (int idx : indices) picked.push_back(ds.images.at(static_cast<std::size_t>(idx)));
    return images_to_batch(picked);
}

Tensor one_hot(const std::vector<int>& labels, int num_classes) {
    Tensor out({static_cast<int>(labels.size()), num_classes});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l < 0 || l >= num_classes) throw std::invalid_argument("one_hot: label out of range");
        out.at2(static_cast<int>(i), l) = 1.0f;
    }
    return out;
}

void channel_stats(const Dataset& ds, std::vector<float>& mean, std::vector<float>& stdev) {
    if (ds.images.empty()) throw std::invalid_argument("stats: empty dataset");
    const int c = ds.images[0].c;
    const std::size_t plane = static_cast<std::size_t>(ds.images[0].h) * ds.images[0].w;
    std::vector<double> sum(static_cast<std::size_t>(c), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(c), 0.0);
    for (const Image& img : ds.images) {
        for (int ch = 0; ch < c; ++ch) {
            const float* p = img.pix.data() + static_cast<std::size_t>(ch) * plane;
            for (std::size_t i = 0; i < plane; ++i) {
                sum[static_cast<std::size_t>(ch)] += p[i];
                sumsq[static_cast<std::size_t>(ch)] += static_cast<double>(p[i]) * p[i];
            }
        }
    }
    const double n = static_cast<double>(ds.images.size()) * static_cast<double>(plane);
    mean.resize(static_cast<std::size_t>(c));
    stdev.resize(static_cast<std::size_t>(c));
    for (int ch = 0; ch < c; ++ch) {
        const double m = sum[static_cast<std::size_t>(ch)] / n;
        const double var = std::max(0.0, sumsq[static_cast<std::size_t>(ch)] / n - m * m);
        mean[static_cast<std::size_t>(ch)] = static_cast<float>(m);
        stdev[static_cast<std::size_t>(ch)] = std::max(1e-3f, static_cast<float>(std::sqrt(var)));
    }
}

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ppm: cannot open " + path);
    out << (img.c == 1 ? "P5" : "P6") << "\n" << img.w << " " << img.h << "\n255\n";
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            for (int ch = 0; ch < img.c; ++ch) {
                const float v = std::clamp(img.at(ch, y, x), 0.0f, 1.0f);
                out.put(static_cast<char>(static_cast<int>(v * 255.0f + 0.5f)));
            }
}

}  // namespace rmm
