#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmm/rng.hpp"
#include "rmm/tensor.hpp"

namespace rmm {

// CHW float image, every pixel in [0,1].
struct Image {
    int h = 0, w = 0, c = 0;
    std::vector<float> pix;

    float& at(int ch, int y, int x) {
        return pix[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    float at(int ch, int y, int x) const {
        return pix[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
};

Image make_image(int h, int w, int c);

struct Dataset {
    std::string name;
    int num_classes = 0;
    std::vector<Image> images;
    std::vector<int> labels;

    std::size_t size() const { return images.size(); }
};

// IDX ingestion (big-endian headers, u8 pixels scaled by 1/255). The single
// path form derives the label file by the standard naming convention
// (images -> labels, idx3 -> idx1).
Dataset load_idx(const std::string& images_path, const std::string& labels_path);
Dataset load_idx(const std::string& images_path);

// CIFAR binary: records of 1 label byte + 3072 pixel bytes (R, G, B planes).
Dataset load_cifar_binary(const std::string& path);

// Procedural 32x32-style shapes: disk, ring, cross, bars at four angles,
// triangle, checker, dot grid. Position/scale/rotation jitter plus additive
// pixel noise, everything keyed by (seed, class, index).
Dataset make_synthetic_glyphs(std::uint64_t seed, int n_classes, int n_per_class, int size,
                              float noise_sigma = 0.1f);

struct SplitSpec {
    int labels_per_class = 0;
    std::uint64_t seed = 0;
    bool include_labeled_in_unlabeled = true;
};

struct Split {
    Dataset labeled;
    Dataset unlabeled;  // labels retained for diagnostics only, never for training
};

Split split_labeled(const Dataset& ds, const SplitSpec& spec);

// Epochless index stream: a seeded reshuffle per epoch, batches crossing epoch
// boundaries. seek() repositions to an absolute draw count, which makes
// resumed runs replay the identical sequence.
class IndexStream {
  public:
    IndexStream(int pool_size, int batch, std::uint64_t seed, StreamPurpose purpose);

    std::vector<int> next();
    void seek(std::uint64_t draws);
    std::uint64_t draws() const { return draws_; }

  private:
    void reshuffle(std::uint64_t epoch);

    int pool_, batch_;
    std::uint64_t seed_;
    StreamPurpose purpose_;
    std::uint64_t draws_ = 0;
    std::vector<int> order_;
    std::uint64_t epoch_ = 0;
    int pos_ = 0;
};

// The B / mu*B pair stream feeding the training loop.
class PairStream {
  public:
    PairStream(int labeled_size, int unlabeled_size, int batch, int mu, std::uint64_t seed);

    struct Pair {
        std::vector<int> labeled;
        std::vector<int> unlabeled;
    };
    Pair next();
    void seek(std::uint64_t iterations);

  private:
    IndexStream labeled_, unlabeled_;
    int batch_, mu_;
};

// Batch assembly: rows of [N, C, H, W] from dataset images.
Tensor images_to_batch(const std::vector<Image>& images);
Tensor gather_batch(const Dataset& ds, const std::vector<int>& indices);
Tensor one_hot(const std::vector<int>& labels, int num_classes);

// Per-channel mean/std over a whole dataset (population std, floored away
// from zero), for model input standardization.
void channel_stats(const Dataset& ds, std::vector<float>& mean, std::vector<float>& stdev);

void write_ppm(const std::string& path, const Image& img);

}  // namespace rmm
