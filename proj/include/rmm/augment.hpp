#pragma once

#include <vector>

#include "rmm/data.hpp"
#include "rmm/rng.hpp"

namespace rmm {

Image resize_bilinear(const Image& src, int oh, int ow);

// Flip-and-crop policy. Draw order from rng: flip bit, then vertical crop
// offset in [0,8], then horizontal offset in [0,8] over a 4-pixel reflect pad.
Image weak_augment(const Image& img, RandomSource& rng);

// Strong policy transform pool, indexed in this order.
enum class StrongOp {
    kAutoContrast = 0,
    kBrightness,
    kContrast,
    kSharpness,
    kPosterize,
    kSolarize,
    kEqualize,
    kRotate,
    kShearX,
    kShearY,
    kTranslateX,
    kTranslateY,
    kIdentity,
};
constexpr int kStrongOpCount = 13;

struct StrongOpts {
    int num_ops = 2;
    bool cutout = true;
    // Test hook: bypasses the op draws (magnitudes still come from rng).
    const std::vector<StrongOp>* forced_ops = nullptr;
};

// weak_augment, then num_ops pool draws with uniform magnitudes, then a square
// cutout of side min(H,W)/2 filled with 0.5 (center uniform, rect clipped).
Image strong_augment(const Image& img, RandomSource& rng, const StrongOpts& opts = {});

// One Beta(alpha, alpha) draw clamped to [1e-6, 1-1e-6].
double sample_lambda(RandomSource& rng, double alpha);

struct PatchRect {
    int top = 0, left = 0, height = 0, width = 0;
};

struct MixOutcome {
    Image image;
    std::vector<float> label;
    double lambda_eff = 0.0;
    bool has_rect = false;
    PatchRect rect;
};

// Paste-resized-source mixing. The first operand is the base; the realized
// area fraction weights the second: label = (1-lambda_eff)*y_target +
// lambda_eff*y_source. Draw order: lambda, then top, then left.
MixOutcome resizemix(const Image& target, const std::vector<float>& y_target, const Image& source,
                     const std::vector<float>& y_source, double alpha, RandomSource& rng);

// Pixelwise blend: lambda*a + (1-lambda)*b for image and label, no rect.
MixOutcome mixup(const Image& a, const std::vector<float>& y_a, const Image& b,
                 const std::vector<float>& y_b, double alpha, RandomSource& rng);

}  // namespace rmm
