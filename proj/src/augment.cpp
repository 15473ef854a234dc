#include "rmm/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rmm {
namespace {

constexpr float kPi = 3.14159265358979323846f;

float sample_range(RandomSource& rng, float lo, float hi) {
    return lo + (hi - lo) * static_cast<float>(uniform_unit(rng));
}

Image flip_horizontal(const Image& img) {
    Image out = img;
    for (int c = 0; c < img.c; ++c)
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x) out.at(c, y, x) = img.at(c, y, img.w - 1 - x);
    return out;
}

// Reflect index into [0, n) without repeating the edge sample.
int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i = ((i % period) + period) % period;
    return i < n ? i : period - i;
}

Image pad_reflect_crop(const Image& img, int pad, int off_y, int off_x) {
    Image out = make_image(img.h, img.w, img.c);
    for (int c = 0; c < img.c; ++c)
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x) {
                const int sy = reflect(y + off_y - pad, img.h);
                const int sx = reflect(x + off_x - pad, img.w);
                out.at(c, y, x) = img.at(c, sy, sx);
            }
    return out;
}

void clip01(Image& img) {
    for (float& v : img.pix) v = std::clamp(v, 0.0f, 1.0f);
}

void autocontrast(Image& img) {
    const std::size_t plane = static_cast<std::size_t>(img.h) * img.w;
    for (int c = 0; c < img.c; ++c) {
        float* p = img.pix.data() + static_cast<std::size_t>(c) * plane;
        float lo = p[0], hi = p[0];
        for (std::size_t i = 1; i < plane; ++i) {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        if (hi - lo < 1e-6f) continue;
        const float scale = 1.0f / (hi - lo);
        for (std::size_t i = 0; i < plane; ++i) p[i] = (p[i] - lo) * scale;
    }
}

void brightness(Image& img, float v) {
    for (float& p : img.pix) p *= v;
    clip01(img);
}

void contrast(Image& img, float v) {
    double sum = 0.0;
    for (float p : img.pix) sum += p;
    const float mean = static_cast<float>(sum / static_cast<double>(img.pix.size()));
    for (float& p : img.pix) p = mean + v * (p - mean);
    clip01(img);
}

void sharpness(Image& img, float v) {
    // Blend against a 3x3 smoothing (center weight 5) with reflect borders.
    Image smooth = img;
    static const float k[3][3] = {{1, 1, 1}, {1, 5, 1}, {1, 1, 1}};
    for (int c = 0; c < img.c; ++c)
        for (int y = 0; y < img.h; ++y)
            for (int x = 0; x < img.w; ++x) {
                float acc = 0.0f;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx)
                        acc += k[dy + 1][dx + 1] *
                               img.at(c, reflect(y + dy, img.h), reflect(x + dx, img.w));
                smooth.at(c, y, x) = acc / 13.0f;
            }
    for (std::size_t i = 0; i < img.pix.size(); ++i)
        img.pix[i] = smooth.pix[i] + v * (img.pix[i] - smooth.pix[i]);
    clip01(img);
}

void posterize(Image& img, int bits) {
    const int mask = ~((1 << (8 - bits)) - 1) & 0xFF;
    for (float& p : img.pix) {
        const int q = static_cast<int>(std::clamp(p, 0.0f, 1.0f) * 255.0f + 0.5f) & mask;
        p = static_cast<float>(q) / 255.0f;
    }
}

void solarize(Image& img, float threshold) {
    for (float& p : img.pix)
        if (p >= threshold) p = 1.0f - p;
}

void equalize(Image& img) {
    const std::size_t plane = static_cast<std::size_t>(img.h) * img.w;
    for (int c = 0; c < img.c; ++c) {
        float* p = img.pix.data() + static_cast<std::size_t>(c) * plane;
        int hist[256] = {};
        for (std::size_t i = 0; i < plane; ++i)
            ++hist[static_cast<int>(std::clamp(p[i], 0.0f, 1.0f) * 255.0f + 0.5f)];
        const long long step = (static_cast<long long>(plane) - hist[255]) / 255;
        if (step == 0) continue;
        int lut[256];
        long long cum = step / 2;
        for (int i = 0; i < 256; ++i) {
            lut[i] = static_cast<int>(std::min<long long>(255, cum / step));
            cum += hist[i];
        }
        for (std::size_t i = 0; i < plane; ++i)
            p[i] = static_cast<float>(
                       lut[static_cast<int>(std::clamp(p[i], 0.0f, 1.0f) * 255.0f + 0.5f)]) /
                   255.0f;
    }
}

// Inverse-maps output pixels through the affine [a b; c d] about the image
// center plus translation, bilinear-sampling with 0.5 fill outside.
Image affine_sample(const Image& img, float a, float b, float c, float d, float tx, float ty) {
    Image out = make_image(img.h, img.w, img.c);
    const float cy = 0.5f * static_cast<float>(img.h - 1);
    const float cx = 0.5f * static_cast<float>(img.w - 1);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x) {
            const float rx = static_cast<float>(x) - cx - tx;
            const float ry = static_cast<float>(y) - cy - ty;
            const float sx = a * rx + b * ry + cx;
            const float sy = c * rx + d * ry + cy;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const float fx = sx - static_cast<float>(x0);
            const float fy = sy - static_cast<float>(y0);
            for (int ch = 0; ch < img.c; ++ch) {
                float acc = 0.0f;
                for (int dy = 0; dy <= 1; ++dy)
                    for (int dx = 0; dx <= 1; ++dx) {
                        const int xx = x0 + dx;
                        const int yy = y0 + dy;
                        const float wgt = (dx ? fx : 1.0f - fx) * (dy ? fy : 1.0f - fy);
                        const float v = (xx >= 0 && xx < img.w && yy >= 0 && yy < img.h)
                                            ? img.at(ch, yy, xx)
                                            : 0.5f;
                        acc += wgt * v;
                    }
                out.at(ch, y, x) = acc;
            }
        }
    return out;
}

void apply_strong_op(Image& img, StrongOp op, RandomSource& rng) {
    switch (op) {
        case StrongOp::kAutoContrast:
            autocontrast(img);
            break;
        case StrongOp::kBrightness:
            brightness(img, sample_range(rng, 0.05f, 1.95f));
            break;
        case StrongOp::kContrast:
            contrast(img, sample_range(rng, 0.05f, 1.95f));
            break;
        case StrongOp::kSharpness:
            sharpness(img, sample_range(rng, 0.05f, 1.95f));
            break;
        case StrongOp::kPosterize:
            posterize(img, 4 + static_cast<int>(uniform_below(rng, 5)));
            break;
        case StrongOp::kSolarize:
            solarize(img, sample_range(rng, 0.0f, 1.0f));
            break;
        case StrongOp::kEqualize:
            equalize(img);
            break;
        case StrongOp::kRotate: {
            const float deg = sample_range(rng, -30.0f, 30.0f);
            const float rad = deg * kPi / 180.0f;
            // Inverse rotation.
            img = affine_sample(img, std::cos(rad), std::sin(rad), -std::sin(rad), std::cos(rad),
                                0.0f, 0.0f);
            break;
        }
        case StrongOp::kShearX: {
            const float s = sample_range(rng, -0.3f, 0.3f);
            img = affine_sample(img, 1.0f, -s, 0.0f, 1.0f, 0.0f, 0.0f);
            break;
        }
        case StrongOp::kShearY: {
            const float s = sample_range(rng, -0.3f, 0.3f);
            img = affine_sample(img, 1.0f, 0.0f, -s, 1.0f, 0.0f, 0.0f);
            break;
        }
        case StrongOp::kTranslateX: {
            const float t = sample_range(rng, -0.3f, 0.3f) * static_cast<float>(img.w);
            img = affine_sample(img, 1.0f, 0.0f, 0.0f, 1.0f, t, 0.0f);
            break;
        }
        case StrongOp::kTranslateY: {
            const float t = sample_range(rng, -0.3f, 0.3f) * static_cast<float>(img.h);
            img = affine_sample(img, 1.0f, 0.0f, 0.0f, 1.0f, 0.0f, t);
            break;
        }
        case StrongOp::kIdentity:
            break;
    }
}

}  // namespace

Image resize_bilinear(const Image& src, int oh, int ow) {
    if (oh < 1 || ow < 1) throw std::invalid_argument("resize: output dims must be >= 1");
    Image out = make_image(oh, ow, src.c);
    const float sy = static_cast<float>(src.h) / static_cast<float>(oh);
    const float sx = static_cast<float>(src.w) / static_cast<float>(ow);
    for (int y = 0; y < oh; ++y) {
        const float fy = std::max(0.0f, (static_cast<float>(y) + 0.5f) * sy - 0.5f);
        const int y0 = std::min(static_cast<int>(fy), src.h - 1);
        const int y1 = std::min(y0 + 1, src.h - 1);
        const float wy = fy - static_cast<float>(y0);
        for (int x = 0; x < ow; ++x) {
            const float fx = std::max(0.0f, (static_cast<float>(x) + 0.5f) * sx - 0.5f);
            const int x0 = std::min(static_cast<int>(fx), src.w - 1);
            const int x1 = std::min(x0 + 1, src.w - 1);
            const float wx = fx - static_cast<float>(x0);
            for (int c = 0; c < src.c; ++c) {
                const float top =
                    (1.0f - wx) * src.at(c, y0, x0) + wx * src.at(c, y0, x1);
                const float bot =
                    (1.0f - wx) * src.at(c, y1, x0) + wx * src.at(c, y1, x1);
                out.at(c, y, x) = (1.0f - wy) * top + wy * bot;
            }
        }
    }
    return out;
}

Image weak_augment(const Image& img, RandomSource& rng) {
    const bool flip = bernoulli_half(rng);
    const int off_y = static_cast<int>(uniform_below(rng, 9));
    const int off_x = static_cast<int>(uniform_below(rng, 9));
    Image cur = flip ? flip_horizontal(img) : img;
    return pad_reflect_crop(cur, 4, off_y, off_x);
}

Image strong_augment(const Image& img, RandomSource& rng, const StrongOpts& opts) {
    Image cur = weak_augment(img, rng);
    for (int i = 0; i < opts.num_ops; ++i) {
        StrongOp op;
        if (opts.forced_ops) {
            op = opts.forced_ops->at(static_cast<std::size_t>(i));
        } else {
            op = static_cast<StrongOp>(uniform_below(rng, kStrongOpCount));
        }
        apply_strong_op(cur, op, rng);
    }
    if (opts.cutout) {
        const int side = std::min(cur.h, cur.w) / 2;
        const int cy = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cur.h)));
        const int cx = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cur.w)));
        const int y0 = std::max(0, cy - side / 2);
        const int x0 = std::max(0, cx - side / 2);
        const int y1 = std::min(cur.h, y0 + side);
        const int x1 = std::min(cur.w, x0 + side);
        for (int c = 0; c < cur.c; ++c)
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) cur.at(c, y, x) = 0.5f;
    }
    return cur;
}

double sample_lambda(RandomSource& rng, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_lambda: alpha must be > 0");
    const double l = beta_sample(rng, alpha, alpha);
    return std::clamp(l, 1e-6, 1.0 - 1e-6);
}

MixOutcome resizemix(const Image& target, const std::vector<float>& y_target, const Image& source,
                     const std::vector<float>& y_source, double alpha, RandomSource& rng) {
    if (target.h != source.h || target.w != source.w || target.c != source.c)
        throw std::invalid_argument("resizemix: dimension mismatch");
    if (y_target.size() != y_source.size())
        throw std::invalid_argument("resizemix: label length mismatch");
    const double lambda = sample_lambda(rng, alpha);
    const double side = std::sqrt(lambda);
    const int ph = std::max(1, static_cast<int>(std::llround(side * target.h)));
    const int pw = std::max(1, static_cast<int>(std::llround(side * target.w)));
    MixOutcome out;
    out.has_rect = true;
    out.rect.height = ph;
    out.rect.width = pw;
    out.rect.top = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(target.h - ph + 1)));
    out.rect.left = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(target.w - pw + 1)));
    out.lambda_eff = static_cast<double>(ph) * pw / (static_cast<double>(target.h) * target.w);

    const Image patch = resize_bilinear(source, ph, pw);
    out.image = target;
    for (int c = 0; c < target.c; ++c)
        for (int y = 0; y < ph; ++y)
            for (int x = 0; x < pw; ++x)
                out.image.at(c, out.rect.top + y, out.rect.left + x) = patch.at(c, y, x);

    out.label.resize(y_target.size());
    for (std::size_t i = 0; i < y_target.size(); ++i)
        out.label[i] = static_cast<float>((1.0 - out.lambda_eff) * y_target[i] +
                                          out.lambda_eff * y_source[i]);
    return out;
}

MixOutcome mixup(const Image& a, const std::vector<float>& y_a, const Image& b,
                 const std::vector<float>& y_b, double alpha, RandomSource& rng) {
    if (a.h != b.h || a.w != b.w || a.c != b.c)
        throw std::invalid_argument("mixup: dimension mismatch");
    if (y_a.size() != y_b.size()) throw std::invalid_argument("mixup: label length mismatch");
    const double lambda = sample_lambda(rng, alpha);
    MixOutcome out;
    out.has_rect = false;
    out.lambda_eff = lambda;
    out.image = make_image(a.h, a.w, a.c);
    for (std::size_t i = 0; i < a.pix.size(); ++i)
        out.image.pix[i] = static_cast<float>(lambda * a.pix[i] + (1.0 - lambda) * b.pix[i]);
    out.label.resize(y_a.size());
    for (std::size_t i = 0; i < y_a.size(); ++i)
        out.label[i] = static_cast<float>(lambda * y_a[i] + (1.0 - lambda) * y_b[i]);
    return out;
}

}  // namespace rmm
