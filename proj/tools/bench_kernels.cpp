// Throughput probe for the conv-shaped matrix kernels. Prints GFLOP/s per
// stage shape so training batch sizes can be chosen against a real budget.

#include <chrono>
#include <cstdio>
#include <vector>

#include "rmm/kernels.hpp"
#include "rmm/model.hpp"
#include "rmm/nn.hpp"
#include "rmm/rng.hpp"
#include "rmm/tape.hpp"
#include "rmm/tensor.hpp"

using namespace rmm;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void fill_random(Tensor& t, std::uint64_t seed) {
    StreamRng rng(seed);
    for (float& v : t.data) v = static_cast<float>(uniform_unit(rng) - 0.5);
}

void bench_gemm(const char* tag, int m, int k, int n, int reps) {
    Tensor a({m, k}), b({k, n}), c({m, n});
    fill_random(a, 1);
    fill_random(b, 2);
    gemm_nn(a.data.data(), b.data.data(), c.data.data(), m, k, n, false);
    const double t0 = now_s();
    for (int r = 0; r < reps; ++r)
        gemm_nn(a.data.data(), b.data.data(), c.data.data(), m, k, n, false);
    const double dt = (now_s() - t0) / reps;
    const double gf = 2.0 * m * k * n / dt * 1e-9;
    std::printf("gemm_nn  %-10s M=%4d K=%4d N=%6d  %7.3f ms  %6.1f GF/s\n", tag, m, k, n,
                dt * 1e3, gf);
}

void bench_abt(const char* tag, int m, int k, int n, int reps) {
    Tensor a({m, n}), b({k, n}), c({m, k});
    fill_random(a, 3);
    fill_random(b, 4);
    gemm_abt(a.data.data(), b.data.data(), c.data.data(), m, k, n, false);
    const double t0 = now_s();
    for (int r = 0; r < reps; ++r)
        gemm_abt(a.data.data(), b.data.data(), c.data.data(), m, k, n, false);
    const double dt = (now_s() - t0) / reps;
    const double gf = 2.0 * m * k * n / dt * 1e-9;
    std::printf("gemm_abt %-10s M=%4d K=%4d N=%6d  %7.3f ms  %6.1f GF/s\n", tag, m, k, n,
                dt * 1e3, gf);
}

void bench_step(int batch, int classes, int reps) {
    SmallConvNet net(1, classes);
    net.init_params(7);
    Tensor x({batch, 1, 32, 32});
    fill_random(x, 5);
    Tensor targets({batch, classes});
    for (int i = 0; i < batch; ++i) targets.at2(i, i % classes) = 1.0f;
    std::vector<float> w(static_cast<std::size_t>(batch), 1.0f);

    const double t0 = now_s();
    for (int r = 0; r < reps; ++r) {
        Tape tape;
        std::vector<NodeId> leaves;
        const NodeId logits = net.forward_train(tape, x, leaves);
        const NodeId loss =
            op_rowset_soft_xent(tape, logits, 0, batch, targets, w, static_cast<double>(batch));
        tape.backward(loss);
    }
    const double dt = (now_s() - t0) / reps;
    std::printf("train fwd+bwd batch=%3d  %7.1f ms  (%.3f s per 5000 iters: %5.1f min)\n", batch,
                dt * 1e3, dt, dt * 5000.0 / 60.0);
}

}  // namespace

int main() {
    // Per-image conv shapes at 32x32 input: (Cout, K, L) per stage.
    bench_gemm("s1a", 32, 9, 1024, 200);
    bench_gemm("s1b", 32, 288, 1024, 50);
    bench_gemm("s2a", 64, 288, 256, 100);
    bench_gemm("s2b", 64, 576, 256, 100);
    bench_gemm("s3a", 128, 576, 64, 100);
    bench_gemm("s3b", 128, 1152, 64, 100);
    // Batched variants (24 images) as seen by the backward dX path.
    bench_gemm("s1b-b24", 288, 32, 24576, 5);
    bench_abt("s1b-b24", 32, 288, 24576, 5);
    bench_abt("s3b-b24", 128, 1152, 1536, 20);
    bench_step(24, 10, 3);
    bench_step(32, 10, 3);
    bench_step(40, 10, 3);
    return 0;
}
