#include "rlbrush/kernels.hpp"

#include <arm_neon.h>

namespace rlbrush::kernels::neon {

void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out) {
    const std::size_t n = out.size();
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (auto r : rows) acc = vaddq_f64(acc, vld1q_f64(table + static_cast<std::size_t>(r) * stride + j));
        vst1q_f64(out.data() + j, acc);
    }
    if (j < n) {
        double acc = 0.0;
        for (auto r : rows) acc += table[static_cast<std::size_t>(r) * stride + j];
        out[j] = acc;
    }
}

std::size_t argmax(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) return scalar::argmax(values);
    float64x2_t best = vld1q_f64(values.data());
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) best = vmaxq_f64(best, vld1q_f64(values.data() + i));
    double top = vgetq_lane_f64(best, 0) > vgetq_lane_f64(best, 1) ? vgetq_lane_f64(best, 0)
                                                                    : vgetq_lane_f64(best, 1);
    for (; i < n; ++i) top = values[i] > top ? values[i] : top;
    for (std::size_t k = 0; k < n; ++k)
        if (values[k] == top) return k;
    return 0;
}

} // namespace rlbrush::kernels::neon
