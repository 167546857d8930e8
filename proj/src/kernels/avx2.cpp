#include "rlbrush/kernels.hpp"

#include <immintrin.h>

namespace rlbrush::kernels::avx2 {

void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out) {
    const std::size_t n = out.size();
    double* dst = out.data();
    std::size_t j = 0;
    // 16 lanes per pass keeps four accumulators in registers across all rows.
    for (; j + 16 <= n; j += 16) {
        __m256d a0 = _mm256_setzero_pd();
        __m256d a1 = _mm256_setzero_pd();
        __m256d a2 = _mm256_setzero_pd();
        __m256d a3 = _mm256_setzero_pd();
        for (auto r : rows) {
            const double* row = table + static_cast<std::size_t>(r) * stride + j;
            a0 = _mm256_add_pd(a0, _mm256_loadu_pd(row));
            a1 = _mm256_add_pd(a1, _mm256_loadu_pd(row + 4));
            a2 = _mm256_add_pd(a2, _mm256_loadu_pd(row + 8));
            a3 = _mm256_add_pd(a3, _mm256_loadu_pd(row + 12));
        }
        _mm256_storeu_pd(dst + j, a0);
        _mm256_storeu_pd(dst + j + 4, a1);
        _mm256_storeu_pd(dst + j + 8, a2);
        _mm256_storeu_pd(dst + j + 12, a3);
    }
    for (; j + 4 <= n; j += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (auto r : rows)
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(table + static_cast<std::size_t>(r) * stride + j));
        _mm256_storeu_pd(dst + j, acc);
    }
    if (j < n) {
        const std::size_t rest = n - j;
        const __m256i mask = _mm256_setr_epi64x(rest > 0 ? -1 : 0, rest > 1 ? -1 : 0,
                                                rest > 2 ? -1 : 0, 0);
        __m256d acc = _mm256_setzero_pd();
        for (auto r : rows)
            acc = _mm256_add_pd(
                acc, _mm256_maskload_pd(table + static_cast<std::size_t>(r) * stride + j, mask));
        _mm256_maskstore_pd(dst + j, mask, acc);
    }
}

std::size_t argmax(std::span<const double> values) {
    const std::size_t n = values.size();
    const double* v = values.data();
    if (n < 8) return scalar::argmax(values);

    __m256d best = _mm256_loadu_pd(v);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, _mm256_loadu_pd(v + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double top = lanes[0];
    for (int k = 1; k < 4; ++k) top = lanes[k] > top ? lanes[k] : top;
    for (; i < n; ++i) top = v[i] > top ? v[i] : top;

    // First position holding the maximum.
    const __m256d needle = _mm256_set1_pd(top);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const int hits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + k), needle, _CMP_EQ_OQ));
        if (hits) return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(hits)));
    }
    for (; k < n; ++k)
        if (v[k] == top) return k;
    return 0;
}

} // namespace rlbrush::kernels::avx2
