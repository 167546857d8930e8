#include "rlbrush/kernels.hpp"

namespace rlbrush::kernels::scalar {

void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out) {
    for (auto& v : out) v = 0.0;
    for (auto r : rows) {
        const double* row = table + static_cast<std::size_t>(r) * stride;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += row[j];
    }
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

} // namespace rlbrush::kernels::scalar
