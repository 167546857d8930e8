#pragma once

// Inner loops of linear action-value evaluation. Each kernel has a scalar
// reference and ISA-specific variants picked once at runtime; all variants
// produce bit-identical results (same per-lane summation order, exact ties).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace rlbrush::kernels {

enum class Isa { Scalar, Avx2, Neon };
std::string_view to_string(Isa isa);

bool isa_supported(Isa isa);
Isa active_isa();
// Overrides the runtime choice; throws std::invalid_argument if unsupported.
// RLBRUSH_FORCE_SCALAR=1 in the environment does the same at startup.
void force_isa(Isa isa);

// out[j] = sum over r (in order) of table[rows[r] * stride + j], for j < out.size().
void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out);

// Index of the largest value; the lowest index wins ties. values must be non-empty.
std::size_t argmax(std::span<const double> values);

namespace scalar {
void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out);
std::size_t argmax(std::span<const double> values);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out);
std::size_t argmax(std::span<const double> values);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out);
std::size_t argmax(std::span<const double> values);
} // namespace neon
#endif

} // namespace rlbrush::kernels
