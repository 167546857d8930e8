#include "rlbrush/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rlbrush::kernels {

namespace {

using RowSumFn = void (*)(const double*, std::size_t, std::span<const std::uint32_t>,
                          std::span<double>);
using ArgmaxFn = std::size_t (*)(std::span<const double>);

struct Table {
    Isa isa;
    RowSumFn row_sum;
    ArgmaxFn argmax;
};

Table table_for(Isa isa) {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return {Isa::Avx2, &avx2::row_sum, &avx2::argmax};
#endif
#if defined(__aarch64__)
    case Isa::Neon: return {Isa::Neon, &neon::row_sum, &neon::argmax};
#endif
    default: return {Isa::Scalar, &scalar::row_sum, &scalar::argmax};
    }
}

Isa detect() {
    if (const char* env = std::getenv("RLBRUSH_FORCE_SCALAR"); env && std::string(env) == "1")
        return Isa::Scalar;
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Table& current() {
    static Table t = table_for(detect());
    return t;
}

} // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "?";
}

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().isa; }

void force_isa(Isa isa) {
    if (!isa_supported(isa))
        throw std::invalid_argument("instruction set not supported here: " + std::string(to_string(isa)));
    current() = table_for(isa);
}

void row_sum(const double* table, std::size_t stride, std::span<const std::uint32_t> rows,
             std::span<double> out) {
    current().row_sum(table, stride, rows, out);
}

std::size_t argmax(std::span<const double> values) { return current().argmax(values); }

} // namespace rlbrush::kernels
