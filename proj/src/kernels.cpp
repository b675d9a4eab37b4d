#include "lpq/kernels.hpp"

#include <cstdlib>
#include <string>

namespace lpq::kernels {

namespace {

struct Table {
    Isa isa;
    double (*dot)(std::span<const double>, std::span<const double>);
    GkSums (*gk_reduce)(std::span<const double>, std::span<const double>, std::span<const double>);
    double (*abs_deviation)(std::span<const double>, std::span<const double>, double);
    std::size_t (*argmax)(std::span<const double>);
};

constexpr Table scalar_table{Isa::scalar, scalar::dot, scalar::gk_reduce, scalar::abs_deviation, scalar::argmax};
constexpr Table avx2_table{Isa::avx2, avx2::dot, avx2::gk_reduce, avx2::abs_deviation, avx2::argmax};
constexpr Table neon_table{Isa::neon, neon::dot, neon::gk_reduce, neon::abs_deviation, neon::argmax};

const Table& select()
{
    if (const char* env = std::getenv("LPQ_SIMD")) {
        const std::string want(env);
        if (want == "scalar")
            return scalar_table;
        if (want == "avx2" && isa_available(Isa::avx2))
            return avx2_table;
        if (want == "neon" && isa_available(Isa::neon))
            return neon_table;
    }
    if (isa_available(Isa::avx2))
        return avx2_table;
    if (isa_available(Isa::neon))
        return neon_table;
    return scalar_table;
}

const Table& table()
{
    static const Table& t = select();
    return t;
}

} // namespace

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::avx2:
        return "avx2";
    case Isa::neon:
        return "neon";
    case Isa::scalar:
        break;
    }
    return "scalar";
}

bool isa_available(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() { return table().isa; }

double dot(std::span<const double> a, std::span<const double> b) { return table().dot(a, b); }

GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w)
{
    return table().gk_reduce(values, kronrod_w, gauss_w);
}

double abs_deviation(std::span<const double> values, std::span<const double> w, double mean)
{
    return table().abs_deviation(values, w, mean);
}

std::size_t argmax(std::span<const double> v) { return table().argmax(v); }

} // namespace lpq::kernels
