#pragma once

// Data-parallel reductions used by the quadrature and search loops.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is chosen once at
// startup from the CPU features; LPQ_SIMD=scalar forces the reference path.
// Variants agree with the reference to a few ulps of the absolute sum
// (argmax agrees exactly); the equivalence is covered by test_kernels.

#include <cstddef>
#include <span>
#include <string_view>

namespace lpq::kernels {

enum class Isa { scalar, avx2, neon };

/// Sums produced by one Gauss-Kronrod panel.
struct GkSums {
    double kronrod = 0.0;     // sum kw_i v_i
    double gauss = 0.0;       // sum gw_i v_i
    double abs_kronrod = 0.0; // sum kw_i |v_i|
};

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();

double dot(std::span<const double> a, std::span<const double> b);
GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w);
/// sum w_i |v_i - mean|
double abs_deviation(std::span<const double> values, std::span<const double> w, double mean);
/// Index of the first maximal element, ignoring NaN. Returns size() when no element is comparable.
std::size_t argmax(std::span<const double> v);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w);
double abs_deviation(std::span<const double> values, std::span<const double> w, double mean);
std::size_t argmax(std::span<const double> v);
} // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w);
double abs_deviation(std::span<const double> values, std::span<const double> w, double mean);
std::size_t argmax(std::span<const double> v);
} // namespace avx2

namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w);
double abs_deviation(std::span<const double> values, std::span<const double> w, double mean);
std::size_t argmax(std::span<const double> v);
} // namespace neon

} // namespace lpq::kernels
