#include "lpq/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#include <cassert>
#include <cmath>
#include <limits>

namespace lpq::kernels::avx2 {

namespace {

inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline __m256d vabs(__m256d v)
{
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w)
{
    assert(values.size() == kronrod_w.size() && values.size() == gauss_w.size());
    const std::size_t n = values.size();
    __m256d k = _mm256_setzero_pd();
    __m256d g = _mm256_setzero_pd();
    __m256d a = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(values.data() + i);
        const __m256d kw = _mm256_loadu_pd(kronrod_w.data() + i);
        k = _mm256_fmadd_pd(kw, v, k);
        g = _mm256_fmadd_pd(_mm256_loadu_pd(gauss_w.data() + i), v, g);
        a = _mm256_fmadd_pd(kw, vabs(v), a);
    }
    GkSums out{hsum(k), hsum(g), hsum(a)};
    for (; i < n; ++i) {
        out.kronrod += kronrod_w[i] * values[i];
        out.gauss += gauss_w[i] * values[i];
        out.abs_kronrod += kronrod_w[i] * std::fabs(values[i]);
    }
    return out;
}

double abs_deviation(std::span<const double> values, std::span<const double> w, double mean)
{
    assert(values.size() == w.size());
    const std::size_t n = values.size();
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(values.data() + i), m));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += w[i] * std::fabs(values[i] - mean);
    return s;
}

std::size_t argmax(std::span<const double> v)
{
    const std::size_t n = v.size();
    const double ninf = -std::numeric_limits<double>::infinity();
    __m256d best = _mm256_set1_pd(ninf);
    // Tracks whether any non-NaN lane was seen; x == x is false only for NaN.
    __m256d seen = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v.data() + i);
        // max_pd returns the second operand when either is NaN.
        best = _mm256_max_pd(x, best);
        seen = _mm256_or_pd(seen, _mm256_cmp_pd(x, x, _CMP_EQ_OQ));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = ninf;
    for (double l : lanes)
        m = l > m ? l : m;
    bool any = _mm256_movemask_pd(seen) != 0;
    for (; i < n; ++i) {
        if (std::isnan(v[i]))
            continue;
        any = true;
        if (v[i] > m)
            m = v[i];
    }
    if (!any)
        return n;

    const __m256d target = _mm256_set1_pd(m);
    i = 0;
    for (; i + 4 <= n; i += 4) {
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v.data() + i), target, _CMP_EQ_OQ));
        if (mask != 0)
            return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i)
        if (v[i] == m)
            return i;
    return n;
}

} // namespace lpq::kernels::avx2

#else

namespace lpq::kernels::avx2 {
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
GkSums gk_reduce(std::span<const double> v, std::span<const double> k, std::span<const double> g)
{
    return scalar::gk_reduce(v, k, g);
}
double abs_deviation(std::span<const double> v, std::span<const double> w, double m)
{
    return scalar::abs_deviation(v, w, m);
}
std::size_t argmax(std::span<const double> v) { return scalar::argmax(v); }
} // namespace lpq::kernels::avx2

#endif
