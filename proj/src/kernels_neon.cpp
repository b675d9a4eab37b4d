#include "lpq/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include <cassert>
#include <cmath>
#include <limits>

namespace lpq::kernels::neon {

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w)
{
    assert(values.size() == kronrod_w.size() && values.size() == gauss_w.size());
    const std::size_t n = values.size();
    float64x2_t k = vdupq_n_f64(0.0);
    float64x2_t g = vdupq_n_f64(0.0);
    float64x2_t a = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(values.data() + i);
        const float64x2_t kw = vld1q_f64(kronrod_w.data() + i);
        k = vfmaq_f64(k, kw, v);
        g = vfmaq_f64(g, vld1q_f64(gauss_w.data() + i), v);
        a = vfmaq_f64(a, kw, vabsq_f64(v));
    }
    GkSums out{vaddvq_f64(k), vaddvq_f64(g), vaddvq_f64(a)};
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
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(w.data() + i), vabsq_f64(vsubq_f64(vld1q_f64(values.data() + i), m)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i)
        s += w[i] * std::fabs(values[i] - mean);
    return s;
}

std::size_t argmax(std::span<const double> v)
{
    // vmaxnmq ignores a quiet NaN operand, matching the scalar NaN rule.
    const std::size_t n = v.size();
    float64x2_t best = vdupq_n_f64(-std::numeric_limits<double>::infinity());
    bool any = false;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vld1q_f64(v.data() + i);
        best = vmaxnmq_f64(best, x);
        any = any || !(std::isnan(v[i]) && std::isnan(v[i + 1]));
    }
    double m = vmaxvq_f64(best);
    for (; i < n; ++i) {
        if (std::isnan(v[i]))
            continue;
        any = true;
        if (v[i] > m)
            m = v[i];
    }
    if (!any)
        return n;
    for (i = 0; i < n; ++i)
        if (v[i] == m)
            return i;
    return n;
}

} // namespace lpq::kernels::neon

#else

namespace lpq::kernels::neon {
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
} // namespace lpq::kernels::neon

#endif
