#include "lpq/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace lpq::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

GkSums gk_reduce(std::span<const double> values, std::span<const double> kronrod_w,
                 std::span<const double> gauss_w)
{
    assert(values.size() == kronrod_w.size() && values.size() == gauss_w.size());
    GkSums out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.kronrod += kronrod_w[i] * values[i];
        out.gauss += gauss_w[i] * values[i];
        out.abs_kronrod += kronrod_w[i] * std::fabs(values[i]);
    }
    return out;
}

double abs_deviation(std::span<const double> values, std::span<const double> w, double mean)
{
    assert(values.size() == w.size());
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += w[i] * std::fabs(values[i] - mean);
    return s;
}

std::size_t argmax(std::span<const double> v)
{
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (double x : v) {
        if (std::isnan(x))
            continue;
        any = true;
        if (x > best)
            best = x;
    }
    if (!any)
        return v.size();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == best)
            return i;
    return v.size();
}

} // namespace lpq::kernels::scalar
