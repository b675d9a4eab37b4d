#include "lpq/error.hpp"
#include "lpq/escort.hpp"
#include "lpq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lpq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kCandidates = 8;

std::size_t grid_points(std::size_t n)
{
    switch (n) {
    case 1:
        return 4097;
    case 2:
        return 257;
    case 3:
        return 41;
    default:
        return 0;
    }
}

double radical_inverse(std::uint64_t i, unsigned base)
{
    const double inv = 1.0 / base;
    double f = inv;
    double u = 0.0;
    while (i > 0) {
        u += static_cast<double>(i % base) * f;
        i /= base;
        f *= inv;
    }
    return u;
}

class Search {
public:
    Search(const Density& f, const std::optional<Region>& omega, Box box)
        : f_(f), omega_(omega), box_(std::move(box)), n_(f.dim())
    {
    }

    double value(std::span<const double> x) const
    {
        if (!box_.contains(x))
            return kNaN;
        if (omega_ && !omega_->contains(x))
            return kNaN;
        return f_.eval_unchecked(x);
    }

    SupResult run()
    {
        std::vector<std::vector<double>> points;
        std::vector<double> values;
        sample(points, values);
        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Descending by value, NaN last; ties keep grid order.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const bool na = std::isnan(values[a]);
            const bool nb = std::isnan(values[b]);
            if (na || nb)
                return !na && nb;
            return values[a] > values[b];
        });
        const std::size_t top = kernels::argmax(values);
        SupResult best;
        if (top == values.size())
            return best; // region misses the sampled support
        best.value = values[top];
        best.argmax = points[top];

        std::vector<std::size_t> starts;
        for (std::size_t idx : order) {
            if (std::isnan(values[idx]) || starts.size() == kCandidates)
                break;
            bool separated = true;
            for (std::size_t s : starts)
                separated = separated && normalized_distance(points[idx], points[s]) > 2.0 * spacing_;
            if (separated)
                starts.push_back(idx);
        }
        for (std::size_t s : starts) {
            double err = 0.0;
            std::vector<double> x = points[s];
            const double v = refine(x, values[s], err);
            if (v > best.value || (v == best.value && err < best.error)) {
                best.value = v;
                best.error = err;
                best.argmax = x;
            }
        }
        best.error = std::max(best.error, 8.0 * std::numeric_limits<double>::epsilon() * best.value);
        return best;
    }

private:
    double width(std::size_t k) const { return box_.upper[k] - box_.lower[k]; }

    double normalized_distance(const std::vector<double>& a, const std::vector<double>& b) const
    {
        double d = 0.0;
        for (std::size_t k = 0; k < n_; ++k)
            if (width(k) > 0.0)
                d = std::max(d, std::fabs(a[k] - b[k]) / width(k));
        return d;
    }

    void sample(std::vector<std::vector<double>>& points, std::vector<double>& values)
    {
        const std::size_t m = grid_points(n_);
        std::vector<double> x(n_);
        if (m > 0) {
            spacing_ = 1.0 / static_cast<double>(m - 1);
            std::size_t total = 1;
            for (std::size_t k = 0; k < n_; ++k)
                total *= m;
            points.reserve(total);
            values.reserve(total);
            for (std::size_t i = 0; i < total; ++i) {
                std::size_t rem = i;
                for (std::size_t k = n_; k-- > 0;) {
                    const std::size_t j = rem % m;
                    rem /= m;
                    x[k] = j + 1 == m ? box_.upper[k] : box_.lower[k] + width(k) * static_cast<double>(j) * spacing_;
                }
                points.push_back(x);
                values.push_back(value(x));
            }
            return;
        }
        constexpr unsigned primes[10] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
        constexpr std::size_t count = 65536;
        spacing_ = std::pow(static_cast<double>(count), -1.0 / static_cast<double>(n_));
        points.reserve(count);
        values.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < n_; ++k)
                x[k] = box_.lower[k] + width(k) * radical_inverse(i, primes[k]);
            points.push_back(x);
            values.push_back(value(x));
        }
    }

    // Compass search constrained to box and region; returns the final value and
    // the drop to the best neighbor at the last step as the error.
    double refine(std::vector<double>& x, double fx, double& err) const
    {
        std::vector<double> step(n_);
        for (std::size_t k = 0; k < n_; ++k)
            step[k] = width(k) * spacing_;
        std::vector<double> trial(n_);
        double last_drop = 0.0;
        for (int iter = 0; iter < 4000; ++iter) {
            bool moved = false;
            double best_neighbor = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n_ && !moved; ++k) {
                if (step[k] <= 0.0)
                    continue;
                for (double sign : {1.0, -1.0}) {
                    trial = x;
                    trial[k] = std::clamp(x[k] + sign * step[k], box_.lower[k], box_.upper[k]);
                    const double v = value(trial);
                    if (std::isnan(v))
                        continue;
                    best_neighbor = std::max(best_neighbor, v);
                    if (v > fx) {
                        x = trial;
                        fx = v;
                        moved = true;
                        break;
                    }
                }
            }
            if (moved)
                continue;
            last_drop = std::isfinite(best_neighbor) ? fx - best_neighbor : 0.0;
            bool done = true;
            for (std::size_t k = 0; k < n_; ++k) {
                step[k] *= 0.5;
                if (step[k] > 1e-12 * std::max(width(k), std::fabs(x[k])))
                    done = false;
            }
            if (done)
                break;
        }
        err = last_drop;
        return fx;
    }

    const Density& f_;
    const std::optional<Region>& omega_;
    Box box_;
    std::size_t n_;
    double spacing_ = 0.0;
};

} // namespace

SupResult ess_sup(const Density& f, const std::optional<Region>& omega, const NumericOptions& opts)
{
    const std::size_t n = f.dim();
    if (omega && omega->dim() != n)
        throw InvalidArgument("region dimension does not match density dimension");
    const bool unrestricted = !omega || omega->kind() == Region::Kind::all;
    if (opts.sup == SupMethod::automatic && unrestricted && f.oracle() && f.oracle()->known_lp_norm) {
        if (const auto peak = f.oracle()->known_lp_norm(std::numeric_limits<double>::infinity())) {
            SupResult r;
            r.value = *peak;
            r.error = 4.0 * std::numeric_limits<double>::epsilon() * *peak;
            r.from_oracle = true;
            return r;
        }
    }

    Box box = f.support().bounds;
    if (omega)
        box = box.intersect(omega->bounding_box());
    if (box.empty())
        return {};
    const auto& c = f.hints().center;
    const auto& s = f.hints().scale;
    for (std::size_t k = 0; k < n; ++k) {
        const double reach = 12.0 * s[k];
        double lo = box.lower[k];
        double hi = box.upper[k];
        if (std::isinf(lo) && std::isinf(hi)) {
            lo = c[k] - reach;
            hi = c[k] + reach;
        } else if (std::isinf(hi)) {
            hi = std::max(c[k] + reach, lo + reach);
        } else if (std::isinf(lo)) {
            lo = std::min(c[k] - reach, hi - reach);
        }
        box.lower[k] = lo;
        box.upper[k] = hi;
    }
    Search search(f, omega, box);
    return search.run();
}

} // namespace lpq
