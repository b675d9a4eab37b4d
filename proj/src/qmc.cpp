#include "lpq/error.hpp"
#include "lpq/integrate.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace lpq::detail {

namespace {

constexpr std::array<unsigned, 10> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
constexpr std::size_t kReplicates = 16;

// Random digit permutation of the Halton radical inverse. One permutation per
// (axis, digit position); digits beyond the table are left unscrambled.
class ScrambledHalton {
public:
    ScrambledHalton(std::size_t dim, std::mt19937_64& rng) : dim_(dim), perms_(dim)
    {
        for (std::size_t k = 0; k < dim; ++k) {
            const unsigned base = kPrimes[k];
            const std::size_t digits = digit_count(base);
            perms_[k].resize(digits);
            for (auto& p : perms_[k]) {
                p.resize(base);
                for (unsigned i = 0; i < base; ++i)
                    p[i] = i;
                // Fisher-Yates with a fixed reduction so the sequence is portable across standard libraries.
                for (unsigned i = base - 1; i > 0; --i) {
                    const auto j = static_cast<unsigned>(rng() % (i + 1));
                    std::swap(p[i], p[j]);
                }
            }
        }
    }

    double coordinate(std::size_t k, std::uint64_t index) const
    {
        const unsigned base = kPrimes[k];
        const auto& perm = perms_[k];
        double inv = 1.0 / base;
        double factor = inv;
        double u = 0.0;
        for (std::size_t d = 0; d < perm.size(); ++d) {
            const unsigned digit = static_cast<unsigned>(index % base);
            index /= base;
            u += perm[d][digit] * factor;
            factor *= inv;
        }
        return u;
    }

    std::size_t dim() const { return dim_; }

private:
    static std::size_t digit_count(unsigned base)
    {
        // Enough digits to resolve double precision.
        std::size_t d = 0;
        double r = 1.0;
        while (r > 1e-16) {
            r /= base;
            ++d;
        }
        return d;
    }

    std::size_t dim_;
    std::vector<std::vector<std::vector<unsigned>>> perms_;
};

struct AxisMap {
    enum class Kind { finite, upper, lower, both } kind = Kind::finite;
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double s = 1.0;

    void map(double u, double& x, double& jac) const
    {
        switch (kind) {
        case Kind::finite:
            x = a + (b - a) * u;
            jac = b - a;
            return;
        case Kind::upper:
            x = a + s * u / (1.0 - u);
            jac = s / ((1.0 - u) * (1.0 - u));
            return;
        case Kind::lower:
            x = b - s * u / (1.0 - u);
            jac = s / ((1.0 - u) * (1.0 - u));
            return;
        case Kind::both: {
            const double angle = std::numbers::pi * (u - 0.5);
            const double cs = std::cos(angle);
            x = c + s * std::tan(angle);
            jac = s * std::numbers::pi / (cs * cs);
            return;
        }
        }
    }
};

} // namespace

IntegrationResult integrate_qmc(const IntegrationRequest& req, const Box& domain)
{
    const std::size_t n = req.dim;
    if (n > kPrimes.size())
        throw InvalidArgument("quasi-Monte Carlo supports at most 10 dimensions");

    std::vector<AxisMap> maps(n);
    for (std::size_t k = 0; k < n; ++k) {
        AxisMap& m = maps[k];
        m.a = domain.lower[k];
        m.b = domain.upper[k];
        m.c = k < req.center.size() ? req.center[k] : 0.0;
        m.s = k < req.scale.size() && req.scale[k] > 0.0 ? req.scale[k] : 1.0;
        const bool lo = std::isfinite(m.a);
        const bool hi = std::isfinite(m.b);
        m.kind = lo && hi ? AxisMap::Kind::finite
                 : lo     ? AxisMap::Kind::upper
                 : hi     ? AxisMap::Kind::lower
                          : AxisMap::Kind::both;
    }
    const bool use_indicator = req.region && !req.region->is_box();
    const std::size_t per_replicate = std::max<std::size_t>(req.budget / kReplicates, 64);

    std::mt19937_64 rng(req.seed);
    std::array<double, kReplicates> means{};
    std::array<double, kReplicates> abs_means{};
    std::vector<double> x(n);
    std::size_t evaluations = 0;
    for (std::size_t rep = 0; rep < kReplicates; ++rep) {
        const ScrambledHalton seq(n, rng);
        double sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < per_replicate; ++i) {
            double jac = 1.0;
            bool finite = true;
            for (std::size_t k = 0; k < n; ++k) {
                double j = 0.0;
                maps[k].map(seq.coordinate(k, i + 1), x[k], j);
                jac *= j;
                finite = finite && std::isfinite(x[k]) && std::isfinite(j);
            }
            if (!finite)
                continue;
            if (use_indicator && !req.region->contains(x))
                continue;
            const double v = req.integrand(x);
            ++evaluations;
            if (std::isnan(v)) {
                std::ostringstream os;
                os.precision(17);
                os << "integrand produced NaN at x = (";
                for (std::size_t k = 0; k < n; ++k)
                    os << (k ? ", " : "") << x[k];
                os << ")";
                throw NumericalError(os.str());
            }
            sum += v * jac;
            abs_sum += std::fabs(v * jac);
        }
        means[rep] = sum / static_cast<double>(per_replicate);
        abs_means[rep] = abs_sum / static_cast<double>(per_replicate);
    }

    double mean = 0.0;
    double abs_mean = 0.0;
    for (std::size_t r = 0; r < kReplicates; ++r) {
        mean += means[r];
        abs_mean += abs_means[r];
    }
    mean /= kReplicates;
    abs_mean /= kReplicates;
    double var = 0.0;
    for (double m : means)
        var += (m - mean) * (m - mean);
    var /= static_cast<double>(kReplicates - 1);
    const double se = std::sqrt(var / kReplicates);

    IntegrationResult out;
    out.value = mean;
    out.abs_error_estimate = se;
    out.abs_integral = abs_mean;
    out.evaluations = evaluations;
    out.method = IntegrationMethod::qmc;
    out.converged = std::isfinite(mean) && std::isfinite(se) &&
                    se <= std::max({req.tolerance * std::max(std::fabs(mean), kRelativeFloor), req.abs_tolerance,
                                    100.0 * std::numeric_limits<double>::epsilon() * abs_mean});
    return out;
}

} // namespace lpq::detail
