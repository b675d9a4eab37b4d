#include "lpq/entropy.hpp"

#include "lpq/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpq {

namespace {

constexpr double kOrderGuard = 1e-6;

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

void require_normalized(const Density& f, const NumericOptions& opts)
{
    const Estimate m = mass(f, std::nullopt, opts);
    if (std::fabs(m.value - 1.0) > 1e-6)
        throw InvalidArgument(f.label() + " is not normalized (mass " + fmt(m.value) + ")");
}

EntropyValue renyi_entropy(const Density& f, double p, const NumericOptions& opts)
{
    if (!(p > 0.0))
        throw InvalidArgument("Renyi order must be positive (got " + fmt(p) + ")");
    if (std::fabs(p - 1.0) < kOrderGuard)
        throw InvalidArgument("Renyi order " + fmt(p) + " is within 1e-6 of 1; use the Shannon entropy");
    require_normalized(f, opts);
    const Estimate norm = lp_norm(f, p, std::nullopt, opts);
    if (!(norm.value > 0.0))
        throw NumericalError("norm of " + f.label() + " vanishes");
    EntropyValue e;
    e.kind = EntropyValue::Kind::renyi;
    e.order = p;
    const double factor = std::isinf(p) ? -1.0 : p / (1.0 - p);
    e.value = factor * std::log(norm.value);
    e.error_estimate = std::fabs(factor) * norm.error / norm.value;
    return e;
}

EntropyValue shannon_entropy(const Density& f, const NumericOptions& opts)
{
    require_normalized(f, opts);
    IntegrationRequest req = make_request(f, opts);
    req.integrand = [&f](std::span<const double> x) {
        const double v = f.eval_unchecked(x);
        return v > 0.0 ? -v * std::log(v) : 0.0;
    };
    const IntegrationResult r = integrate(req);
    if (!r.converged || !std::isfinite(r.value)) {
        if (detect_divergence(req))
            throw DivergenceError("Shannon entropy of " + f.label() + " diverges");
        throw NumericalError("Shannon entropy integral of " + f.label() + " did not converge");
    }
    EntropyValue e;
    e.kind = EntropyValue::Kind::shannon;
    e.value = r.value;
    e.error_estimate = r.abs_error_estimate;
    return e;
}

EntropyValue tsallis_entropy(const Density& f, double q, const NumericOptions& opts)
{
    if (!(q > 0.0) || std::isinf(q))
        throw InvalidArgument("Tsallis order must be positive and finite (got " + fmt(q) + ")");
    if (std::fabs(q - 1.0) < kOrderGuard)
        throw InvalidArgument("Tsallis order " + fmt(q) + " is within 1e-6 of 1; use the Shannon entropy");
    require_normalized(f, opts);
    const Estimate i = power_integral(f, q, std::nullopt, opts);
    EntropyValue e;
    e.kind = EntropyValue::Kind::tsallis;
    e.order = q;
    e.value = (1.0 - i.value) / (q - 1.0);
    e.error_estimate = i.error / std::fabs(q - 1.0);
    return e;
}

double q_exp(double x, double q)
{
    if (q == 1.0)
        return std::exp(x);
    const double bracket = 1.0 + (1.0 - q) * x;
    const double exponent = 1.0 / (1.0 - q);
    if (bracket <= 0.0)
        return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(bracket, exponent);
}

double q_exp_derivative(double x, double q)
{
    const double v = q_exp(x, q);
    if (v == 0.0 || std::isinf(v))
        return 0.0;
    return std::pow(v, q);
}

} // namespace lpq
