#include "lpq/escort.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Integrates and applies the failure policy: a result that does not converge
// is a divergence when detect_divergence says so, a numerical failure otherwise.
Estimate run(const IntegrationRequest& req, const std::string& what)
{
    const IntegrationResult r = integrate(req);
    if (r.converged && std::isfinite(r.value))
        return {r.value, r.abs_error_estimate};
    if (detect_divergence(req))
        throw DivergenceError(what + " diverges");
    std::ostringstream os;
    os.precision(17);
    os << what << " did not converge (estimate " << r.value << " +- " << r.abs_error_estimate << " after "
       << r.evaluations << " evaluations)";
    throw NumericalError(os.str());
}

// Subnormal densities carry too few bits for |f|^p with p < 1 to be smooth; treat them as 0.
double power(double v, double p)
{
    if (v < std::numeric_limits<double>::min())
        return 0.0;
    if (p == 1.0)
        return v;
    if (p == 2.0)
        return v * v;
    return std::pow(v, p);
}

void check_order(double p, const char* name)
{
    if (!(p > 0.0))
        throw InvalidArgument(std::string(name) + " must be positive (got " + fmt(p) + ")");
}

} // namespace

IntegrationRequest make_request(const Density& f, const NumericOptions& opts)
{
    IntegrationRequest req;
    req.dim = f.dim();
    req.domain = f.support().bounds;
    req.breakpoints = f.hints().breakpoints;
    req.center = f.hints().center;
    req.scale = f.hints().scale;
    req.tolerance = opts.rel_tol;
    req.budget = opts.budget;
    req.seed = opts.seed;
    return req;
}

Estimate weighted_power_integral(const Density& f, double p, const std::function<double(std::span<const double>)>& w,
                                 const std::optional<Region>& omega, const NumericOptions& opts,
                                 std::vector<std::vector<double>> extra_breaks)
{
    check_order(p, "order");
    if (omega && omega->dim() != f.dim())
        throw InvalidArgument("region dimension " + std::to_string(omega->dim()) + " does not match density dimension " +
                              std::to_string(f.dim()));
    IntegrationRequest req = make_request(f, opts);
    req.region = omega;
    for (std::size_t k = 0; k < extra_breaks.size() && k < req.breakpoints.size(); ++k)
        req.breakpoints[k].insert(req.breakpoints[k].end(), extra_breaks[k].begin(), extra_breaks[k].end());
    if (w) {
        req.integrand = [&f, &w, p](std::span<const double> x) {
            const double v = f.eval_unchecked(x);
            return v == 0.0 ? 0.0 : w(x) * power(v, p);
        };
    } else {
        req.integrand = [&f, p](std::span<const double> x) { return power(f.eval_unchecked(x), p); };
    }
    return run(req, "integral of |f|^" + fmt(p) + (w ? " times weight" : "") + " for " + f.label());
}

Estimate power_integral(const Density& f, double p, const std::optional<Region>& omega, const NumericOptions& opts)
{
    return weighted_power_integral(f, p, nullptr, omega, opts);
}

Estimate mass(const Density& f, const std::optional<Region>& omega, const NumericOptions& opts)
{
    return power_integral(f, 1.0, omega, opts);
}

Estimate lp_norm(const Density& f, double p, const std::optional<Region>& omega, const NumericOptions& opts)
{
    check_order(p, "p");
    if (std::isinf(p)) {
        const SupResult s = ess_sup(f, omega, opts);
        return {s.value, s.error};
    }
    const Estimate i = power_integral(f, p, omega, opts);
    if (i.value <= 0.0)
        return {0.0, std::pow(i.error, 1.0 / p)};
    const double norm = std::pow(i.value, 1.0 / p);
    return {norm, norm * i.error / (p * i.value)};
}

std::vector<Estimate> q_expectation(const Density& f, double q, const NumericOptions& opts)
{
    check_order(q, "q");
    const Estimate m = power_integral(f, q, std::nullopt, opts);
    if (!(m.value > 0.0))
        throw NumericalError("escort normalization of " + f.label() + " vanishes");
    std::vector<Estimate> out;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const Estimate num = weighted_power_integral(
            f, q, [i](std::span<const double> x) { return x[i]; }, std::nullopt, opts);
        const double mean = num.value / m.value;
        out.push_back({mean, (num.error + std::fabs(mean) * m.error) / m.value});
    }
    return out;
}

Estimate q_moment(const Density& f, const MomentSpec& spec, const NumericOptions& opts)
{
    if (f.dim() != 1)
        throw InvalidArgument("q_moment needs a 1-D density (got dimension " + std::to_string(f.dim()) + ")");
    check_order(spec.q, "q");
    check_order(spec.alpha, "alpha");
    if (std::isinf(spec.alpha))
        throw InvalidArgument("alpha must be finite");
    double b = 0.0;
    double b_err = 0.0;
    if (spec.center.is_central()) {
        const Estimate e = q_expectation(f, spec.q, opts)[0];
        b = e.value;
        b_err = e.error;
    } else {
        if (spec.center.point.size() != 1)
            throw InvalidArgument("explicit center must have dimension 1");
        b = spec.center.point[0];
    }
    const Estimate m = power_integral(f, spec.q, std::nullopt, opts);
    const double alpha = spec.alpha;
    const Estimate num = weighted_power_integral(
        f, spec.q, [b, alpha](std::span<const double> x) { return std::pow(std::fabs(x[0] - b), alpha); },
        std::nullopt, opts, {{b}});
    const double mu = num.value / m.value;
    double err = (num.error + mu * m.error) / m.value;
    // Sensitivity to the center: |d mu / d b| <= alpha mu^{(alpha - 1) / alpha}.
    if (b_err > 0.0 && mu > 0.0)
        err += alpha * std::pow(mu, (alpha - 1.0) / alpha) * b_err;
    return {mu, err};
}

QStats q_covariance(const Density& f, double q, const CenterSpec& center, const NumericOptions& opts)
{
    check_order(q, "q");
    const std::size_t n = f.dim();
    QStats s;
    s.q = q;
    s.q_mass = power_integral(f, q, std::nullopt, opts);
    if (!(s.q_mass.value > 0.0))
        throw NumericalError("escort normalization of " + f.label() + " vanishes");
    const double m = s.q_mass.value;
    for (std::size_t i = 0; i < n; ++i) {
        const Estimate num = weighted_power_integral(
            f, q, [i](std::span<const double> x) { return x[i]; }, std::nullopt, opts);
        const double mean = num.value / m;
        s.q_mean.push_back(mean);
        s.q_mean_error.push_back((num.error + std::fabs(mean) * s.q_mass.error) / m);
    }
    if (center.is_central()) {
        s.center = s.q_mean;
    } else {
        if (center.point.size() != n)
            throw InvalidArgument("explicit center has dimension " + std::to_string(center.point.size()) +
                                  ", density has dimension " + std::to_string(n));
        s.center = center.point;
    }
    const auto ni = static_cast<Eigen::Index>(n);
    s.q_cov = Matrix::Zero(ni, ni);
    s.q_cov_error = Matrix::Zero(ni, ni);
    const std::vector<double>& b = s.center;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const Estimate num = weighted_power_integral(
                f, q, [i, j, &b](std::span<const double> x) { return (x[i] - b[i]) * (x[j] - b[j]); }, std::nullopt,
                opts);
            const double v = num.value / m;
            // At b = E_q[X] the entries are stationary in b, so the mean error drops out to first order.
            const double e = (num.error + std::fabs(v) * s.q_mass.error) / m;
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            s.q_cov(ii, jj) = s.q_cov(jj, ii) = v;
            s.q_cov_error(ii, jj) = s.q_cov_error(jj, ii) = e;
        }
    }
    try {
        s.det.value = spd_determinant(s.q_cov);
        s.det.error = determinant_error(s.q_cov, s.q_cov_error);
    } catch (const SingularMatrixError&) {
        s.singular = true;
        s.det = {0.0, 0.0};
    }
    return s;
}

} // namespace lpq
