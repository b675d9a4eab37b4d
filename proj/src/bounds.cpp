#include "lpq/bounds.hpp"

#include "lpq/entropy.hpp"
#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lpq {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// 1/r with 1/inf = 0.
double reciprocal(double r) { return std::isinf(r) ? 0.0 : 1.0 / r; }

void require_order_pair(const char* what, double q, double r)
{
    if (!(q > 0.0) || std::isinf(q))
        throw InvalidArgument(std::string(what) + " requires a finite q > 0 (got q = " + fmt(q) + ")");
    if (!(q < r))
        throw InvalidArgument(std::string(what) + " requires q < r (got q = " + fmt(q) + ", r = " + fmt(r) + ")");
}

BoundCertificate start(const char* id, const Density& f)
{
    BoundCertificate c;
    c.inequality_id = id;
    c.density_label = f.label();
    c.n = f.dim();
    return c;
}

QStats nonsingular_covariance(const Density& f, double q, const CenterSpec& center, const NumericOptions& opts,
                              const char* what)
{
    QStats s = q_covariance(f, q, center, opts);
    if (s.singular)
        throw SingularMatrixError(std::string(what) + ": escort covariance of order " + fmt(q) + " of " + f.label() +
                                  " is singular");
    return s;
}

// 1/2 log det + log C(n), with its error.
Estimate log_volume_term(const QStats& s, std::size_t n)
{
    return {0.5 * std::log(s.det.value) + std::log(constant_nd(n)), 0.5 * s.det.error / s.det.value};
}

} // namespace

bool BoundCertificate::tight() const { return std::fabs(slack) <= 10.0 * combined_error(); }

std::string BoundCertificate::status() const
{
    if (!satisfied)
        return "violated";
    return tight() ? "tight" : "ok";
}

void BoundCertificate::finalize()
{
    slack = rhs - lhs;
    if (identity)
        satisfied = std::fabs(slack) <= std::max(combined_error(), 1e-6 * std::fabs(rhs));
    else
        satisfied = slack >= -combined_error();
}

double constant_1d(double alpha)
{
    if (!(alpha > 0.0) || std::isinf(alpha))
        throw InvalidArgument("constant_1d requires a finite alpha > 0 (got " + fmt(alpha) + ")");
    return (2.0 / alpha) * std::tgamma(1.0 / alpha) * std::pow(alpha * std::numbers::e, 1.0 / alpha);
}

double constant_nd(std::size_t n)
{
    if (n < 1)
        throw InvalidArgument("constant_nd requires n >= 1");
    return std::pow(2.0 * std::numbers::pi * std::numbers::e, 0.5 * static_cast<double>(n));
}

BoundCertificate theorem1_check(const Density& f, const BoundParams& params, const NumericOptions& opts)
{
    if (f.dim() != 1)
        throw InvalidArgument("thm1 needs a 1-D density (got dimension " + std::to_string(f.dim()) + ")");
    require_order_pair("thm1", params.q, params.r);
    const double q = params.q;
    const double r = params.r;
    const double alpha = params.alpha;
    const double c = constant_1d(alpha);

    BoundCertificate cert = start("thm1", f);
    cert.q = q;
    cert.r = r;
    cert.alpha = alpha;
    const Estimate mu = q_moment(f, {q, alpha, params.center}, opts);
    if (!(mu.value > 0.0))
        throw NumericalError("thm1: q-moment of " + f.label() + " vanishes");
    const Estimate nq = lp_norm(f, q, std::nullopt, opts);
    const Estimate nr = lp_norm(f, r, std::nullopt, opts);
    const double e = 1.0 / q - reciprocal(r);
    const double k = c * std::pow(mu.value, 1.0 / alpha);
    cert.lhs = nq.value;
    cert.lhs_error = nq.error;
    cert.rhs = std::pow(k, e) * nr.value;
    cert.rhs_error = cert.rhs * ((e / alpha) * mu.error / mu.value + (nr.value > 0.0 ? nr.error / nr.value : 0.0));
    cert.notes = "mu=" + fmt(mu.value) + " C=" + fmt(c);
    cert.finalize();
    return cert;
}

BoundCertificate theorem2_check(const Density& f, double q, double r, const CenterSpec& center,
                                const NumericOptions& opts)
{
    require_order_pair("thm2", q, r);
    BoundCertificate cert = start("thm2", f);
    cert.q = q;
    cert.r = r;
    const QStats s = nonsingular_covariance(f, q, center, opts, "thm2");
    const Estimate nq = lp_norm(f, q, std::nullopt, opts);
    const Estimate nr = lp_norm(f, r, std::nullopt, opts);
    const double e = 1.0 / q - reciprocal(r);
    const double k = constant_nd(f.dim()) * std::sqrt(s.det.value);
    cert.lhs = nq.value;
    cert.lhs_error = nq.error;
    cert.rhs = std::pow(k, e) * nr.value;
    cert.rhs_error = cert.rhs * (0.5 * e * s.det.error / s.det.value + (nr.value > 0.0 ? nr.error / nr.value : 0.0));
    cert.notes = "det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

BoundCertificate finite_measure_check(const Density& f, double q, double r, const NumericOptions& opts)
{
    require_order_pair("eq1", q, r);
    if (!f.support().bounded())
        throw InvalidArgument("eq1 needs a density with bounded support (" + f.label() + " is unbounded)");
    const double vol = f.support().volume();
    BoundCertificate cert = start("eq1", f);
    cert.q = q;
    cert.r = r;
    const Estimate nq = lp_norm(f, q, std::nullopt, opts);
    const Estimate nr = lp_norm(f, r, std::nullopt, opts);
    const double factor = std::pow(vol, 1.0 / q - reciprocal(r));
    cert.lhs = nq.value;
    cert.lhs_error = nq.error;
    cert.rhs = factor * nr.value;
    cert.rhs_error = factor * nr.error;
    cert.notes = "measure=" + fmt(vol);
    cert.finalize();
    return cert;
}

BoundCertificate renyi_upper_bound(const Density& f, double p, const NumericOptions& opts)
{
    const EntropyValue h = renyi_entropy(f, p, opts);
    // p > 1 takes q = 1 in the theorem, p < 1 takes q = p.
    const double q = p > 1.0 ? 1.0 : p;
    const QStats s = nonsingular_covariance(f, q, CenterSpec::central(), opts, "renyi");
    const Estimate t = log_volume_term(s, f.dim());
    BoundCertificate cert = start("renyi", f);
    cert.q = p;
    cert.lhs = h.value;
    cert.lhs_error = h.error_estimate;
    cert.rhs = t.value;
    cert.rhs_error = t.error;
    cert.notes = "covariance order " + fmt(q) + " det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

BoundCertificate shannon_upper_bound(const Density& f, const NumericOptions& opts)
{
    const EntropyValue h = shannon_entropy(f, opts);
    const QStats s = nonsingular_covariance(f, 1.0, CenterSpec::central(), opts, "shannon");
    const Estimate t = log_volume_term(s, f.dim());
    BoundCertificate cert = start("shannon", f);
    cert.lhs = h.value;
    cert.lhs_error = h.error_estimate;
    cert.rhs = t.value;
    cert.rhs_error = t.error;
    cert.notes = "det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

BoundCertificate renyi_pair_check(const Density& f, double q, double r, const NumericOptions& opts)
{
    require_order_pair("renyi-pair", q, r);
    const QStats s = nonsingular_covariance(f, q, CenterSpec::central(), opts, "renyi-pair");
    const Estimate nq = lp_norm(f, q, std::nullopt, opts);
    const Estimate nr = lp_norm(f, r, std::nullopt, opts);
    if (!(nq.value > 0.0) || !(nr.value > 0.0))
        throw NumericalError("renyi-pair: norm of " + f.label() + " vanishes");
    const Estimate t = log_volume_term(s, f.dim());
    const double e = 1.0 / q - reciprocal(r);
    BoundCertificate cert = start("renyi-pair", f);
    cert.q = q;
    cert.r = r;
    // ((1 - q) / q) h_q = log ||f||_q, continuous through q = 1 (same for r).
    cert.lhs = std::log(nq.value);
    cert.lhs_error = nq.error / nq.value;
    cert.rhs = std::log(nr.value) + e * t.value;
    cert.rhs_error = nr.error / nr.value + e * t.error;
    cert.notes = "det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

BoundCertificate tsallis_bound_check(const Density& f, double q, const NumericOptions& opts)
{
    const EntropyValue sq = tsallis_entropy(f, q, opts);
    const double cov_order = q > 1.0 ? 1.0 : q;
    const QStats s = nonsingular_covariance(f, cov_order, CenterSpec::central(), opts, "tsallis");
    BoundCertificate cert = start("tsallis", f);
    cert.q = q;
    cert.lhs = q_exp(sq.value, q);
    cert.lhs_error = q_exp_derivative(sq.value, q) * sq.error_estimate;
    cert.rhs = constant_nd(f.dim()) * std::sqrt(s.det.value);
    cert.rhs_error = cert.rhs * 0.5 * s.det.error / s.det.value;
    cert.notes = "S=" + fmt(sq.value) + " covariance order " + fmt(cov_order);
    cert.finalize();
    return cert;
}

BoundCertificate prob_bound_check(const Density& f, const Region& omega, double r, const NumericOptions& opts)
{
    if (!(r > 1.0))
        throw InvalidArgument("prob requires r > 1 (got r = " + fmt(r) + ")");
    if (omega.dim() != f.dim())
        throw InvalidArgument("prob: region dimension does not match density dimension");
    const auto n = static_cast<double>(f.dim());
    const QStats s = nonsingular_covariance(f, 1.0, CenterSpec::central(), opts, "prob");
    const Estimate p = mass(f, omega, opts);
    const Estimate nr = lp_norm(f, r, omega, opts);
    const double lhs_exp = 1.0 + n / 2.0 - n * reciprocal(r) / 2.0;
    const double rhs_exp = 1.0 - reciprocal(r);
    const double k = constant_nd(f.dim()) * std::sqrt(s.det.value);

    BoundCertificate cert = start("prob", f);
    cert.r = r;
    cert.region = omega.describe();
    cert.lhs = p.value > 0.0 ? std::pow(p.value, lhs_exp) : 0.0;
    cert.lhs_error = p.value > 0.0 ? lhs_exp * cert.lhs / p.value * p.error : std::pow(p.error, lhs_exp);
    cert.rhs = std::pow(k, rhs_exp) * nr.value;
    cert.rhs_error = std::pow(k, rhs_exp) * nr.error + cert.rhs * 0.5 * rhs_exp * s.det.error / s.det.value;
    cert.notes = "P=" + fmt(p.value) + " det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

BoundCertificate prob_bound_sup_check(const Density& f, const Region& omega, const NumericOptions& opts)
{
    if (omega.dim() != f.dim())
        throw InvalidArgument("prob-sup: region dimension does not match density dimension");
    const auto n = static_cast<double>(f.dim());
    const QStats s = nonsingular_covariance(f, 1.0, CenterSpec::central(), opts, "prob-sup");
    const Estimate p = mass(f, omega, opts);
    const SupResult sup = ess_sup(f, omega, opts);
    const double e = 2.0 / (n + 2.0);
    const double base = constant_nd(f.dim()) * std::sqrt(s.det.value) * sup.value;

    BoundCertificate cert = start("prob-sup", f);
    cert.region = omega.describe();
    cert.lhs = p.value;
    cert.lhs_error = p.error;
    cert.rhs = std::pow(base, e);
    cert.rhs_error =
        sup.value > 0.0 ? cert.rhs * e * (0.5 * s.det.error / s.det.value + sup.error / sup.value) : 0.0;
    cert.notes = "sup=" + fmt(sup.value) + " det=" + fmt(s.det.value);
    cert.finalize();
    return cert;
}

} // namespace lpq
