#include "lpq/density.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lpq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw InvalidArgument(what);
}

std::string fmt_num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// ----------------------------------------------------------------------------
// Models

class GaussianModel final : public DensityModel {
public:
    GaussianModel(std::vector<double> mean, const Matrix& cov) : mean_(std::move(mean)), n_(mean_.size())
    {
        Eigen::LLT<Matrix> llt(cov);
        const Matrix l = llt.matrixL();
        const Matrix linv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(cov.rows(), cov.cols()));
        linv_.resize(n_ * n_);
        double log_det_l = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            log_det_l += std::log(l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
            for (std::size_t j = 0; j < n_; ++j)
                linv_[i * n_ + j] = linv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        log_norm_ = 0.5 * static_cast<double>(n_) * std::log(2.0 * kPi) + log_det_l;
    }

    double eval(std::span<const double> x) const override
    {
        double q = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j <= i; ++j)
                z += linv_[i * n_ + j] * (x[j] - mean_[j]);
            q += z * z;
        }
        return std::exp(-0.5 * q - log_norm_);
    }

private:
    std::vector<double> mean_;
    std::size_t n_;
    std::vector<double> linv_;
    double log_norm_ = 0.0;
};

class BoxModel final : public DensityModel {
public:
    BoxModel(Box box, double value) : box_(std::move(box)), value_(value) {}
    double eval(std::span<const double> x) const override { return box_.contains(x) ? value_ : 0.0; }

private:
    Box box_;
    double value_;
};

class ExponentialModel final : public DensityModel {
public:
    ExponentialModel(double rate, double loc) : rate_(rate), loc_(loc) {}
    double eval(std::span<const double> x) const override
    {
        return x[0] >= loc_ ? rate_ * std::exp(-rate_ * (x[0] - loc_)) : 0.0;
    }

private:
    double rate_, loc_;
};

class GenGaussianModel final : public DensityModel {
public:
    GenGaussianModel(double mean, double scale, double shape)
        : mean_(mean), scale_(scale), shape_(shape), norm_(shape / (2.0 * scale * std::tgamma(1.0 / shape)))
    {
    }
    double eval(std::span<const double> x) const override
    {
        const double z = std::fabs(x[0] - mean_) / scale_;
        if (shape_ == 1.0)
            return norm_ * std::exp(-z);
        if (shape_ == 2.0)
            return norm_ * std::exp(-z * z);
        return norm_ * std::exp(-std::pow(z, shape_));
    }

private:
    double mean_, scale_, shape_, norm_;
};

class CauchyModel final : public DensityModel {
public:
    CauchyModel(double loc, double scale) : loc_(loc), scale_(scale) {}
    double eval(std::span<const double> x) const override
    {
        const double z = (x[0] - loc_) / scale_;
        return 1.0 / (kPi * scale_ * (1.0 + z * z));
    }

private:
    double loc_, scale_;
};

class MixtureModel final : public DensityModel {
public:
    MixtureModel(std::vector<double> w, std::vector<Density> c) : weights_(std::move(w)), components_(std::move(c)) {}
    double eval(std::span<const double> x) const override
    {
        double s = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i)
            s += weights_[i] * components_[i].eval_unchecked(x);
        return s;
    }

private:
    std::vector<double> weights_;
    std::vector<Density> components_;
};

class GridModel final : public DensityModel {
public:
    GridModel(std::vector<std::vector<double>> axes, std::vector<double> values)
        : axes_(std::move(axes)), values_(std::move(values))
    {
        strides_.assign(axes_.size(), 1);
        for (std::size_t k = axes_.size(); k-- > 1;)
            strides_[k - 1] = strides_[k] * axes_[k].size();
    }

    double eval(std::span<const double> x) const override
    {
        const std::size_t n = axes_.size();
        // Cell index and local coordinate per axis.
        std::size_t base = 0;
        double frac[8];
        for (std::size_t k = 0; k < n; ++k) {
            const auto& ax = axes_[k];
            if (!(x[k] >= ax.front() && x[k] <= ax.back()))
                return 0.0;
            std::size_t i = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), x[k]) - ax.begin());
            i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
            frac[k] = (x[k] - ax[i]) / (ax[i + 1] - ax[i]);
            base += i * strides_[k];
        }
        double s = 0.0;
        const std::size_t corners = std::size_t{1} << n;
        for (std::size_t c = 0; c < corners; ++c) {
            double w = 1.0;
            std::size_t idx = base;
            for (std::size_t k = 0; k < n; ++k) {
                if (c & (std::size_t{1} << k)) {
                    w *= frac[k];
                    idx += strides_[k];
                } else {
                    w *= 1.0 - frac[k];
                }
            }
            if (w != 0.0)
                s += w * values_[idx];
        }
        return s;
    }

private:
    std::vector<std::vector<double>> axes_;
    std::vector<double> values_;
    std::vector<std::size_t> strides_;
};

class AffineModel final : public DensityModel {
public:
    AffineModel(Density base, const Matrix& a, const Vector& m, double factor)
        : base_(std::move(base)), a_(a), m_(m), factor_(factor), n_(static_cast<std::size_t>(a.rows()))
    {
    }
    double eval(std::span<const double> y) const override
    {
        double x[16];
        for (std::size_t i = 0; i < n_; ++i) {
            double s = m_(static_cast<Eigen::Index>(i));
            for (std::size_t j = 0; j < n_; ++j)
                s += a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * y[j];
            x[i] = s;
        }
        return factor_ * base_.eval_unchecked(std::span<const double>(x, n_));
    }

private:
    Density base_;
    Matrix a_;
    Vector m_;
    double factor_;
    std::size_t n_;
};

// ----------------------------------------------------------------------------
// Closed-form helpers

// E|Y - b|^2 = var + (mean - b)^2
std::optional<double> second_moment_about(double mean, double var, std::optional<double> b)
{
    const double d = b ? mean - *b : 0.0;
    return var + d * d;
}

Density::Hints hints_1d(double center, double scale, std::vector<double> breaks = {})
{
    return {{center}, {scale}, {std::move(breaks)}};
}

} // namespace

// ----------------------------------------------------------------------------

SupportDescriptor SupportDescriptor::from_box(Box b)
{
    SupportDescriptor s;
    bool any_finite = false;
    for (std::size_t i = 0; i < b.dim(); ++i)
        any_finite = any_finite || std::isfinite(b.lower[i]) || std::isfinite(b.upper[i]);
    s.kind = b.bounded() ? Kind::box : (any_finite ? Kind::halfspace_product : Kind::all_space);
    s.bounds = std::move(b);
    return s;
}

Density::Density(std::shared_ptr<const DensityModel> model, std::string family, SupportDescriptor support,
                 Hints hints, std::optional<AnalyticOracle> oracle)
    : model_(std::move(model)), family_(std::move(family)), label_(family_), support_(std::move(support)),
      hints_(std::move(hints)), oracle_(std::move(oracle))
{
    const std::size_t n = support_.bounds.dim();
    require(n >= 1, "density dimension must be positive");
    require(n <= 10, "density dimension above 10 is not supported");
    if (hints_.center.size() != n)
        hints_.center.assign(n, 0.0);
    if (hints_.scale.size() != n)
        hints_.scale.assign(n, 1.0);
    hints_.breakpoints.resize(n);
    for (auto& b : hints_.breakpoints)
        b = sorted_unique(std::move(b));
}

double Density::eval(std::span<const double> x) const
{
    if (x.size() != dim())
        throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", density has dimension " +
                              std::to_string(dim()));
    return model_->eval(x);
}

Density Density::with_label(std::string label) const
{
    Density d = *this;
    d.label_ = std::move(label);
    return d;
}

Density Density::with_oracle(std::optional<AnalyticOracle> oracle) const
{
    Density d = *this;
    d.oracle_ = std::move(oracle);
    return d;
}

namespace families {

Density gaussian(std::vector<double> mean, const Matrix& cov)
{
    const std::size_t n = mean.size();
    require(n >= 1, "gaussian mean must be non-empty");
    require(cov.rows() == static_cast<Eigen::Index>(n) && cov.cols() == static_cast<Eigen::Index>(n),
            "gaussian cov must be " + std::to_string(n) + "x" + std::to_string(n));
    require(cov.allFinite() && std::all_of(mean.begin(), mean.end(), [](double v) { return std::isfinite(v); }),
            "gaussian parameters must be finite");
    require(is_symmetric(cov), "gaussian cov must be symmetric");
    Eigen::LLT<Matrix> llt(cov);
    require(llt.info() == Eigen::Success && cov.diagonal().minCoeff() > 0.0,
            "gaussian cov must be positive definite");
    const double det = cov.determinant();
    require(det > 0.0, "gaussian cov must be positive definite");

    Density::Hints h;
    h.center = mean;
    for (std::size_t i = 0; i < n; ++i)
        h.scale.push_back(std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));

    const double dn = static_cast<double>(n);
    AnalyticOracle o;
    o.known_lp_norm = [dn, det](double p) -> std::optional<double> {
        if (std::isinf(p))
            return std::pow(2.0 * kPi, -dn / 2.0) / std::sqrt(det);
        return std::pow(2.0 * kPi, dn * (1.0 - p) / (2.0 * p)) * std::pow(det, (1.0 - p) / (2.0 * p)) *
               std::pow(p, -dn / (2.0 * p));
    };
    o.known_entropy = [dn, det](double p) -> std::optional<double> {
        const double base = 0.5 * std::log(det) + 0.5 * dn * std::log(2.0 * kPi);
        if (p == 1.0)
            return base + 0.5 * dn;
        if (std::isinf(p))
            return base;
        return base + 0.5 * dn * std::log(p) / (p - 1.0);
    };
    if (n == 1) {
        const double mu = mean[0];
        const double var = cov(0, 0);
        o.known_q_mean = [mu](double) -> std::optional<double> { return mu; };
        o.known_q_moment = [mu, var](double q, double alpha, std::optional<double> b) -> std::optional<double> {
            const double s2 = var / q;
            if (!b || *b == mu)
                return std::pow(2.0 * s2, alpha / 2.0) * std::tgamma((alpha + 1.0) / 2.0) / std::sqrt(kPi);
            if (alpha == 2.0)
                return second_moment_about(mu, s2, b);
            return std::nullopt;
        };
    }
    auto model = std::make_shared<GaussianModel>(mean, cov);
    return Density(std::move(model), "gaussian", SupportDescriptor::from_box(Box::unbounded(n)), std::move(h), o);
}

namespace {

Box checked_box(std::vector<double> lower, std::vector<double> upper, const std::string& family)
{
    require(!lower.empty() && lower.size() == upper.size(), family + " box must have matching, non-empty bounds");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        require(std::isfinite(lower[i]) && std::isfinite(upper[i]), family + " box must be bounded");
        require(lower[i] < upper[i], family + " box needs lower < upper on every axis");
    }
    return Box{std::move(lower), std::move(upper)};
}

Density box_density(Box box, double value, std::string family, bool normalized)
{
    const std::size_t n = box.dim();
    const double vol = box.volume();
    Density::Hints h;
    for (std::size_t i = 0; i < n; ++i) {
        h.center.push_back(0.5 * (box.lower[i] + box.upper[i]));
        h.scale.push_back(0.5 * (box.upper[i] - box.lower[i]));
        h.breakpoints.push_back({box.lower[i], box.upper[i]});
    }
    AnalyticOracle o;
    o.known_lp_norm = [vol, value](double p) -> std::optional<double> {
        if (std::isinf(p))
            return value;
        return value * std::pow(vol, 1.0 / p);
    };
    if (normalized)
        o.known_entropy = [vol](double) -> std::optional<double> { return std::log(vol); };
    if (n == 1) {
        const double a = box.lower[0];
        const double b = box.upper[0];
        o.known_q_mean = [a, b](double) -> std::optional<double> { return 0.5 * (a + b); };
        o.known_q_moment = [a, b](double, double alpha, std::optional<double> c) -> std::optional<double> {
            const double w = b - a;
            const double center = c ? *c : 0.5 * (a + b);
            const double e = alpha + 1.0;
            if (center <= a)
                return (std::pow(b - center, e) - std::pow(a - center, e)) / (e * w);
            if (center >= b)
                return (std::pow(center - a, e) - std::pow(center - b, e)) / (e * w);
            return (std::pow(center - a, e) + std::pow(b - center, e)) / (e * w);
        };
    }
    auto model = std::make_shared<BoxModel>(box, value);
    return Density(std::move(model), std::move(family), SupportDescriptor::from_box(std::move(box)), std::move(h), o);
}

} // namespace

Density uniform(std::vector<double> lower, std::vector<double> upper)
{
    Box box = checked_box(std::move(lower), std::move(upper), "uniform");
    const double vol = box.volume();
    return box_density(std::move(box), 1.0 / vol, "uniform", true);
}

Density indicator(std::vector<double> lower, std::vector<double> upper, double value)
{
    require(std::isfinite(value) && value != 0.0, "indicator value must be finite and non-zero");
    Box box = checked_box(std::move(lower), std::move(upper), "indicator");
    return box_density(std::move(box), std::fabs(value), "indicator", false);
}

Density exponential(double rate, double loc)
{
    require(std::isfinite(rate) && rate > 0.0, "exponential rate must be positive");
    require(std::isfinite(loc), "exponential loc must be finite");
    AnalyticOracle o;
    o.known_lp_norm = [rate](double p) -> std::optional<double> {
        if (std::isinf(p))
            return rate;
        return std::pow(rate, (p - 1.0) / p) * std::pow(p, -1.0 / p);
    };
    o.known_entropy = [rate](double p) -> std::optional<double> {
        if (p == 1.0)
            return 1.0 - std::log(rate);
        if (std::isinf(p))
            return -std::log(rate);
        return -std::log(rate) + std::log(p) / (p - 1.0);
    };
    o.known_q_mean = [rate, loc](double q) -> std::optional<double> { return loc + 1.0 / (q * rate); };
    o.known_q_moment = [rate, loc](double q, double alpha, std::optional<double> b) -> std::optional<double> {
        const double k = q * rate; // escort is Exp(q * rate)
        if (b && *b == loc)
            return std::tgamma(alpha + 1.0) / std::pow(k, alpha);
        if (alpha == 2.0)
            return second_moment_about(loc + 1.0 / k, 1.0 / (k * k), b ? b : std::optional<double>(loc + 1.0 / k));
        if (alpha == 1.0 && !b)
            return 2.0 / (std::numbers::e * k);
        return std::nullopt;
    };
    Box support{{loc}, {kInf}};
    return Density(std::make_shared<ExponentialModel>(rate, loc), "exponential",
                   SupportDescriptor::from_box(std::move(support)), hints_1d(loc, 1.0 / rate, {loc}), o);
}

Density generalized_gaussian(double mean, double scale, double shape)
{
    require(std::isfinite(mean), "generalized gaussian mean must be finite");
    require(std::isfinite(scale) && scale > 0.0, "generalized gaussian scale must be positive");
    require(std::isfinite(shape) && shape > 0.0, "generalized gaussian shape must be positive");
    const double c = shape / (2.0 * scale * std::tgamma(1.0 / shape));
    AnalyticOracle o;
    o.known_lp_norm = [c, shape](double p) -> std::optional<double> {
        if (std::isinf(p))
            return c;
        return std::pow(c, (p - 1.0) / p) * std::pow(p, -1.0 / (shape * p));
    };
    o.known_entropy = [c, shape](double p) -> std::optional<double> {
        if (p == 1.0)
            return 1.0 / shape - std::log(c);
        if (std::isinf(p))
            return -std::log(c);
        return -std::log(c) + std::log(p) / (shape * (p - 1.0));
    };
    o.known_q_mean = [mean](double) -> std::optional<double> { return mean; };
    o.known_q_moment = [mean, scale, shape](double q, double alpha, std::optional<double> b) -> std::optional<double> {
        const double a = scale * std::pow(q, -1.0 / shape); // escort scale
        const double central = std::pow(a, alpha) * std::tgamma((alpha + 1.0) / shape) / std::tgamma(1.0 / shape);
        if (!b || *b == mean)
            return central;
        if (alpha == 2.0)
            return second_moment_about(mean, central, b);
        return std::nullopt;
    };
    return Density(std::make_shared<GenGaussianModel>(mean, scale, shape), "gen_gaussian",
                   SupportDescriptor::from_box(Box::unbounded(1)), hints_1d(mean, scale, {mean}), o);
}

Density laplace(double mean, double scale)
{
    require(std::isfinite(scale) && scale > 0.0, "laplace scale must be positive");
    // Laplace(mean, b) is the generalized Gaussian with shape 1 and scale b.
    Density d = generalized_gaussian(mean, scale, 1.0);
    return Density(std::make_shared<GenGaussianModel>(mean, scale, 1.0), "laplace", d.support(), d.hints(),
                   *d.oracle());
}

Density cauchy(double loc, double scale)
{
    require(std::isfinite(loc), "cauchy loc must be finite");
    require(std::isfinite(scale) && scale > 0.0, "cauchy scale must be positive");
    AnalyticOracle o;
    o.known_lp_norm = [scale](double p) -> std::optional<double> {
        if (std::isinf(p))
            return 1.0 / (kPi * scale);
        if (p <= 0.5)
            return kInf;
        const double integral =
            std::pow(kPi * scale, -p) * scale * std::sqrt(kPi) * std::tgamma(p - 0.5) / std::tgamma(p);
        return std::pow(integral, 1.0 / p);
    };
    o.known_entropy = [scale](double p) -> std::optional<double> {
        if (p == 1.0)
            return std::log(4.0 * kPi * scale);
        return std::nullopt;
    };
    o.known_q_mean = [loc](double q) -> std::optional<double> {
        if (q > 1.0)
            return loc;
        return std::nullopt;
    };
    return Density(std::make_shared<CauchyModel>(loc, scale), "cauchy",
                   SupportDescriptor::from_box(Box::unbounded(1)), hints_1d(loc, scale), o);
}

Density mixture(std::vector<double> weights, std::vector<Density> components)
{
    require(!components.empty(), "mixture needs at least one component");
    require(weights.size() == components.size(), "mixture needs one weight per component");
    double total = 0.0;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, "mixture weights must be non-negative");
        total += w;
    }
    require(std::fabs(total - 1.0) <= 1e-12, "weights must sum to 1 (got " + fmt_num(total) + ")");
    const std::size_t n = components.front().dim();
    for (const Density& c : components)
        require(c.dim() == n, "mixture components must share a dimension");

    Box bounds{std::vector<double>(n, kInf), std::vector<double>(n, -kInf)};
    Density::Hints h;
    h.center.assign(n, 0.0);
    h.scale.assign(n, 0.0);
    h.breakpoints.resize(n);
    for (std::size_t k = 0; k < components.size(); ++k) {
        const Density& c = components[k];
        for (std::size_t i = 0; i < n; ++i) {
            bounds.lower[i] = std::min(bounds.lower[i], c.support().bounds.lower[i]);
            bounds.upper[i] = std::max(bounds.upper[i], c.support().bounds.upper[i]);
            h.center[i] += weights[k] * c.hints().center[i];
            const auto& b = c.hints().breakpoints[i];
            h.breakpoints[i].insert(h.breakpoints[i].end(), b.begin(), b.end());
        }
    }
    for (const Density& c : components)
        for (std::size_t i = 0; i < n; ++i)
            h.scale[i] = std::max(h.scale[i], std::fabs(c.hints().center[i] - h.center[i]) + c.hints().scale[i]);

    auto model = std::make_shared<MixtureModel>(std::move(weights), std::move(components));
    return Density(std::move(model), "mixture", SupportDescriptor::from_box(std::move(bounds)), std::move(h));
}

Density grid(std::vector<std::vector<double>> axes, std::vector<double> values)
{
    require(!axes.empty() && axes.size() <= 8, "grid needs between 1 and 8 axes");
    std::size_t count = 1;
    Box box;
    Density::Hints h;
    for (const auto& ax : axes) {
        require(ax.size() >= 2, "each grid axis needs at least two nodes");
        for (std::size_t i = 0; i < ax.size(); ++i) {
            require(std::isfinite(ax[i]), "grid nodes must be finite");
            require(i == 0 || ax[i] > ax[i - 1], "grid nodes must be strictly increasing");
        }
        count *= ax.size();
        box.lower.push_back(ax.front());
        box.upper.push_back(ax.back());
        h.center.push_back(0.5 * (ax.front() + ax.back()));
        h.scale.push_back(0.5 * (ax.back() - ax.front()));
        h.breakpoints.push_back(ax);
    }
    require(values.size() == count, "grid needs " + std::to_string(count) + " values, got " +
                                        std::to_string(values.size()));
    for (double& v : values) {
        require(std::isfinite(v), "grid values must be finite");
        v = std::fabs(v);
    }
    auto model = std::make_shared<GridModel>(std::move(axes), std::move(values));
    return Density(std::move(model), "grid", SupportDescriptor::from_box(std::move(box)), std::move(h));
}

Density affine(const Density& base, const Matrix& a, const Vector& m, double factor)
{
    const std::size_t n = base.dim();
    const auto ni = static_cast<Eigen::Index>(n);
    require(a.rows() == ni && a.cols() == ni && m.size() == ni, "affine map dimension mismatch");
    require(std::fabs(a.determinant()) > 0.0, "affine map must be invertible");
    const Matrix w = a.inverse(); // y = W (x - m)
    const bool diagonal = (a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;

    Box src = base.support().bounds;
    Box dst = Box::unbounded(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double c = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (c == 0.0)
                continue;
            const double a1 = c * (src.lower[j] - m(static_cast<Eigen::Index>(j)));
            const double a2 = c * (src.upper[j] - m(static_cast<Eigen::Index>(j)));
            lo += std::min(a1, a2);
            hi += std::max(a1, a2);
        }
        dst.lower[i] = std::isnan(lo) ? -kInf : lo;
        dst.upper[i] = std::isnan(hi) ? kInf : hi;
    }

    Density::Hints h;
    const Vector c0 = Eigen::Map<const Vector>(base.hints().center.data(), ni);
    const Vector yc = w * (c0 - m);
    h.center.assign(yc.data(), yc.data() + n);
    Vector s2(ni);
    for (std::size_t j = 0; j < n; ++j)
        s2(static_cast<Eigen::Index>(j)) = base.hints().scale[j] * base.hints().scale[j];
    const Matrix sc = w * s2.asDiagonal() * w.transpose();
    for (std::size_t i = 0; i < n; ++i)
        h.scale.push_back(std::sqrt(sc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
    h.breakpoints.resize(n);
    if (diagonal) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            for (double b : base.hints().breakpoints[i])
                h.breakpoints[i].push_back((b - m(ii)) / a(ii, ii));
        }
    }
    auto model = std::make_shared<AffineModel>(base, a, m, std::fabs(factor));
    return Density(std::move(model), "affine(" + base.family() + ")", SupportDescriptor::from_box(std::move(dst)),
                   std::move(h))
        .with_label(base.label() + "|affine");
}

} // namespace families

} // namespace lpq
