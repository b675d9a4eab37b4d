#pragma once

#include "lpq/linalg.hpp"
#include "lpq/region.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lpq {

/// Where a density may be non-zero. `bounds` over-approximates {x : f(x) > 0}.
struct SupportDescriptor {
    enum class Kind { all_space, box, halfspace_product };

    Kind kind = Kind::all_space;
    Box bounds;

    static SupportDescriptor from_box(Box b);
    bool bounded() const { return kind == Kind::box; }
    double volume() const { return bounds.volume(); }
};

/// Closed forms attached to the built-in families. Each entry returns nullopt
/// when the family has no closed form for the given arguments.
struct AnalyticOracle {
    /// ||f||_p for p in (0, inf]; p = inf gives the peak value.
    std::function<std::optional<double>(double p)> known_lp_norm;
    /// 1-D escort moment E_q|X - b|^alpha; b = nullopt means the central moment.
    std::function<std::optional<double>(double q, double alpha, std::optional<double> b)> known_q_moment;
    /// Renyi entropy of order p in nats; p = 1 gives the Shannon entropy.
    std::function<std::optional<double>(double p)> known_entropy;
    /// 1-D escort mean E_q[X].
    std::function<std::optional<double>(double q)> known_q_mean;
};

/// Evaluable |f| on R^n. Implementations must be pure and thread-safe.
class DensityModel {
public:
    virtual ~DensityModel() = default;
    virtual double eval(std::span<const double> x) const = 0;
};

/// A non-negative measurable function on R^n: the |f| every norm, moment and
/// entropy in this library is computed from. Immutable value type.
///
/// Besides pointwise evaluation a density carries a support descriptor,
/// per-axis breakpoints (where f is non-smooth), a location/scale hint used by
/// the unbounded-domain transforms, and optionally an analytic oracle.
class Density {
public:
    struct Hints {
        std::vector<double> center;
        std::vector<double> scale;
        std::vector<std::vector<double>> breakpoints; // per axis
    };

    Density(std::shared_ptr<const DensityModel> model, std::string family, SupportDescriptor support,
            Hints hints, std::optional<AnalyticOracle> oracle = std::nullopt);

    std::size_t dim() const { return support_.bounds.dim(); }
    const std::string& family() const { return family_; }
    const std::string& label() const { return label_; }
    const SupportDescriptor& support() const { return support_; }
    const AnalyticOracle* oracle() const { return oracle_ ? &*oracle_ : nullptr; }
    const Hints& hints() const { return hints_; }

    /// |f(x)|. Throws InvalidArgument on a dimension mismatch.
    double eval(std::span<const double> x) const;
    double operator()(std::span<const double> x) const { return eval(x); }
    /// |f(x)| without the dimension check, for inner loops.
    double eval_unchecked(std::span<const double> x) const { return model_->eval(x); }

    Density with_label(std::string label) const;
    /// Replaces the oracle (used when a transform keeps some closed forms).
    Density with_oracle(std::optional<AnalyticOracle> oracle) const;

private:
    std::shared_ptr<const DensityModel> model_;
    std::string family_;
    std::string label_;
    SupportDescriptor support_;
    Hints hints_;
    std::optional<AnalyticOracle> oracle_;
};

/// Built-in families. All constructors validate their parameters and throw InvalidArgument.
namespace families {

Density gaussian(std::vector<double> mean, const Matrix& cov);
Density uniform(std::vector<double> lower, std::vector<double> upper);
/// value * I_box (not normalized).
Density indicator(std::vector<double> lower, std::vector<double> upper, double value = 1.0);
Density exponential(double rate, double loc = 0.0);
Density laplace(double mean, double scale);
/// shape/(2 a Gamma(1/shape)) exp(-(|x - mean|/a)^shape); shape 2 is Gaussian, 1 is Laplace.
Density generalized_gaussian(double mean, double scale, double shape);
Density cauchy(double loc, double scale);
Density mixture(std::vector<double> weights, std::vector<Density> components);
/// Multilinear interpolation on a tensor grid; zero outside the grid box.
/// `values` is row-major with the last axis fastest. Negative values are stored as |v|.
Density grid(std::vector<std::vector<double>> axes, std::vector<double> values);
/// y -> factor * base(A y + m), the pushforward used for whitening.
Density affine(const Density& base, const Matrix& a, const Vector& m, double factor);

} // namespace families

/// Builds a density from the documented JSON spec (see README, "Density specs").
Density parse_density_spec(std::string_view spec_text);
Density density_from_json(const nlohmann::json& j);

/// Convenience for 1-D densities.
inline double eval_density(const Density& d, double x) { return d.eval(std::span<const double>(&x, 1)); }
inline double eval_density(const Density& d, std::span<const double> x) { return d.eval(x); }

} // namespace lpq
