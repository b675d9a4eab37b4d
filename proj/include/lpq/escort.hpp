#pragma once

#include "lpq/density.hpp"
#include "lpq/integrate.hpp"
#include "lpq/linalg.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lpq {

/// A value together with a first-order absolute error estimate.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// How ||f||_inf is located.
enum class SupMethod {
    automatic, // oracle peak when available and the region is all of R^n, else search
    search,    // always grid search + local refinement
};

/// Numerical knobs shared by every escort, entropy and bound operation.
struct NumericOptions {
    double rel_tol = 0.0;   // 0: integrate's per-dimension default
    std::size_t budget = 0; // 0: integrate's per-dimension default
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    SupMethod sup = SupMethod::automatic;
};

/// Moment center b: an explicit point or the escort mean E_q[X].
struct CenterSpec {
    enum class Kind { central, explicit_point };

    Kind kind = Kind::central;
    std::vector<double> point;

    static CenterSpec central() { return {}; }
    static CenterSpec at(std::vector<double> b) { return {Kind::explicit_point, std::move(b)}; }
    bool is_central() const { return kind == Kind::central; }
};

struct MomentSpec {
    double q = 1.0;
    double alpha = 2.0;
    CenterSpec center;
};

/// Escort statistics of order q.
struct QStats {
    double q = 1.0;
    Estimate q_mass;                  // integral of |f|^q
    std::vector<double> q_mean;       // E_q[X]
    std::vector<double> q_mean_error;
    std::vector<double> center;       // the b used for q_cov
    Matrix q_cov;                     // E_q[(X - b)(X - b)^T]
    Matrix q_cov_error;               // per-entry absolute errors
    Estimate det;                     // det q_cov (0 when singular)
    bool singular = false;
};

/// The integral of w(x) |f(x)|^p over Omega (all of R^n when omitted).
/// Throws DivergenceError when the integral diverges and NumericalError when it fails to converge.
Estimate weighted_power_integral(const Density& f, double p, const std::function<double(std::span<const double>)>& w,
                                 const std::optional<Region>& omega, const NumericOptions& opts,
                                 std::vector<std::vector<double>> extra_breaks = {});

/// The integral of |f|^p over Omega.
Estimate power_integral(const Density& f, double p, const std::optional<Region>& omega = std::nullopt,
                        const NumericOptions& opts = {});

/// P(Omega) = integral of |f| over Omega.
Estimate mass(const Density& f, const std::optional<Region>& omega = std::nullopt, const NumericOptions& opts = {});

/// ||f I_Omega||_p for p in (0, inf]. p = inf is the essential supremum.
Estimate lp_norm(const Density& f, double p, const std::optional<Region>& omega = std::nullopt,
                 const NumericOptions& opts = {});

/// Location and value of sup |f| over Omega.
struct SupResult {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> argmax;
    bool from_oracle = false;
};

/// Essential supremum of |f| over Omega: coarse grid over the support (infinite
/// sides replaced by center +- 12 scale), then compass search from the best
/// separated grid points. The oracle peak is used under SupMethod::automatic
/// when Omega is all of R^n.
SupResult ess_sup(const Density& f, const std::optional<Region>& omega = std::nullopt,
                  const NumericOptions& opts = {});

/// E_q[X], each component with its error.
std::vector<Estimate> q_expectation(const Density& f, double q, const NumericOptions& opts = {});

/// mu_{q,alpha} = E_q|X - b|^alpha for 1-D f.
Estimate q_moment(const Density& f, const MomentSpec& spec, const NumericOptions& opts = {});

/// Sigma_{q,b} = E_q[(X - b)(X - b)^T] with its determinant. A determinant
/// below 1e-300 or an eigenvalue below 1e-14 trace marks the result singular.
QStats q_covariance(const Density& f, double q, const CenterSpec& center = CenterSpec::central(),
                    const NumericOptions& opts = {});

/// IntegrationRequest defaults derived from a density's support and hints.
IntegrationRequest make_request(const Density& f, const NumericOptions& opts);

} // namespace lpq
