#pragma once

#include "lpq/region.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lpq {

enum class IntegrationMethod { adaptive_1d, tensor_grid, qmc };

std::string_view method_name(IntegrationMethod m);

/// One integral of a scalar integrand over a box domain, optionally restricted to a region.
///
/// Empty `domain` bounds mean all of R^dim. `breakpoints` are per-axis points
/// where the integrand is not smooth; the 1-D rule splits there. `center` and
/// `scale` position the unbounded-domain transforms.
struct IntegrationRequest {
    std::function<double(std::span<const double>)> integrand;
    std::size_t dim = 1;
    Box domain;
    std::optional<Region> region;
    std::vector<std::vector<double>> breakpoints;
    std::vector<double> center;
    std::vector<double> scale;
    double tolerance = 0.0;     // relative; 0 selects default_tolerance(dim)
    double abs_tolerance = 0.0; // accepted absolute error regardless of the value
    std::size_t budget = 0;     // integrand evaluations; 0 selects default_budget(dim)
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    std::optional<IntegrationMethod> method; // override the by-dimension choice
};

struct IntegrationResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    IntegrationMethod method = IntegrationMethod::adaptive_1d;
    double abs_integral = 0.0; // estimate of the integral of |integrand|
};

/// 1e-9 for n = 1, 1e-7 for n in {2, 3}, 1e-3 (statistical) above.
double default_tolerance(std::size_t dim);
std::size_t default_budget(std::size_t dim);

/// Relative-error floor used when normalizing by a vanishing integral.
inline constexpr double kRelativeFloor = 1e-300;

/// Integrates req.integrand over domain ∩ region.
///
/// n = 1: globally adaptive Gauss-Kronrod (10/21) with bisection; the real line
/// is mapped to (-1, 1) by x = c + s t / (1 - t^2), half-lines by x = a ± s t / (1 - t).
/// n = 2, 3: iterated adaptive rule (one adaptive 1-D rule per axis); inner
/// errors are carried into the outer estimate.
/// n > 3: randomized quasi-Monte Carlo (scrambled Halton, 16 replicates);
/// abs_error_estimate is the replicate standard error.
///
/// A result is converged when abs_error_estimate <= max(tol * max(|value|, 1e-300),
/// abs_tolerance, 100 eps * abs_integral); the last term is the cancellation limit
/// of floating-point summation. Budget exhaustion returns converged = false.
/// Throws NumericalError when the integrand yields NaN.
IntegrationResult integrate(const IntegrationRequest& req);

/// Heuristic: integrates |integrand| over domain ∩ [c - R, c + R]^n for
/// R = 16 s * 2^k, k = 0..4, and reports true when the last three increments are
/// all significant and none shrinks below 3/4 of the previous one. Misses
/// divergences slower than that (e.g. log-log); false positives need tails decaying
/// slower than |x|^-1.4.
bool detect_divergence(const IntegrationRequest& req);

namespace detail {
IntegrationResult integrate_qmc(const IntegrationRequest& req, const Box& domain);
}

} // namespace lpq
