#pragma once

#include "lpq/density.hpp"
#include "lpq/escort.hpp"

#include <optional>

namespace lpq {

/// An entropy in nats.
struct EntropyValue {
    enum class Kind { renyi, shannon, tsallis };

    Kind kind = Kind::shannon;
    std::optional<double> order; // p or q; empty for Shannon
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Throws InvalidArgument unless the integral of |f| is 1 within 1e-6 relative.
void require_normalized(const Density& f, const NumericOptions& opts = {});

/// h_p = (p / (1 - p)) log ||f||_p; p = inf gives -log ||f||_inf.
/// Throws InvalidArgument for |p - 1| < 1e-6 (use shannon_entropy).
EntropyValue renyi_entropy(const Density& f, double p, const NumericOptions& opts = {});

/// -integral of f log f, with 0 log 0 = 0.
EntropyValue shannon_entropy(const Density& f, const NumericOptions& opts = {});

/// S_q = (1 - integral of f^q) / (q - 1). Throws InvalidArgument for |q - 1| < 1e-6.
EntropyValue tsallis_entropy(const Density& f, double q, const NumericOptions& opts = {});

/// exp_q(x) = [1 + (1 - q) x]^{1 / (1 - q)}; exp(x) at q = 1. When the bracket is
/// not positive the result is 0 if 1 / (1 - q) > 0 and +inf otherwise.
double q_exp(double x, double q);

/// d exp_q(x) / dx = exp_q(x)^q inside the natural domain.
double q_exp_derivative(double x, double q);

} // namespace lpq
