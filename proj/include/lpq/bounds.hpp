#pragma once

#include "lpq/density.hpp"
#include "lpq/escort.hpp"
#include "lpq/region.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace lpq {

/// 0 < q < r <= inf; alpha is used by the 1-D theorem only.
struct BoundParams {
    double q = 1.0;
    double r = 2.0;
    double alpha = 2.0;
    CenterSpec center;
};

/// One evaluated inequality lhs <= rhs.
struct BoundCertificate {
    std::string inequality_id;
    std::string density_label;
    std::size_t n = 1;
    std::optional<double> q;
    std::optional<double> r;
    std::optional<double> alpha;
    std::string region; // description of Omega, empty when unused
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    double lhs_error = 0.0;
    double rhs_error = 0.0;
    bool satisfied = false;
    bool identity = false; // lhs = rhs is expected rather than lhs <= rhs
    std::string notes;

    double combined_error() const { return lhs_error + rhs_error; }
    /// |slack| <= 10 combined error.
    bool tight() const;
    /// "ok", "tight" or "violated".
    std::string status() const;
    /// Sets slack and satisfied from lhs, rhs and the errors. An inequality is
    /// satisfied when slack >= -(lhs_error + rhs_error); an identity when
    /// |slack| <= max(lhs_error + rhs_error, 1e-6 |rhs|).
    void finalize();
};

/// C(alpha) = (2 / alpha) Gamma(1 / alpha) (alpha e)^{1 / alpha}.
double constant_1d(double alpha);
/// C(n) = (2 pi e)^{n / 2}.
double constant_nd(std::size_t n);

/// ||f||_q <= (C(alpha) mu_{q,alpha}^{1/alpha})^{1/q - 1/r} ||f||_r for 1-D f.
BoundCertificate theorem1_check(const Density& f, const BoundParams& params, const NumericOptions& opts = {});

/// ||f||_q <= (C(n) det(Sigma_{q,b})^{1/2})^{1/q - 1/r} ||f||_r.
BoundCertificate theorem2_check(const Density& f, double q, double r, const CenterSpec& center = CenterSpec::central(),
                                const NumericOptions& opts = {});

/// ||f||_q <= vol(S)^{1/q - 1/r} ||f||_r for f supported on a bounded box S.
BoundCertificate finite_measure_check(const Density& f, double q, double r, const NumericOptions& opts = {});

/// h_p <= 1/2 log det Sigma + log C(n) for p > 1 and 1/2 log det Sigma_p + log C(n) for p < 1.
BoundCertificate renyi_upper_bound(const Density& f, double p, const NumericOptions& opts = {});

/// h <= 1/2 log det Sigma + log C(n).
BoundCertificate shannon_upper_bound(const Density& f, const NumericOptions& opts = {});

/// ((1 - q) / q) h_q <= ((1 - r) / r) h_r + (1/q - 1/r)(1/2 log det Sigma_q + log C(n)),
/// evaluated in the form log ||f||_q <= log ||f||_r + ..., which is finite at order 1.
BoundCertificate renyi_pair_check(const Density& f, double q, double r, const NumericOptions& opts = {});

/// exp_q(S_q) <= C(n) det(Sigma)^{1/2} for q > 1 and C(n) det(Sigma_q)^{1/2} for q < 1.
BoundCertificate tsallis_bound_check(const Density& f, double q, const NumericOptions& opts = {});

/// P(Omega)^{1 + n/2 - n/(2r)} <= (C(n) det(Sigma_f)^{1/2})^{1 - 1/r} ||f I_Omega||_r, r > 1.
BoundCertificate prob_bound_check(const Density& f, const Region& omega, double r, const NumericOptions& opts = {});

/// P(Omega) <= (C(n) det(Sigma_f)^{1/2} sup_Omega f)^{2 / (n + 2)}.
BoundCertificate prob_bound_sup_check(const Density& f, const Region& omega, const NumericOptions& opts = {});

} // namespace lpq
