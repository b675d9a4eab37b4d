#pragma once

#include "lpq/bounds.hpp"
#include "lpq/density.hpp"
#include "lpq/escort.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace lpq {

/// Parameters of the Hoelder witness used in the proof of the 1-D and n-D theorems.
struct ProofChainParams {
    BoundParams bound; // q, r (finite), alpha, center
    double s = 2.0;    // r / q
    double t = 2.0;    // conjugate: 1/s + 1/t = 1
    double beta = 0.5;

    /// beta = 0 selects the optimum 1/alpha (1/2 for the n-D chain).
    static ProofChainParams make(double q, double r, double alpha, CenterSpec center = CenterSpec::central(),
                                 double beta = 0.0);
    /// phi_t(x) = exp(-(beta / t)(x - anchor)); anchor is 1 in 1-D and n in n-D.
    double phi(double x, double anchor = 1.0) const;
};

struct BetaScanPoint {
    double beta = 0.0;
    double value = 0.0; // exp(beta) beta^{-1/alpha}
};

/// lower <= V <= upper, instantiated numerically.
struct ProofChainResult {
    ProofChainParams params;
    Estimate lower; // ||f||_q^q
    Estimate v;     // integral of f^q phi_t(...)
    Estimate upper; // ||f||_r^q (K_beta scale)^{1/t}
    double moment = 0.0; // mu_{q,alpha} (1-D) or det Sigma_{q,b} (n-D)
    std::vector<BetaScanPoint> beta_scan;
    bool beta_optimum_ok = false; // the scan is minimal at the optimum
    BoundCertificate lower_cert;  // id proof-lower: lower <= V
    BoundCertificate upper_cert;  // id proof-upper: V <= upper
    bool ok() const { return lower_cert.satisfied && upper_cert.satisfied && beta_optimum_ok; }
};

/// 1-D chain with phi_t(mu^{-1} |x - b|^alpha). Requires finite r > q.
ProofChainResult proof_chain_check(const Density& f, const ProofChainParams& params, const NumericOptions& opts = {});

/// n-D chain with phi_t((x - b)^T Sigma_{q,b}^{-1} (x - b)) and anchor n; alpha is ignored.
ProofChainResult proof_chain_check_nd(const Density& f, const ProofChainParams& params,
                                      const NumericOptions& opts = {});

/// Whitening psi(x) = Sigma_f^{-1/2}(x - E_f[X]) of g = f I_Omega and the identity
/// ||g_hat||_r = det(Sigma_f)^{(1 - 1/r)/2} ||g||_r.
struct WhitenResult {
    Estimate whitened_norm;  // ||g_hat||_r over psi(Omega)
    Estimate original_norm;  // ||g||_r over Omega
    double det = 0.0;        // det Sigma_f
    std::vector<double> mean;
    Matrix sqrt_cov;         // Sigma_f^{1/2}
    BoundCertificate cert;   // id whiten, an identity
};

WhitenResult whiten(const Density& f, const Region& omega, double r, const NumericOptions& opts = {});

/// y -> det(Sigma)^{1/2} f(Sigma^{1/2} y + mean), the whitened density.
Density whitened_density(const Density& f, const NumericOptions& opts = {});

/// sum_i integral y_i^2 f_hat(y) dy, which equals n; reported as identity certificate "trace".
BoundCertificate trace_identity_check(const Density& f, const NumericOptions& opts = {});

/// det(m) <= (tr(m) / n)^n. Throws InvalidArgument for non-symmetric or indefinite m.
BoundCertificate gm_am_check(const Matrix& m);

/// Symmetric PSD matrix A A^T with entries of A uniform in [-1, 1] from the given generator state.
Matrix random_psd(std::uint64_t seed, std::size_t n);

struct SweepConfig {
    std::vector<nlohmann::json> densities; // density specs
    std::vector<double> q_grid;
    std::vector<double> r_grid;
    std::vector<double> alpha_grid;
    std::vector<std::string> inequalities;
    std::vector<nlohmann::json> regions; // region specs; {"kind": "all"} matches any dimension
    CenterSpec center;
    double rel_tol = 0.0;
    std::size_t budget = 0;
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    std::size_t threads = 0; // 0: LPQ_THREADS, else hardware concurrency
    std::string output;      // report path; empty for none
    std::string plot_dir;    // slack matrices; empty for none

    NumericOptions numeric() const;
};

/// Inequality ids accepted in sweeps and by the CLI.
const std::vector<std::string>& inequality_ids();

SweepConfig default_sweep_config();
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig parse_sweep_config(std::string_view text);
nlohmann::json sweep_config_to_json(const SweepConfig& c);

/// One report row: a certificate, or the inputs plus an error message.
struct SweepRow {
    BoundCertificate cert;
    std::string error; // non-empty when the cell failed
    bool failed() const { return !error.empty(); }
};

struct SweepSummary {
    std::size_t checked = 0; // satisfied + violated
    std::size_t satisfied = 0;
    std::size_t tight = 0;
    std::size_t violated = 0;
    std::size_t skipped = 0;
    std::size_t errors = 0;
    std::optional<std::size_t> min_slack_row;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    SweepSummary summary;

    void summarize();
};

/// Evaluates every selected inequality on every valid grid cell. Cells run
/// concurrently; rows come out in grid order (density, inequality, q, r, alpha, region).
/// Per-cell failures are recorded in the row. Throws InvalidArgument for an empty
/// density list or an unparsable spec.
SweepReport run_sweep(const SweepConfig& config);

/// The built-in acceptance suite: proof chains, whitening and trace identities,
/// GM-AM draws and the default sweep.
SweepReport run_verify(const NumericOptions& opts = {}, std::size_t threads = 0);

/// Threads to use when the caller passes 0.
std::size_t default_thread_count();

} // namespace lpq
