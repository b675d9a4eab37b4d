#include "lpq/harness.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace lpq {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double hoelder_constant_1d(double alpha, double beta)
{
    return (2.0 / alpha) * std::tgamma(1.0 / alpha) * std::exp(beta) * std::pow(beta, -1.0 / alpha);
}

std::vector<BetaScanPoint> beta_scan(double alpha)
{
    std::vector<BetaScanPoint> out;
    for (double beta : {0.5 / alpha, 1.0 / alpha, 2.0 / alpha})
        out.push_back({beta, std::exp(beta) * std::pow(beta, -1.0 / alpha)});
    return out;
}

bool scan_minimal_at_middle(const std::vector<BetaScanPoint>& scan)
{
    return scan[1].value <= scan[0].value && scan[1].value <= scan[2].value;
}

void finish_chain(ProofChainResult& res, const Density& f)
{
    const ProofChainParams& p = res.params;
    auto make = [&](const char* id, const Estimate& lo, const Estimate& hi) {
        BoundCertificate c;
        c.inequality_id = id;
        c.density_label = f.label();
        c.n = f.dim();
        c.q = p.bound.q;
        c.r = p.bound.r;
        if (f.dim() == 1)
            c.alpha = p.bound.alpha;
        c.lhs = lo.value;
        c.lhs_error = lo.error;
        c.rhs = hi.value;
        c.rhs_error = hi.error;
        c.notes = "beta=" + fmt(p.beta);
        c.finalize();
        return c;
    };
    res.lower_cert = make("proof-lower", res.lower, res.v);
    res.upper_cert = make("proof-upper", res.v, res.upper);
}

std::size_t env_threads()
{
    if (const char* v = std::getenv("LPQ_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && n > 0)
            return static_cast<std::size_t>(n);
    }
    return 0;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; results are indexed, so order does not matter.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < count; i = next++)
                fn(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

std::vector<double> grid_from_json(const json& j, const char* name)
{
    if (!j.is_array())
        throw InvalidArgument(std::string("sweep field \"") + name + "\" must be an array");
    std::vector<double> out;
    for (const auto& v : j)
        out.push_back(parse_extended_real(v));
    return out;
}

json grid_to_json(const std::vector<double>& g)
{
    json a = json::array();
    for (double v : g)
        a.push_back(extended_real_to_json(v));
    return a;
}

} // namespace

// ---------------------------------------------------------------- proof chain

ProofChainParams ProofChainParams::make(double q, double r, double alpha, CenterSpec center, double beta)
{
    if (!(q > 0.0) || !(q < r))
        throw InvalidArgument("proof chain requires 0 < q < r (got q = " + fmt(q) + ", r = " + fmt(r) + ")");
    if (std::isinf(r))
        throw InvalidArgument("proof chain requires a finite r");
    if (!(alpha > 0.0))
        throw InvalidArgument("proof chain requires alpha > 0");
    ProofChainParams p;
    p.bound = {q, r, alpha, std::move(center)};
    p.s = r / q;
    p.t = r / (r - q);
    p.beta = beta > 0.0 ? beta : 1.0 / alpha;
    return p;
}

double ProofChainParams::phi(double x, double anchor) const { return std::exp(-(beta / t) * (x - anchor)); }

ProofChainResult proof_chain_check(const Density& f, const ProofChainParams& params, const NumericOptions& opts)
{
    if (f.dim() != 1)
        throw InvalidArgument("proof chain needs a 1-D density; use proof_chain_check_nd");
    ProofChainResult res;
    res.params = params;
    const double q = params.bound.q;
    const double r = params.bound.r;
    const double alpha = params.bound.alpha;
    if (!(q < r) || std::isinf(r))
        throw InvalidArgument("proof chain requires q < r < inf");

    double b = 0.0;
    if (params.bound.center.is_central()) {
        b = q_expectation(f, q, opts)[0].value;
    } else {
        if (params.bound.center.point.size() != 1)
            throw InvalidArgument("explicit center must have dimension 1");
        b = params.bound.center.point[0];
    }
    const Estimate mu = q_moment(f, {q, alpha, CenterSpec::at({b})}, opts);
    res.moment = mu.value;
    res.lower = power_integral(f, q, std::nullopt, opts);
    const ProofChainParams p = params;
    const double m = mu.value;
    res.v = weighted_power_integral(
        f, q, [&p, b, m, alpha](std::span<const double> x) { return p.phi(std::pow(std::fabs(x[0] - b), alpha) / m); },
        std::nullopt, opts, {{b}});
    // d V / d mu is bounded by (beta / t) V / mu.
    res.v.error += (p.beta / p.t) * res.v.value / m * mu.error;

    const Estimate ir = power_integral(f, r, std::nullopt, opts);
    const double norm_rq = std::pow(ir.value, q / r);
    const double k = hoelder_constant_1d(alpha, p.beta) * std::pow(m, 1.0 / alpha);
    const double factor = std::pow(k, 1.0 / p.t);
    res.upper.value = norm_rq * factor;
    res.upper.error = res.upper.value * ((q / r) * ir.error / ir.value + mu.error / (alpha * p.t * m));

    res.beta_scan = beta_scan(alpha);
    res.beta_optimum_ok = scan_minimal_at_middle(res.beta_scan);
    finish_chain(res, f);
    return res;
}

ProofChainResult proof_chain_check_nd(const Density& f, const ProofChainParams& params, const NumericOptions& opts)
{
    ProofChainResult res;
    res.params = params;
    const double q = params.bound.q;
    const double r = params.bound.r;
    if (!(q < r) || std::isinf(r))
        throw InvalidArgument("proof chain requires q < r < inf");
    const std::size_t n = f.dim();
    const double nd = static_cast<double>(n);

    const QStats s = q_covariance(f, q, params.bound.center, opts);
    if (s.singular)
        throw SingularMatrixError("proof chain: escort covariance of " + f.label() + " is singular");
    res.moment = s.det.value;
    const Matrix inv = s.q_cov.inverse();
    const std::vector<double> b = s.center;
    res.lower = power_integral(f, q, std::nullopt, opts);
    const ProofChainParams p = params;
    res.v = weighted_power_integral(
        f, q,
        [&p, &inv, &b, n, nd](std::span<const double> x) {
            double quad = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    quad += (x[i] - b[i]) * inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                            (x[j] - b[j]);
            return p.phi(quad, nd);
        },
        std::nullopt, opts);

    const Estimate ir = power_integral(f, r, std::nullopt, opts);
    const double norm_rq = std::pow(ir.value, q / r);
    // integral of exp(-beta (Q - n)) = e^{beta n} (pi / beta)^{n/2} det^{1/2}
    const double k = std::exp(p.beta * nd) * std::pow(std::numbers::pi / p.beta, nd / 2.0) * std::sqrt(s.det.value);
    res.upper.value = norm_rq * std::pow(k, 1.0 / p.t);
    res.upper.error =
        res.upper.value * ((q / r) * ir.error / ir.value + 0.5 * s.det.error / (p.t * s.det.value));

    // exp(beta n) beta^{-n/2} is minimal at beta = 1/2; the scan is the 1-D alpha = 2 scan raised to the n.
    res.beta_scan = beta_scan(2.0);
    for (auto& pt : res.beta_scan)
        pt.value = std::pow(pt.value, nd);
    res.beta_optimum_ok = scan_minimal_at_middle(res.beta_scan);
    finish_chain(res, f);
    return res;
}

// ------------------------------------------------------------------ whitening

Density whitened_density(const Density& f, const NumericOptions& opts)
{
    const QStats s = q_covariance(f, 1.0, CenterSpec::central(), opts);
    if (s.singular)
        throw SingularMatrixError("whitening: covariance of " + f.label() + " is singular");
    const Matrix a = spd_sqrt(s.q_cov);
    const Vector m = Eigen::Map<const Vector>(s.q_mean.data(), static_cast<Eigen::Index>(s.q_mean.size()));
    return families::affine(f, a, m, std::sqrt(s.det.value));
}

WhitenResult whiten(const Density& f, const Region& omega, double r, const NumericOptions& opts)
{
    if (!(r >= 1.0))
        throw InvalidArgument("whitening requires r >= 1 (got r = " + fmt(r) + ")");
    if (omega.dim() != f.dim())
        throw InvalidArgument("whitening: region dimension does not match density dimension");
    const QStats s = q_covariance(f, 1.0, CenterSpec::central(), opts);
    if (s.singular)
        throw SingularMatrixError("whitening: covariance of " + f.label() + " is singular");
    WhitenResult res;
    res.det = s.det.value;
    res.mean = s.q_mean;
    res.sqrt_cov = spd_sqrt(s.q_cov);
    const Vector m = Eigen::Map<const Vector>(s.q_mean.data(), static_cast<Eigen::Index>(s.q_mean.size()));
    const Density g_hat = families::affine(f, res.sqrt_cov, m, std::sqrt(s.det.value));
    const Region pulled = omega.pullback(res.sqrt_cov, m);

    res.whitened_norm = lp_norm(g_hat, r, pulled, opts);
    res.original_norm = lp_norm(f, r, omega, opts);
    const double e = 0.5 * (1.0 - (std::isinf(r) ? 0.0 : 1.0 / r));
    const double factor = std::pow(s.det.value, e);

    BoundCertificate& c = res.cert;
    c.inequality_id = "whiten";
    c.density_label = f.label();
    c.n = f.dim();
    c.r = r;
    c.region = omega.describe();
    c.identity = true;
    c.lhs = res.whitened_norm.value;
    c.lhs_error = res.whitened_norm.error;
    c.rhs = factor * res.original_norm.value;
    c.rhs_error = factor * res.original_norm.error + c.rhs * e * s.det.error / s.det.value;
    c.notes = "det=" + fmt(s.det.value);
    c.finalize();
    return res;
}

BoundCertificate trace_identity_check(const Density& f, const NumericOptions& opts)
{
    const Density g = whitened_density(f, opts);
    BoundCertificate c;
    c.inequality_id = "trace";
    c.density_label = f.label();
    c.n = f.dim();
    c.identity = true;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const Estimate e = weighted_power_integral(
            g, 1.0, [i](std::span<const double> y) { return y[i] * y[i]; }, std::nullopt, opts);
        c.lhs += e.value;
        c.lhs_error += e.error;
    }
    c.rhs = static_cast<double>(f.dim());
    c.finalize();
    return c;
}

// ---------------------------------------------------------------------- GM-AM

BoundCertificate gm_am_check(const Matrix& m)
{
    if (m.rows() == 0 || m.rows() != m.cols())
        throw InvalidArgument("gm-am needs a non-empty square matrix");
    const SymmetricSpectrum spec = symmetric_eigen(m);
    const double trace = m.trace();
    const auto n = static_cast<double>(m.rows());
    if (spec.eigenvalues.minCoeff() < -1e-10 * std::max(std::fabs(trace), 1.0))
        throw InvalidArgument("gm-am needs a positive semidefinite matrix (smallest eigenvalue " +
                              fmt(spec.eigenvalues.minCoeff()) + ")");
    double det = 1.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
        det *= std::max(spec.eigenvalues(i), 0.0);
    BoundCertificate c;
    c.inequality_id = "gm-am";
    c.density_label = "matrix";
    c.n = static_cast<std::size_t>(m.rows());
    c.lhs = det;
    c.rhs = std::pow(trace / n, n);
    c.lhs_error = 16.0 * n * kEps * std::max(det, c.rhs);
    c.rhs_error = 16.0 * n * kEps * c.rhs;
    c.finalize();
    return c;
}

Matrix random_psd(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    const auto ni = static_cast<Eigen::Index>(n);
    Matrix a(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j)
            a(i, j) = 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0;
    Matrix m = a * a.transpose();
    // Exact symmetry; the product is symmetric only up to rounding.
    return 0.5 * (m + m.transpose());
}

// ---------------------------------------------------------------- sweep config

NumericOptions SweepConfig::numeric() const
{
    NumericOptions o;
    o.rel_tol = rel_tol;
    o.budget = budget;
    o.seed = seed;
    return o;
}

const std::vector<std::string>& inequality_ids()
{
    static const std::vector<std::string> ids = {"thm1",       "thm2",    "eq1",  "renyi",   "shannon",
                                                 "renyi-pair", "tsallis", "prob", "prob-sup"};
    return ids;
}

SweepConfig default_sweep_config()
{
    SweepConfig c;
    c.densities = {
        json::parse(R"({"family": "gaussian", "mean": [0], "cov": [[1]], "label": "gaussian"})"),
        json::parse(R"({"family": "uniform", "box": [[0, 1]], "label": "uniform"})"),
        json::parse(R"({"family": "exponential", "rate": 1, "label": "exponential"})"),
        json::parse(R"({"family": "laplace", "mean": 0, "scale": 1, "label": "laplace"})"),
        json::parse(R"({"family": "gen_gaussian", "mean": 0, "scale": 1, "shape": 4, "label": "gen_gaussian4"})"),
        json::parse(R"({"family": "mixture", "weights": [0.3, 0.7], "label": "mixture2",
                        "components": [{"family": "gaussian", "mean": [-2], "cov": [[0.5]]},
                                       {"family": "gaussian", "mean": [1], "cov": [[1]]}]})"),
    };
    c.q_grid = {0.5, 1.0, 2.0};
    c.r_grid = {2.0, 4.0, kInf};
    c.alpha_grid = {1.0, 2.0};
    c.inequalities = inequality_ids();
    c.regions = {json::parse(R"({"kind": "all"})"),
                 json::parse(R"({"kind": "halfspace", "normal": [1], "offset": 0})")};
    c.seed = 0x243f6a8885a308d3ULL;
    return c;
}

SweepConfig sweep_config_from_json(const json& j)
{
    if (!j.is_object())
        throw InvalidArgument("sweep config must be a JSON object");
    SweepConfig c = default_sweep_config();
    for (const auto& [key, value] : j.items()) {
        if (key == "densities") {
            if (!value.is_array())
                throw InvalidArgument("sweep field \"densities\" must be an array of density specs");
            c.densities.assign(value.begin(), value.end());
        } else if (key == "q_grid") {
            c.q_grid = grid_from_json(value, "q_grid");
        } else if (key == "r_grid") {
            c.r_grid = grid_from_json(value, "r_grid");
        } else if (key == "alpha_grid") {
            c.alpha_grid = grid_from_json(value, "alpha_grid");
        } else if (key == "inequalities") {
            if (!value.is_array())
                throw InvalidArgument("sweep field \"inequalities\" must be an array of ids");
            c.inequalities.clear();
            for (const auto& v : value) {
                const std::string id = v.get<std::string>();
                const auto& ids = inequality_ids();
                if (std::find(ids.begin(), ids.end(), id) == ids.end())
                    throw InvalidArgument("unknown inequality id \"" + id + "\"");
                c.inequalities.push_back(id);
            }
        } else if (key == "regions") {
            if (!value.is_array())
                throw InvalidArgument("sweep field \"regions\" must be an array of region specs");
            c.regions.assign(value.begin(), value.end());
        } else if (key == "center") {
            if (value.is_string() && value.get<std::string>() == "central")
                c.center = CenterSpec::central();
            else if (value.is_array())
                c.center = CenterSpec::at(value.get<std::vector<double>>());
            else
                throw InvalidArgument("sweep field \"center\" must be \"central\" or a point");
        } else if (key == "rel_tol") {
            c.rel_tol = value.get<double>();
        } else if (key == "budget") {
            c.budget = value.get<std::size_t>();
        } else if (key == "seed") {
            c.seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
            c.threads = value.get<std::size_t>();
        } else if (key == "output") {
            c.output = value.get<std::string>();
        } else if (key == "plot_dir") {
            c.plot_dir = value.get<std::string>();
        } else {
            throw InvalidArgument("unknown sweep field \"" + key + "\"");
        }
    }
    for (const auto& g : {&c.q_grid, &c.r_grid, &c.alpha_grid})
        if (g->empty())
            throw InvalidArgument("sweep grids must be non-empty");
    return c;
}

SweepConfig parse_sweep_config(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("malformed sweep config: ") + e.what());
    } catch (const json::type_error& e) {
        throw InvalidArgument(std::string("malformed sweep config: ") + e.what());
    }
    try {
        return sweep_config_from_json(j);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed sweep config: ") + e.what());
    }
}

json sweep_config_to_json(const SweepConfig& c)
{
    json j;
    j["densities"] = c.densities;
    j["q_grid"] = grid_to_json(c.q_grid);
    j["r_grid"] = grid_to_json(c.r_grid);
    j["alpha_grid"] = grid_to_json(c.alpha_grid);
    j["inequalities"] = c.inequalities;
    j["regions"] = c.regions;
    if (c.center.is_central())
        j["center"] = "central";
    else
        j["center"] = c.center.point;
    j["rel_tol"] = c.rel_tol;
    j["budget"] = c.budget;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["output"] = c.output;
    j["plot_dir"] = c.plot_dir;
    return j;
}

// ---------------------------------------------------------------------- sweep

std::size_t default_thread_count()
{
    if (const std::size_t n = env_threads())
        return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void SweepReport::summarize()
{
    const std::size_t skipped = summary.skipped;
    summary = SweepSummary{};
    summary.skipped = skipped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& row = rows[i];
        if (row.failed()) {
            ++summary.errors;
            continue;
        }
        ++summary.checked;
        if (row.cert.satisfied) {
            ++summary.satisfied;
            if (row.cert.tight())
                ++summary.tight;
        } else {
            ++summary.violated;
        }
        if (!summary.min_slack_row || row.cert.slack < rows[*summary.min_slack_row].cert.slack)
            summary.min_slack_row = i;
    }
}

namespace {

struct Cell {
    std::size_t density = 0;
    std::string id;
    std::optional<double> q;
    std::optional<double> r;
    std::optional<double> alpha;
    std::optional<std::size_t> region;
};

Region region_for(const json& spec, std::size_t dim)
{
    if (spec.is_object() && spec.value("kind", "") == "all" && !spec.contains("dim"))
        return Region::all(dim);
    return Region::from_json(spec);
}

BoundCertificate evaluate_cell(const Cell& cell, const Density& f, const SweepConfig& cfg,
                               const std::vector<std::optional<Region>>& regions, const NumericOptions& opts)
{
    const std::string& id = cell.id;
    if (id == "thm1")
        return theorem1_check(f, {*cell.q, *cell.r, *cell.alpha, cfg.center}, opts);
    if (id == "thm2")
        return theorem2_check(f, *cell.q, *cell.r, cfg.center, opts);
    if (id == "eq1")
        return finite_measure_check(f, *cell.q, *cell.r, opts);
    if (id == "renyi")
        return renyi_upper_bound(f, *cell.q, opts);
    if (id == "shannon")
        return shannon_upper_bound(f, opts);
    if (id == "renyi-pair")
        return renyi_pair_check(f, *cell.q, *cell.r, opts);
    if (id == "tsallis")
        return tsallis_bound_check(f, *cell.q, opts);
    if (id == "prob")
        return prob_bound_check(f, *regions[*cell.region], *cell.r, opts);
    if (id == "prob-sup")
        return prob_bound_sup_check(f, *regions[*cell.region], opts);
    throw InvalidArgument("unknown inequality id \"" + id + "\"");
}

} // namespace

SweepReport run_sweep(const SweepConfig& cfg)
{
    if (cfg.densities.empty())
        throw InvalidArgument("no densities");
    for (const std::string& id : cfg.inequalities)
        if (std::find(inequality_ids().begin(), inequality_ids().end(), id) == inequality_ids().end())
            throw InvalidArgument("unknown inequality id \"" + id + "\"");
    std::vector<Density> densities;
    for (const auto& spec : cfg.densities)
        densities.push_back(density_from_json(spec));

    SweepReport report;
    std::vector<Cell> cells;
    std::vector<std::vector<std::optional<Region>>> regions(densities.size());
    for (std::size_t d = 0; d < densities.size(); ++d) {
        const Density& f = densities[d];
        for (const auto& spec : cfg.regions) {
            std::optional<Region> reg = region_for(spec, f.dim());
            regions[d].push_back(reg->dim() == f.dim() ? reg : std::nullopt);
        }
        for (const std::string& id : cfg.inequalities) {
            const bool pairs = id == "thm1" || id == "thm2" || id == "eq1" || id == "renyi-pair";
            if (pairs) {
                const bool applicable = (id != "thm1" || f.dim() == 1) && (id != "eq1" || f.support().bounded());
                const std::size_t alphas = id == "thm1" ? cfg.alpha_grid.size() : 1;
                for (double q : cfg.q_grid) {
                    for (double r : cfg.r_grid) {
                        for (std::size_t a = 0; a < alphas; ++a) {
                            if (!applicable || !(q < r)) {
                                ++report.summary.skipped;
                                continue;
                            }
                            Cell c{d, id, q, r, std::nullopt, std::nullopt};
                            if (id == "thm1")
                                c.alpha = cfg.alpha_grid[a];
                            cells.push_back(c);
                        }
                    }
                }
            } else if (id == "renyi" || id == "tsallis") {
                for (double q : cfg.q_grid) {
                    if (std::fabs(q - 1.0) < 1e-6 || std::isinf(q) || (id == "tsallis" && std::isinf(q))) {
                        ++report.summary.skipped;
                        continue;
                    }
                    cells.push_back({d, id, q, std::nullopt, std::nullopt, std::nullopt});
                }
            } else if (id == "shannon") {
                cells.push_back({d, id, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
            } else if (id == "prob") {
                for (double r : cfg.r_grid) {
                    for (std::size_t g = 0; g < regions[d].size(); ++g) {
                        if (!(r > 1.0) || !regions[d][g]) {
                            ++report.summary.skipped;
                            continue;
                        }
                        cells.push_back({d, id, std::nullopt, r, std::nullopt, g});
                    }
                }
            } else if (id == "prob-sup") {
                for (std::size_t g = 0; g < regions[d].size(); ++g) {
                    if (!regions[d][g]) {
                        ++report.summary.skipped;
                        continue;
                    }
                    cells.push_back({d, id, std::nullopt, std::nullopt, std::nullopt, g});
                }
            }
        }
    }

    const NumericOptions opts = cfg.numeric();
    report.rows.resize(cells.size());
    const std::size_t threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        const Cell& cell = cells[i];
        const Density& f = densities[cell.density];
        SweepRow row;
        try {
            row.cert = evaluate_cell(cell, f, cfg, regions[cell.density], opts);
        } catch (const std::exception& e) {
            row.error = e.what();
            if (row.error.empty())
                row.error = "unknown failure";
        }
        BoundCertificate& c = row.cert;
        c.inequality_id = cell.id;
        c.density_label = f.label();
        c.n = f.dim();
        c.q = cell.q;
        c.r = cell.r;
        c.alpha = cell.alpha;
        if (cell.region) {
            c.region = regions[cell.density][*cell.region]->describe();
            c.density_label += "@" + c.region;
        }
        report.rows[i] = std::move(row);
    });
    report.summarize();
    return report;
}

// --------------------------------------------------------------------- verify

SweepReport run_verify(const NumericOptions& opts, std::size_t threads)
{
    SweepReport report;
    auto add = [&](auto&& fn, const std::string& id, const std::string& label) {
        SweepRow row;
        try {
            row.cert = fn();
        } catch (const std::exception& e) {
            row.error = e.what();
            row.cert.inequality_id = id;
            row.cert.density_label = label;
        }
        report.rows.push_back(std::move(row));
    };
    auto add_chain = [&](auto&& fn, const Density& f) {
        ProofChainResult res;
        try {
            res = fn();
        } catch (const std::exception& e) {
            SweepRow row;
            row.error = e.what();
            row.cert.inequality_id = "proof-chain";
            row.cert.density_label = f.label();
            row.cert.n = f.dim();
            report.rows.push_back(std::move(row));
            return;
        }
        report.rows.push_back({res.lower_cert, {}});
        report.rows.push_back({res.upper_cert, {}});
        BoundCertificate c;
        c.inequality_id = "beta-scan";
        c.density_label = res.lower_cert.density_label;
        c.n = res.lower_cert.n;
        c.alpha = res.lower_cert.alpha;
        c.lhs = res.beta_scan[1].value;
        c.rhs = std::min(res.beta_scan[0].value, res.beta_scan[2].value);
        c.lhs_error = c.rhs_error = 4.0 * kEps * c.rhs;
        c.notes = "beta=" + fmt(res.beta_scan[1].beta);
        c.finalize();
        report.rows.push_back({c, {}});
    };

    const Density normal = parse_density_spec(R"({"family": "gaussian", "mean": [0], "cov": [[1]], "label": "gaussian"})");
    const Density uniform = parse_density_spec(R"({"family": "uniform", "box": [[0, 1]], "label": "uniform"})");
    const Density expo = parse_density_spec(R"({"family": "exponential", "rate": 1, "label": "exponential"})");
    const Density laplace = parse_density_spec(R"({"family": "laplace", "mean": 0, "scale": 1, "label": "laplace"})");
    const Density normal4 =
        parse_density_spec(R"({"family": "gaussian", "mean": [0], "cov": [[4]], "label": "gaussian_var4"})");
    const Density iso2 =
        parse_density_spec(R"({"family": "gaussian", "mean": [0, 0], "cov": [[1, 0], [0, 1]], "label": "gaussian2"})");
    const Density diag2 = parse_density_spec(
        R"({"family": "gaussian", "mean": [0, 0], "cov": [[4, 0], [0, 1]], "label": "gaussian2_diag41"})");
    const Density corr2 = parse_density_spec(
        R"({"family": "gaussian", "mean": [0, 0], "cov": [[1, 0.5], [0.5, 1]], "label": "gaussian2_rho05"})");

    struct Chain {
        const Density* f;
        double q, r, alpha;
    };
    for (const Chain& ch : {Chain{&normal, 1.0, 2.0, 2.0}, Chain{&normal, 2.0, 4.0, 1.0}, Chain{&uniform, 1.0, 2.0, 2.0},
                            Chain{&expo, 1.0, 2.0, 1.0}, Chain{&laplace, 0.5, 4.0, 1.0}})
        add_chain([&]() { return proof_chain_check(*ch.f, ProofChainParams::make(ch.q, ch.r, ch.alpha), opts); }, *ch.f);
    for (const Density* f : {&iso2, &corr2})
        add_chain([&]() { return proof_chain_check_nd(*f, ProofChainParams::make(1.0, 2.0, 2.0), opts); }, *f);

    struct Whiten {
        const Density* f;
        Region omega;
        double r;
    };
    const std::vector<Whiten> whitenings = {
        {&normal4, Region::all(1), 2.0},
        {&iso2, Region::all(2), 1.0},
        {&diag2, Region::halfspace({1.0, 0.0}, 0.0), 1.0},
        {&diag2, Region::all(2), 2.0},
        {&diag2, Region::all(2), 4.0},
        {&corr2, Region::all(2), 2.0},
    };
    for (const Whiten& w : whitenings)
        add([&]() { return whiten(*w.f, w.omega, w.r, opts).cert; }, "whiten", w.f->label());
    for (const Density* f : {&normal4, &diag2, &corr2})
        add([&]() { return trace_identity_check(*f, opts); }, "trace", f->label());

    add(
        [&]() {
            BoundCertificate worst;
            double worst_ratio = -1.0;
            std::size_t passed = 0;
            for (std::size_t i = 0; i < 1000; ++i) {
                const BoundCertificate c = gm_am_check(random_psd(opts.seed + i, 2 + i % 4));
                passed += c.satisfied ? 1 : 0;
                const double ratio = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
                if (!c.satisfied || ratio > worst_ratio) {
                    worst_ratio = c.satisfied ? ratio : std::numeric_limits<double>::infinity();
                    worst = c;
                }
            }
            worst.density_label = "random_psd";
            worst.notes = std::to_string(passed) + "/1000 draws";
            return worst;
        },
        "gm-am", "random_psd");

    SweepConfig cfg = default_sweep_config();
    cfg.rel_tol = opts.rel_tol;
    cfg.budget = opts.budget;
    cfg.seed = opts.seed;
    cfg.threads = threads;
    SweepReport sweep = run_sweep(cfg);
    for (auto& row : sweep.rows)
        report.rows.push_back(std::move(row));
    report.summary.skipped = sweep.summary.skipped;
    report.summarize();
    return report;
}

} // namespace lpq
