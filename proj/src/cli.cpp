#include "lpq/cli.hpp"

#include "lpq/bounds.hpp"
#include "lpq/entropy.hpp"
#include "lpq/error.hpp"
#include "lpq/escort.hpp"
#include "lpq/harness.hpp"
#include "lpq/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace lpq {

namespace {

std::string read_spec(const std::string& arg)
{
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
        return arg;
    std::ifstream in(arg, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot read " + arg);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double parse_real(const std::string& text, const char* flag)
{
    if (text == "inf" || text == "+inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("--") + flag + " expects a number (got \"" + text + "\")");
}

std::vector<double> parse_point(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_real(item, "b"));
    if (out.empty())
        throw InvalidArgument("--b expects comma-separated numbers");
    return out;
}

struct Common {
    double rtol = 0.0;
    std::size_t budget = 0;
    std::uint64_t seed = 0x243f6a8885a308d3ULL;
    std::string sup = "auto";
    std::string out_path;

    void attach(CLI::App* app, bool with_sup)
    {
        app->add_option("--rtol", rtol, "Relative integration tolerance (0: 1e-9 in 1-D, 1e-7 in 2-D/3-D, 1e-3 above)");
        app->add_option("--budget", budget, "Integrand evaluation budget per integral (0: default)");
        app->add_option("--seed", seed, "Seed for quasi-Monte Carlo scrambling")->default_str("2611923443488327891");
        app->add_option("--out", out_path, "Write machine-readable output to this path");
        if (with_sup)
            app->add_option("--sup", sup, "Supremum method for p = inf")->check(CLI::IsMember({"auto", "search"}));
    }

    NumericOptions numeric() const
    {
        NumericOptions o;
        o.rel_tol = rtol;
        o.budget = budget;
        o.seed = seed;
        o.sup = sup == "search" ? SupMethod::search : SupMethod::automatic;
        return o;
    }
};

struct CenterArgs {
    std::string kind = "central";
    std::string point;

    void attach(CLI::App* app)
    {
        app->add_option("--center", kind, "Moment center: central (b = E_q[X]) or explicit")
            ->check(CLI::IsMember({"central", "explicit"}));
        app->add_option("--b", point, "Explicit center b as v1,v2,...");
    }

    CenterSpec spec() const
    {
        if (kind == "central") {
            if (!point.empty())
                throw InvalidArgument("--b requires --center explicit");
            return CenterSpec::central();
        }
        if (point.empty())
            throw InvalidArgument("--center explicit requires --b");
        return CenterSpec::at(parse_point(point));
    }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot open " + path + " for writing");
    f << text;
}

std::string number_list(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + format_number(v[i]);
    return s;
}

int report_exit(const SweepReport& r)
{
    if (r.summary.violated > 0)
        return kExitViolated;
    if (r.summary.errors > 0)
        return kExitNumerical;
    return kExitOk;
}

void emit_report(const SweepReport& report, const std::string& out_path, const std::string& plot_dir,
                 std::ostream& out, std::ostream& err)
{
    if (out_path.empty()) {
        write_csv(report, out);
    } else {
        write_csv_file(report, out_path);
        write_summary_file(report, out_path + ".summary.json");
    }
    if (!plot_dir.empty())
        write_plot_data(report, plot_dir);
    const SweepSummary& s = report.summary;
    err << "checked " << s.checked << ", satisfied " << s.satisfied << ", tight " << s.tight << ", violated "
        << s.violated << ", skipped " << s.skipped << ", errors " << s.errors << '\n';
    for (const SweepRow& row : report.rows)
        if (row.failed())
            err << "failed cell: " << row.cert.inequality_id << ' ' << row.cert.density_label << ": " << row.error
                << '\n';
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Escort moments, Lp norms and norm-inequality certificates", "lpq"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    CenterArgs center;
    std::string density_arg;
    std::string region_arg;
    std::string p_text;
    std::string q_text;
    std::string r_text;
    std::string alpha_text = "2";
    std::string kind;
    std::string ineq;
    std::string config_arg;
    std::string plot_dir;
    std::size_t threads = 0;
    bool print_config = false;

    auto density_opt = [&](CLI::App* sub) {
        sub->add_option("--density", density_arg, "Density spec: a file path or inline JSON")->required();
    };

    CLI::App* norm = app.add_subcommand("norm", "||f I_Omega||_p, p in (0, inf]");
    density_opt(norm);
    norm->add_option("--p", p_text, "Order p (inf for the essential supremum)")->required();
    norm->add_option("--region", region_arg, "Region spec restricting the norm (file or inline JSON)");
    common.attach(norm, true);

    CLI::App* moment = app.add_subcommand("moment", "q-moment E_q|X - b|^alpha of a 1-D density");
    density_opt(moment);
    moment->add_option("--q", q_text, "Escort order q > 0")->required();
    moment->add_option("--alpha", alpha_text, "Moment order alpha > 0")->default_str("2");
    center.attach(moment);
    common.attach(moment, false);

    CLI::App* qcov = app.add_subcommand("qcov", "q-expectation and q-covariance Sigma_{q,b} with its determinant");
    density_opt(qcov);
    qcov->add_option("--q", q_text, "Escort order q > 0")->required();
    center.attach(qcov);
    common.attach(qcov, false);

    CLI::App* entropy = app.add_subcommand("entropy", "Renyi, Shannon or Tsallis entropy in nats");
    density_opt(entropy);
    entropy->add_option("--kind", kind, "renyi, shannon or tsallis")
        ->required()
        ->check(CLI::IsMember({"renyi", "shannon", "tsallis"}));
    entropy->add_option("--p,--q", p_text, "Order (renyi and tsallis)");
    common.attach(entropy, true);

    CLI::App* bound = app.add_subcommand("bound", "Evaluate one inequality as a certificate");
    bound->add_option("--ineq", ineq, "Inequality id")->required()->check(CLI::IsMember(inequality_ids()));
    density_opt(bound);
    bound->add_option("--q", q_text, "q (thm1, thm2, eq1, renyi-pair, tsallis; order p for renyi)");
    bound->add_option("--p", p_text, "Renyi order p (renyi; p = 1 gives the Shannon bound)");
    bound->add_option("--r", r_text, "r, may be inf (thm1, thm2, eq1, renyi-pair, prob)");
    bound->add_option("--alpha", alpha_text, "Moment order alpha (thm1)")->default_str("2");
    bound->add_option("--region", region_arg, "Region Omega (prob, prob-sup); default all of R^n");
    center.attach(bound);
    common.attach(bound, true);

    CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep over densities x q x r x alpha");
    sweep->add_option("--config", config_arg, "Sweep config: file or inline JSON (default: built-in, see config/)");
    sweep->add_option("--out", common.out_path, "Report CSV path (summary goes to <out>.summary.json)");
    sweep->add_option("--plot-dir", plot_dir, "Directory for per-inequality slack matrices");
    sweep->add_option("--threads", threads, "Worker threads (0: LPQ_THREADS or hardware concurrency)");
    sweep->add_flag("--print-config", print_config, "Print the effective config as JSON and exit");

    CLI::App* verify = app.add_subcommand("verify", "Run the built-in verification suite");
    verify->add_option("--out", common.out_path, "Report CSV path (summary goes to <out>.summary.json)");
    verify->add_option("--plot-dir", plot_dir, "Directory for per-inequality slack matrices");
    verify->add_option("--threads", threads, "Worker threads (0: LPQ_THREADS or hardware concurrency)");
    verify->add_option("--rtol", common.rtol, "Relative integration tolerance (0: default)");
    verify->add_option("--budget", common.budget, "Integrand evaluation budget per integral (0: default)");
    verify->add_option("--seed", common.seed, "Seed")->default_str("2611923443488327891");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitInput;
    }

    try {
        const NumericOptions opts = common.numeric();
        std::optional<Density> f;
        if (!density_arg.empty())
            f = parse_density_spec(read_spec(density_arg));
        std::optional<Region> omega;
        if (!region_arg.empty())
            omega = Region::parse(read_spec(region_arg));

        if (norm->parsed()) {
            const double p = parse_real(p_text, "p");
            const Estimate e = lp_norm(*f, p, omega, opts);
            out << format_number(e.value) << "\nabs_error " << format_number(e.error) << '\n';
            if (!common.out_path.empty()) {
                nlohmann::json j = {{"quantity", "lp_norm"},     {"density_label", f->label()},
                                    {"p", format_number(p)},     {"value", format_number(e.value)},
                                    {"abs_error", format_number(e.error)}};
                write_text(common.out_path, j.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (moment->parsed()) {
            const MomentSpec spec{parse_real(q_text, "q"), parse_real(alpha_text, "alpha"), center.spec()};
            const Estimate e = q_moment(*f, spec, opts);
            out << format_number(e.value) << "\nabs_error " << format_number(e.error) << '\n';
            if (!common.out_path.empty()) {
                nlohmann::json j = {{"quantity", "q_moment"},
                                    {"density_label", f->label()},
                                    {"q", format_number(spec.q)},
                                    {"alpha", format_number(spec.alpha)},
                                    {"value", format_number(e.value)},
                                    {"abs_error", format_number(e.error)}};
                write_text(common.out_path, j.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (qcov->parsed()) {
            const double q = parse_real(q_text, "q");
            const QStats s = q_covariance(*f, q, center.spec(), opts);
            out << "q_mass " << format_number(s.q_mass.value) << '\n';
            out << "q_mean " << number_list(s.q_mean) << '\n';
            out << "center " << number_list(s.center) << '\n';
            out << "q_cov\n";
            for (Eigen::Index i = 0; i < s.q_cov.rows(); ++i) {
                std::vector<double> row;
                for (Eigen::Index k = 0; k < s.q_cov.cols(); ++k)
                    row.push_back(s.q_cov(i, k));
                out << "  " << number_list(row) << '\n';
            }
            out << "det " << format_number(s.det.value) << "\ndet_abs_error " << format_number(s.det.error)
                << "\nsingular " << (s.singular ? "true" : "false") << '\n';
            if (!common.out_path.empty()) {
                nlohmann::json cov = nlohmann::json::array();
                for (Eigen::Index i = 0; i < s.q_cov.rows(); ++i) {
                    nlohmann::json row = nlohmann::json::array();
                    for (Eigen::Index k = 0; k < s.q_cov.cols(); ++k)
                        row.push_back(format_number(s.q_cov(i, k)));
                    cov.push_back(row);
                }
                nlohmann::json mean = nlohmann::json::array();
                for (double v : s.q_mean)
                    mean.push_back(format_number(v));
                nlohmann::json j = {{"quantity", "q_covariance"}, {"density_label", f->label()},
                                    {"q", format_number(q)},        {"q_mean", mean},
                                    {"q_cov", cov},                 {"det", format_number(s.det.value)},
                                    {"singular", s.singular}};
                write_text(common.out_path, j.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (entropy->parsed()) {
            EntropyValue e;
            if (kind == "shannon") {
                e = shannon_entropy(*f, opts);
            } else {
                if (p_text.empty())
                    throw InvalidArgument("--kind " + kind + " requires --p");
                const double p = parse_real(p_text, "p");
                e = kind == "renyi" ? renyi_entropy(*f, p, opts) : tsallis_entropy(*f, p, opts);
            }
            out << format_number(e.value) << "\nabs_error " << format_number(e.error_estimate) << '\n';
            if (!common.out_path.empty()) {
                nlohmann::json j = {{"quantity", kind},
                                    {"density_label", f->label()},
                                    {"order", e.order ? format_number(*e.order) : ""},
                                    {"value", format_number(e.value)},
                                    {"abs_error", format_number(e.error_estimate)}};
                write_text(common.out_path, j.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (bound->parsed()) {
            auto need = [&](const std::string& text, const char* flag) {
                if (text.empty())
                    throw InvalidArgument("--ineq " + ineq + " requires --" + flag);
                return parse_real(text, flag);
            };
            BoundCertificate cert;
            if (ineq == "thm1") {
                cert = theorem1_check(*f, {need(q_text, "q"), need(r_text, "r"), need(alpha_text, "alpha"),
                                           center.spec()},
                                      opts);
            } else if (ineq == "thm2") {
                cert = theorem2_check(*f, need(q_text, "q"), need(r_text, "r"), center.spec(), opts);
            } else if (ineq == "eq1") {
                cert = finite_measure_check(*f, need(q_text, "q"), need(r_text, "r"), opts);
            } else if (ineq == "renyi") {
                const double p = need(p_text.empty() ? q_text : p_text, "p");
                cert = std::fabs(p - 1.0) < 1e-6 ? shannon_upper_bound(*f, opts) : renyi_upper_bound(*f, p, opts);
            } else if (ineq == "shannon") {
                cert = shannon_upper_bound(*f, opts);
            } else if (ineq == "renyi-pair") {
                cert = renyi_pair_check(*f, need(q_text, "q"), need(r_text, "r"), opts);
            } else if (ineq == "tsallis") {
                cert = tsallis_bound_check(*f, need(q_text, "q"), opts);
            } else if (ineq == "prob") {
                cert = prob_bound_check(*f, omega.value_or(Region::all(f->dim())), need(r_text, "r"), opts);
            } else {
                cert = prob_bound_sup_check(*f, omega.value_or(Region::all(f->dim())), opts);
            }
            SweepReport report;
            report.rows.push_back({cert, {}});
            report.summarize();
            write_csv(report, out);
            if (!cert.notes.empty())
                err << cert.notes << '\n';
            if (!common.out_path.empty())
                write_csv_file(report, common.out_path);
            return report_exit(report);
        }
        if (sweep->parsed()) {
            SweepConfig cfg = config_arg.empty() ? default_sweep_config() : parse_sweep_config(read_spec(config_arg));
            if (threads > 0)
                cfg.threads = threads;
            if (!common.out_path.empty())
                cfg.output = common.out_path;
            if (!plot_dir.empty())
                cfg.plot_dir = plot_dir;
            if (print_config) {
                out << sweep_config_to_json(cfg).dump(2) << '\n';
                return kExitOk;
            }
            const SweepReport report = run_sweep(cfg);
            emit_report(report, cfg.output, cfg.plot_dir, out, err);
            return report_exit(report);
        }
        if (verify->parsed()) {
            NumericOptions o;
            o.rel_tol = common.rtol;
            o.budget = common.budget;
            o.seed = common.seed;
            const SweepReport report = run_verify(o, threads);
            emit_report(report, common.out_path, plot_dir, out, err);
            return report_exit(report);
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

} // namespace lpq
