#include "lpq/integrate.hpp"

#include "lpq/error.hpp"
#include "lpq/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUnderflow = std::numeric_limits<double>::min();

// Gauss-Kronrod 10/21 on [-1, 1], abscissae in increasing order. Gauss weights
// are zero at the Kronrod-only nodes.
struct GkRule {
    std::array<double, 21> nodes{};
    std::array<double, 21> kronrod{};
    std::array<double, 21> gauss{};

    GkRule()
    {
        // Positive half from the QUADPACK qk21 tables; xgk[1], xgk[3], ... are Gauss nodes.
        constexpr double xgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                                    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                                    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                                    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                                    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                                    0.0};
        constexpr double wgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                                    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                                    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                                    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
                                    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                                    0.149445554002916905664936468389821};
        constexpr double wg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                                  0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                                  0.295524224714752870173892994651338};
        for (int i = 0; i < 10; ++i) {
            nodes[i] = -xgk[i];
            nodes[20 - i] = xgk[i];
            kronrod[i] = kronrod[20 - i] = wgk[i];
            gauss[i] = gauss[20 - i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
        }
        nodes[10] = 0.0;
        kronrod[10] = wgk[10];
        gauss[10] = 0.0;
    }
};

const GkRule& gk_rule()
{
    static const GkRule rule;
    return rule;
}

enum class MapKind { identity, two_sided, upper_tail, lower_tail };

// One piece of the domain together with the variable change that maps it to a finite t-interval.
struct Piece {
    MapKind kind = MapKind::identity;
    double anchor = 0.0;
    double scale = 1.0;
    double t0 = 0.0;
    double t1 = 0.0;

    // x(t) and dx/dt.
    void map(double t, double& x, double& jac) const
    {
        switch (kind) {
        case MapKind::identity:
            x = t;
            jac = 1.0;
            return;
        case MapKind::two_sided: {
            const double d = 1.0 - t * t;
            x = anchor + scale * t / d;
            jac = scale * (1.0 + t * t) / (d * d);
            return;
        }
        case MapKind::upper_tail: {
            const double d = 1.0 - t;
            x = anchor + scale * t / d;
            jac = scale / (d * d);
            return;
        }
        case MapKind::lower_tail: {
            const double d = 1.0 - t;
            x = anchor - scale * t / d;
            jac = scale / (d * d);
            return;
        }
        }
    }
};

struct Panel {
    double ta = 0.0;
    double tb = 0.0;
    std::size_t piece = 0;
    double value = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    double aux = 0.0;
    bool splittable = true;
};

// Integrand of the 1-D core: returns g(x), writes the absolute error of g(x) (if any) to aux
// and the magnitude used for the cancellation limit to mag (|g(x)| unless g is itself an integral).
using Integrand1d = std::function<double(double x, double& aux, double& mag)>;

struct Result1d {
    double value = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    bool converged = true;
};

std::vector<Piece> build_pieces(double lo, double hi, std::vector<double> breaks, double center, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        scale = 1.0;
    if (!std::isfinite(center))
        center = 0.0;
    std::vector<double> pts;
    for (double b : breaks)
        if (b > lo && b < hi && std::isfinite(b))
            pts.push_back(b);
    // A half-line anchored far from the bulk of the mass would squeeze it into
    // a tiny t-interval; splitting at the center keeps the mass near t = 0.
    const bool two_sided = std::isinf(lo) && std::isinf(hi) && pts.empty();
    if (!two_sided && (std::isinf(lo) || std::isinf(hi)) && center > lo && center < hi)
        pts.push_back(center);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<double> edges;
    edges.push_back(lo);
    edges.insert(edges.end(), pts.begin(), pts.end());
    edges.push_back(hi);

    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        Piece p;
        if (std::isfinite(a) && std::isfinite(b)) {
            if (!(b > a))
                continue;
            p = {MapKind::identity, 0.0, 1.0, a, b};
        } else if (std::isinf(a) && std::isinf(b)) {
            p = {MapKind::two_sided, center, scale, -1.0, 1.0};
        } else if (std::isfinite(a)) {
            p = {MapKind::upper_tail, a, scale, 0.0, 1.0};
        } else {
            p = {MapKind::lower_tail, b, scale, 0.0, 1.0};
        }
        pieces.push_back(p);
    }
    return pieces;
}

class Adaptive1d {
public:
    Adaptive1d(const Integrand1d& g, double tol, double abs_tol, std::size_t& evaluations, std::size_t budget)
        : g_(g), tol_(tol), abs_tol_(abs_tol), evaluations_(evaluations), budget_(budget)
    {
    }

    Result1d run(const std::vector<Piece>& pieces)
    {
        pieces_ = &pieces;
        std::vector<Panel> heap;   // splittable panels, max-heap on err
        std::vector<Panel> frozen; // panels too narrow to bisect
        for (std::size_t i = 0; i < pieces.size(); ++i)
            heap.push_back(evaluate(i, pieces[i].t0, pieces[i].t1));
        auto cmp = [](const Panel& a, const Panel& b) { return a.err < b.err; };
        std::make_heap(heap.begin(), heap.end(), cmp);

        bool exhausted = false;
        // Running totals for the stopping test, resynchronized with the canonical
        // sum before accepting and every 1024 splits.
        Result1d total = summarize(heap, frozen);
        for (std::size_t splits = 0;; ++splits) {
            if (splits % 1024 == 0)
                total = summarize(heap, frozen);
            if (total.err <= target(total)) {
                total = summarize(heap, frozen);
                if (total.err <= target(total))
                    break;
            }
            // Move unsplittable panels out of the way.
            while (!heap.empty() && !heap.front().splittable) {
                std::pop_heap(heap.begin(), heap.end(), cmp);
                frozen.push_back(heap.back());
                heap.pop_back();
            }
            if (heap.empty()) {
                exhausted = true;
                break;
            }
            if (evaluations_ + 42 > budget_) {
                exhausted = true;
                break;
            }
            std::pop_heap(heap.begin(), heap.end(), cmp);
            const Panel worst = heap.back();
            heap.pop_back();
            const double mid = 0.5 * (worst.ta + worst.tb);
            const Panel left = evaluate(worst.piece, worst.ta, mid);
            const Panel right = evaluate(worst.piece, mid, worst.tb);
            total.value += left.value + right.value - worst.value;
            total.err += left.err + right.err - worst.err;
            total.resabs += left.resabs + right.resabs - worst.resabs;
            heap.push_back(left);
            std::push_heap(heap.begin(), heap.end(), cmp);
            heap.push_back(right);
            std::push_heap(heap.begin(), heap.end(), cmp);
        }

        Result1d out = summarize(heap, frozen);
        out.converged = !exhausted || out.err <= target(out);
        out.converged = out.converged && inner_ok_;
        out.err += aux_total(heap, frozen);
        return out;
    }

private:
    double target(const Result1d& r) const
    {
        return std::max({tol_ * std::max(std::fabs(r.value), kRelativeFloor), abs_tol_, 100.0 * kEps * r.resabs});
    }

    // Sums in a canonical order (by piece, then by left endpoint) so the result
    // does not depend on the heap layout.
    static Result1d summarize(const std::vector<Panel>& heap, const std::vector<Panel>& frozen)
    {
        std::vector<const Panel*> all;
        all.reserve(heap.size() + frozen.size());
        for (const Panel& p : heap)
            all.push_back(&p);
        for (const Panel& p : frozen)
            all.push_back(&p);
        std::sort(all.begin(), all.end(), [](const Panel* a, const Panel* b) {
            return a->piece != b->piece ? a->piece < b->piece : a->ta < b->ta;
        });
        Result1d r;
        for (const Panel* p : all) {
            r.value += p->value;
            r.err += p->err;
            r.resabs += p->resabs;
        }
        return r;
    }

    static double aux_total(const std::vector<Panel>& heap, const std::vector<Panel>& frozen)
    {
        double s = 0.0;
        for (const Panel& p : heap)
            s += p.aux;
        for (const Panel& p : frozen)
            s += p.aux;
        return s;
    }

    Panel evaluate(std::size_t piece_index, double ta, double tb)
    {
        const GkRule& rule = gk_rule();
        const Piece& piece = (*pieces_)[piece_index];
        const double half = 0.5 * (tb - ta);
        const double mid = 0.5 * (ta + tb);
        std::array<double, 21> values{};
        std::array<double, 21> aux{};
        std::array<double, 21> mags{};
        for (std::size_t i = 0; i < 21; ++i) {
            const double t = mid + half * rule.nodes[i];
            double x = 0.0;
            double jac = 0.0;
            piece.map(t, x, jac);
            if (!std::isfinite(x) || !std::isfinite(jac)) {
                values[i] = 0.0;
                continue;
            }
            double a = 0.0;
            double mag = kInf;
            const double v = g_(x, a, mag);
            ++evaluations_;
            if (std::isnan(v)) {
                std::ostringstream os;
                os.precision(17);
                os << "integrand produced NaN at x = " << x;
                throw NumericalError(os.str());
            }
            values[i] = v * jac;
            aux[i] = std::fabs(a) * jac;
            mags[i] = (std::isinf(mag) ? std::fabs(v) : mag) * jac;
            if (a < 0.0)
                inner_ok_ = false;
        }
        const kernels::GkSums s = kernels::gk_reduce(values, rule.kronrod, rule.gauss);
        Panel p;
        p.ta = ta;
        p.tb = tb;
        p.piece = piece_index;
        p.value = s.kronrod * half;
        p.resabs = std::max(s.abs_kronrod, kernels::dot(mags, rule.kronrod)) * std::fabs(half);
        const double resasc = kernels::abs_deviation(values, rule.kronrod, 0.5 * s.kronrod) * std::fabs(half);
        double err = std::fabs((s.kronrod - s.gauss) * half);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (p.resabs > kUnderflow / (50.0 * kEps))
            err = std::max(50.0 * kEps * p.resabs, err);
        if (!std::isfinite(p.value))
            err = kInf;
        p.err = err;
        p.aux = kernels::dot(aux, rule.kronrod) * std::fabs(half);
        p.splittable = (tb - ta) > 64.0 * kEps * std::max({std::fabs(ta), std::fabs(tb), 1e-300});
        return p;
    }

    const Integrand1d& g_;
    double tol_;
    double abs_tol_;
    std::size_t& evaluations_;
    std::size_t budget_;
    const std::vector<Piece>* pieces_ = nullptr;
    bool inner_ok_ = true;
};

// Iterated rule: axis k is integrated by an adaptive 1-D rule whose integrand is
// the integral over axes k+1..n-1. Inner errors are reported through the aux
// channel; a negative aux marks an unconverged inner integral.
class Iterated {
public:
    Iterated(const IntegrationRequest& req, const Box& domain, double tol, std::size_t budget)
        : req_(req), domain_(domain), tol_(tol), budget_(budget), n_(req.dim), x_(req.dim, 0.0)
    {
        use_indicator_ = req.region && !req.region->is_box();
    }

    Result1d run() { return axis(0, tol_, req_.abs_tolerance); }

    std::size_t evaluations() const { return evaluations_; }

private:
    Result1d axis(std::size_t k, double tol, double abs_tol)
    {
        std::vector<double> breaks;
        if (k < req_.breakpoints.size())
            breaks = req_.breakpoints[k];
        if (req_.region)
            req_.region->axis_breaks(k, std::span<const double>(x_.data(), k), breaks);
        const double c = k < req_.center.size() ? req_.center[k] : 0.0;
        const double s = k < req_.scale.size() ? req_.scale[k] : 1.0;
        const std::vector<Piece> pieces = build_pieces(domain_.lower[k], domain_.upper[k], std::move(breaks), c, s);

        Integrand1d g;
        if (k + 1 == n_) {
            g = [this, k](double xk, double&, double&) {
                x_[k] = xk;
                if (use_indicator_ && !req_.region->contains(x_))
                    return 0.0;
                return req_.integrand(x_);
            };
        } else {
            g = [this, k, tol](double xk, double& aux, double& mag) {
                x_[k] = xk;
                const Result1d inner = axis(k + 1, 0.1 * tol, 0.0);
                aux = inner.converged ? inner.err : -std::max(inner.err, 1e-300);
                mag = inner.resabs;
                return inner.value;
            };
        }
        Adaptive1d engine(g, tol, abs_tol, evaluations_, budget_);
        return engine.run(pieces);
    }

    const IntegrationRequest& req_;
    Box domain_;
    double tol_;
    std::size_t budget_;
    std::size_t n_;
    std::vector<double> x_;
    bool use_indicator_ = false;
    std::size_t evaluations_ = 0;
};

Box effective_domain(const IntegrationRequest& req)
{
    Box d = req.domain.dim() == req.dim ? req.domain : Box::unbounded(req.dim);
    if (req.region)
        d = d.intersect(req.region->bounding_box());
    return d;
}

void validate(const IntegrationRequest& req)
{
    if (req.dim == 0)
        throw InvalidArgument("integration dimension must be >= 1");
    if (!req.integrand)
        throw InvalidArgument("integration request has no integrand");
    if (req.domain.dim() != 0 && req.domain.dim() != req.dim)
        throw InvalidArgument("integration domain dimension mismatch");
    if (req.region && req.region->dim() != req.dim)
        throw InvalidArgument("integration region dimension mismatch");
    if (req.tolerance < 0.0 || req.abs_tolerance < 0.0)
        throw InvalidArgument("integration tolerances must be non-negative");
}

} // namespace

std::string_view method_name(IntegrationMethod m)
{
    switch (m) {
    case IntegrationMethod::adaptive_1d:
        return "adaptive_1d";
    case IntegrationMethod::tensor_grid:
        return "tensor_grid";
    case IntegrationMethod::qmc:
        return "qmc";
    }
    return "unknown";
}

double default_tolerance(std::size_t dim)
{
    if (dim <= 1)
        return 1e-9;
    if (dim <= 3)
        return 1e-7;
    return 1e-3;
}

std::size_t default_budget(std::size_t dim)
{
    if (dim <= 1)
        return 2'000'000;
    if (dim <= 3)
        return 200'000'000;
    return 16 * 32768;
}

IntegrationResult integrate(const IntegrationRequest& req)
{
    validate(req);
    const double tol = req.tolerance > 0.0 ? req.tolerance : default_tolerance(req.dim);
    const std::size_t budget = req.budget > 0 ? req.budget : default_budget(req.dim);
    const Box domain = effective_domain(req);

    IntegrationMethod method = req.method.value_or(req.dim == 1   ? IntegrationMethod::adaptive_1d
                                                   : req.dim <= 3 ? IntegrationMethod::tensor_grid
                                                                  : IntegrationMethod::qmc);
    if (req.dim == 1 && method == IntegrationMethod::tensor_grid)
        method = IntegrationMethod::adaptive_1d;
    if (req.dim > 1 && method == IntegrationMethod::adaptive_1d)
        method = IntegrationMethod::tensor_grid;

    if (domain.empty()) {
        IntegrationResult r;
        r.converged = true;
        r.method = method;
        return r;
    }
    if (method == IntegrationMethod::qmc) {
        IntegrationRequest copy = req;
        copy.tolerance = tol;
        copy.budget = budget;
        return detail::integrate_qmc(copy, domain);
    }

    IntegrationRequest local = req;
    local.tolerance = tol;
    Iterated engine(local, domain, tol, budget);
    const Result1d r = engine.run();
    IntegrationResult out;
    out.value = r.value;
    out.abs_error_estimate = r.err;
    out.abs_integral = r.resabs;
    out.evaluations = engine.evaluations();
    out.converged = r.converged && std::isfinite(r.value);
    out.method = method;
    return out;
}

bool detect_divergence(const IntegrationRequest& req)
{
    validate(req);
    const Box domain = effective_domain(req);
    if (domain.empty())
        return false;
    const std::size_t n = req.dim;

    IntegrationRequest trunc = req;
    const auto& g = req.integrand;
    trunc.integrand = [&g](std::span<const double> x) { return std::fabs(g(x)); };
    trunc.tolerance = req.tolerance > 0.0 ? req.tolerance : std::max(default_tolerance(n), 1e-8);
    if (n > 3) {
        trunc.method = IntegrationMethod::qmc;
    }

    double radius0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = i < req.scale.size() && req.scale[i] > 0.0 ? req.scale[i] : 1.0;
        radius0 = std::max(radius0, 16.0 * s);
    }

    std::array<double, 5> values{};
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double r = radius0 * std::ldexp(1.0, static_cast<int>(k));
        Box box = domain;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = i < req.center.size() ? req.center[i] : 0.0;
            box.lower[i] = std::max(domain.lower[i], c - r);
            box.upper[i] = std::min(domain.upper[i], c + r);
        }
        trunc.domain = box;
        IntegrationResult res;
        try {
            res = integrate(trunc);
        } catch (const NumericalError&) {
            return false;
        }
        if (!std::isfinite(res.value))
            return true;
        values[k] = res.value;
    }
    std::array<double, 4> inc{};
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        inc[k] = values[k + 1] - values[k];
    for (std::size_t k = 1; k < inc.size(); ++k) {
        const double significant = 1e-6 * std::max(std::fabs(values[k + 1]), kRelativeFloor);
        if (!(inc[k] > significant))
            return false;
        if (k > 1 && inc[k] < 0.75 * inc[k - 1])
            return false;
    }
    return true;
}

} // namespace lpq
