#include "doctest.h"

#include "lpq/error.hpp"
#include "lpq/integrate.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace lpq;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

IntegrationRequest line(std::function<double(std::span<const double>)> g, double a = -inf, double b = inf)
{
    IntegrationRequest req;
    req.integrand = std::move(g);
    req.dim = 1;
    req.domain = Box{{a}, {b}};
    return req;
}

// Random smooth positive integrand: sum of Gaussian bumps with random weights, centers and widths.
struct Bumps {
    std::vector<double> w, c, s;

    explicit Bumps(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int k = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) {
            w.push_back(0.1 + 2.0 * u(rng));
            c.push_back(-5.0 + 10.0 * u(rng));
            s.push_back(0.2 + 3.0 * u(rng));
        }
    }
    double operator()(double x) const
    {
        double v = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            v += w[i] * std::exp(-0.5 * (x - c[i]) * (x - c[i]) / (s[i] * s[i]));
        return v;
    }
    double exact() const
    {
        double v = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            v += w[i] * s[i] * std::sqrt(2.0 * std::numbers::pi);
        return v;
    }
};

} // namespace

TEST_CASE("unit interval")
{
    const auto r = integrate(line([](auto) { return 1.0; }, 0.0, 1.0));
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.method == IntegrationMethod::adaptive_1d);
}

TEST_CASE("gaussian integral over the line")
{
    const auto r = integrate(line([](std::span<const double> x) { return std::exp(-x[0] * x[0]); }));
    const double ref = oracle::trapezoid([](double x) { return std::exp(-x * x); });
    CHECK(r.converged);
    CHECK(oracle::close(ref, oracle::kSqrtPi, 1e-12));
    CHECK(oracle::close(r.value, ref, 1e-10));
    CHECK(r.abs_error_estimate >= 0.0);
    CHECK(r.abs_error_estimate <= 1e-9 * r.value);
}

TEST_CASE("half lines")
{
    auto r = integrate(line([](std::span<const double> x) { return std::exp(-x[0]); }, 0.0, inf));
    CHECK(oracle::close(r.value, 1.0, 1e-10));
    r = integrate(line([](std::span<const double> x) { return std::exp(x[0] - 2.0); }, -inf, 2.0));
    CHECK(oracle::close(r.value, 1.0, 1e-10));
}

TEST_CASE("breakpoints handle kinks")
{
    auto req = line([](std::span<const double> x) { return std::exp(-std::fabs(x[0] - 0.3)); });
    req.breakpoints = {{0.3}};
    const auto r = integrate(req);
    CHECK(r.converged);
    CHECK(oracle::close(r.value, 2.0, 1e-10));
}

TEST_CASE("two-dimensional gaussian normalization")
{
    IntegrationRequest req;
    req.dim = 2;
    req.domain = Box::unbounded(2);
    req.integrand = [](std::span<const double> x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / (2.0 * std::numbers::pi);
    };
    const auto r = integrate(req);
    CHECK(r.converged);
    CHECK(r.method == IntegrationMethod::tensor_grid);
    CHECK(oracle::close(r.value, 1.0, 1e-7));
}

TEST_CASE("three-dimensional box with a region")
{
    IntegrationRequest req;
    req.dim = 3;
    req.domain = Box{{0, 0, 0}, {1, 1, 1}};
    req.region = Region::halfspace({1.0, 1.0, 1.0}, 1.5);
    req.integrand = [](auto) { return 1.0; };
    const auto r = integrate(req);
    CHECK(r.converged);
    CHECK(oracle::close(r.value, 0.5, 1e-6));
}

TEST_CASE("quasi-Monte Carlo in four dimensions")
{
    IntegrationRequest req;
    req.dim = 4;
    req.domain = Box::unbounded(4);
    req.integrand = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x)
            s += v * v;
        return std::exp(-0.5 * s) / (4.0 * std::numbers::pi * std::numbers::pi);
    };
    const auto r = integrate(req);
    CHECK(r.method == IntegrationMethod::qmc);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 1.0) <= std::max(5.0 * r.abs_error_estimate, 1e-3));
    const auto again = integrate(req);
    CHECK(again.value == r.value);
    req.seed += 1;
    CHECK(integrate(req).value != r.value);
}

TEST_CASE("NaN integrand throws")
{
    CHECK_THROWS_AS(integrate(line([](auto) { return std::nan(""); }, 0.0, 1.0)), NumericalError);
}

TEST_CASE("exhausted budget reports non-convergence")
{
    auto req = line([](std::span<const double> x) { return 1.0 / std::sqrt(std::fabs(std::sin(50.0 * x[0]))); }, 0.0,
                    3.0);
    req.budget = 200;
    const auto r = integrate(req);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 200 + 42);
}

TEST_CASE("divergence detection")
{
    const auto cauchy = [](double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); };
    CHECK(detect_divergence(line([&](std::span<const double> x) { return x[0] * x[0] * cauchy(x[0]); })));
    CHECK_FALSE(detect_divergence(line([](std::span<const double> x) { return x[0] * x[0] * oracle::normal_pdf(x[0]); })));
    CHECK_FALSE(detect_divergence(line([](auto) { return 0.0; })));
    CHECK_FALSE(detect_divergence(line([&](std::span<const double> x) { return cauchy(x[0]); })));
}

TEST_CASE("defaults")
{
    CHECK(default_tolerance(1) == 1e-9);
    CHECK(default_tolerance(2) == 1e-7);
    CHECK(default_tolerance(3) == 1e-7);
    CHECK(default_tolerance(5) == 1e-3);
    for (std::size_t n = 1; n <= 10; ++n)
        CHECK(default_budget(n) > 0);
    CHECK(method_name(IntegrationMethod::qmc) == "qmc");
}

TEST_CASE("property: linearity")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Bumps g(rng), h(rng);
        const double a = 0.5 + static_cast<double>(rng() % 100) / 25.0;
        const double b = -1.0 + static_cast<double>(rng() % 100) / 50.0;
        const auto rg = integrate(line([&](std::span<const double> x) { return g(x[0]); }));
        const auto rh = integrate(line([&](std::span<const double> x) { return h(x[0]); }));
        const auto rs = integrate(line([&](std::span<const double> x) { return a * g(x[0]) + b * h(x[0]); }));
        const double bound =
            a * rg.abs_error_estimate + std::fabs(b) * rh.abs_error_estimate + rs.abs_error_estimate + 1e-14 * rs.abs_integral;
        CHECK(std::fabs(rs.value - (a * rg.value + b * rh.value)) <= bound);
        CHECK(oracle::close(rg.value, g.exact(), 1e-8));
    }
}

TEST_CASE("property: translation invariance")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const Bumps g(rng);
        const double c = -20.0 + static_cast<double>(rng() % 4000) / 100.0;
        const auto r0 = integrate(line([&](std::span<const double> x) { return g(x[0]); }));
        const auto r1 = integrate(line([&](std::span<const double> x) { return g(x[0] - c); }));
        CHECK(std::fabs(r1.value - r0.value) <= r0.abs_error_estimate + r1.abs_error_estimate + 1e-13 * r0.value);
    }
}

TEST_CASE("property: monotonicity")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const Bumps g(rng), extra(rng);
        const auto rg = integrate(line([&](std::span<const double> x) { return g(x[0]); }));
        const auto rh = integrate(line([&](std::span<const double> x) { return g(x[0]) + 0.01 * extra(x[0]); }));
        CHECK(rg.value <= rh.value + rg.abs_error_estimate + rh.abs_error_estimate);
    }
}

TEST_CASE("property: determinism")
{
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const Bumps g(rng);
        IntegrationRequest req;
        req.dim = 2;
        req.domain = Box::unbounded(2);
        req.integrand = [&](std::span<const double> x) { return g(x[0]) * g(x[1]); };
        const auto a = integrate(req);
        const auto b = integrate(req);
        CHECK(a.value == b.value);
        CHECK(a.abs_error_estimate == b.abs_error_estimate);
        CHECK(a.evaluations == b.evaluations);
    }
}
