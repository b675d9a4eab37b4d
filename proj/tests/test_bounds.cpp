#include "doctest.h"

#include "lpq/bounds.hpp"
#include "lpq/entropy.hpp"
#include "lpq/error.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace lpq;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Density normal(double mu = 0.0, double var = 1.0)
{
    Matrix c(1, 1);
    c << var;
    return families::gaussian({mu}, c);
}

Density normal2(double a, double b, double c)
{
    Matrix m(2, 2);
    m << a, c, c, b;
    return families::gaussian({0.0, 0.0}, m);
}

void check_pair(const BoundCertificate& c, double lhs, double rhs, double rel = 1e-6)
{
    INFO(c.inequality_id << " " << c.density_label << " lhs " << c.lhs << " rhs " << c.rhs);
    CHECK(oracle::close(c.lhs, lhs, rel));
    CHECK(oracle::close(c.rhs, rhs, rel));
    CHECK(c.satisfied);
    CHECK(c.slack == c.rhs - c.lhs);
}

Density random_mixture(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t k = 2 + rng() % 3;
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w)
        total += x = 0.1 + u(rng);
    for (auto& x : w)
        x /= total;
    std::vector<Density> parts;
    for (std::size_t i = 0; i < k; ++i) {
        const double mu = -4.0 + 8.0 * u(rng);
        const double s = 0.3 + 2.0 * u(rng);
        switch (rng() % 3) {
        case 0:
            parts.push_back(normal(mu, s * s));
            break;
        case 1:
            parts.push_back(families::laplace(mu, s));
            break;
        default:
            parts.push_back(families::uniform({mu - s}, {mu + s}));
        }
    }
    // Renormalize weights so they sum to exactly 1 in floating point.
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i)
        acc += w[i];
    w.back() = 1.0 - acc;
    return families::mixture(w, parts);
}

} // namespace

TEST_CASE("constants")
{
    CHECK(oracle::close(constant_1d(1.0), oracle::kC1Alpha1, 1e-13));
    CHECK(oracle::close(constant_1d(2.0), oracle::kC1Alpha2, 1e-13));
    CHECK(oracle::close(constant_nd(1), oracle::kC1Alpha2, 1e-13));
    CHECK(oracle::close(constant_1d(2.0), constant_nd(1), 1e-12));
    CHECK(oracle::close(constant_nd(2), oracle::kCn2, 1e-13));
    CHECK(oracle::close(constant_nd(3), oracle::kCn3, 1e-13));
    CHECK_THROWS_AS(constant_1d(0.0), InvalidArgument);
    CHECK_THROWS_AS(constant_1d(-1.0), InvalidArgument);
    CHECK_THROWS_AS(constant_nd(0), InvalidArgument);
    // Gamma accuracy over [0.1, 50]: C(alpha) against a log-gamma evaluation.
    for (double a = 0.1; a <= 50.0; a *= 1.37) {
        const double ref = 2.0 / a * std::exp(std::lgamma(1.0 / a) + std::log(a * std::numbers::e) / a);
        CHECK(oracle::close(constant_1d(a), ref, 1e-12));
    }
}

TEST_CASE("theorem 1 worked certificates")
{
    check_pair(theorem1_check(normal(), {1.0, 2.0, 2.0, {}}), 1.0, oracle::kThm1Normal);
    check_pair(theorem1_check(families::uniform({0.0}, {1.0}), {1.0, inf, 2.0, {}}), 1.0, oracle::kThm1Uniform);
    check_pair(theorem1_check(families::exponential(1.0), {1.0, 2.0, 1.0, CenterSpec::at({0.0})}), 1.0,
               oracle::kThm1Exponential);
    const BoundCertificate c = theorem1_check(normal(), {1.0, 2.0, 2.0, {}});
    CHECK(c.inequality_id == "thm1");
    CHECK(c.q == 1.0);
    CHECK(c.r == 2.0);
    CHECK(c.alpha == 2.0);
    CHECK(c.n == 1);
    CHECK(c.lhs_error >= 0.0);
    CHECK(c.rhs_error >= 0.0);
}

TEST_CASE("theorem 2 worked certificates")
{
    check_pair(theorem2_check(normal2(1, 1, 0), 1.0, 2.0), 1.0, oracle::kThm2Normal2, 1e-7);
    check_pair(theorem2_check(normal2(4, 1, 0), 1.0, 2.0), 1.0, oracle::kThm2Normal2, 1e-7);
    check_pair(theorem2_check(normal2(1, 1, 0.5), 1.0, 2.0), 1.0, oracle::kThm2Normal2, 1e-7);
    CHECK_THROWS_WITH_AS(theorem2_check(normal2(1, 1, 0), 2.0, 2.0), doctest::Contains("requires q < r"),
                         InvalidArgument);
    CHECK_THROWS_WITH_AS(theorem1_check(normal(), {3.0, 2.0, 2.0, {}}), doctest::Contains("requires q < r"),
                         InvalidArgument);
    CHECK_THROWS_AS(theorem1_check(normal2(1, 1, 0), {1.0, 2.0, 2.0, {}}), InvalidArgument);
}

TEST_CASE("finite measure baseline")
{
    const Density ramp = families::grid({{0.0, 1.0}}, {0.0, 1.0});
    check_pair(finite_measure_check(ramp, 1.0, 2.0), 0.5, 1.0 / std::sqrt(3.0), 1e-9);
    const BoundCertificate box = finite_measure_check(families::indicator({0.0}, {4.0}), 1.0, 2.0);
    check_pair(box, 4.0, 4.0, 1e-12);
    CHECK(std::fabs(box.slack) <= 1e-9 * box.rhs);
    const BoundCertificate u = finite_measure_check(families::uniform({0.0}, {1.0}), 1.0, inf);
    check_pair(u, 1.0, 1.0, 1e-12);
    CHECK(std::fabs(u.slack) <= 1e-9);
    CHECK_THROWS_AS(finite_measure_check(normal(), 1.0, 2.0), InvalidArgument);
}

TEST_CASE("renyi and shannon bounds")
{
    check_pair(renyi_upper_bound(normal(), 2.0), oracle::kNormalRenyi2, oracle::kNormalShannon);
    check_pair(renyi_upper_bound(normal(), 0.5), oracle::kRenyiPairLhs, oracle::kRenyiHalfRhs);
    const BoundCertificate s = shannon_upper_bound(normal());
    check_pair(s, oracle::kNormalShannon, oracle::kNormalShannon);
    CHECK(std::fabs(s.slack) <= 1e-6);
    CHECK(s.tight());
    CHECK(s.status() == "tight");
    CHECK_THROWS_AS(renyi_upper_bound(normal(), 1.0), InvalidArgument);
}

TEST_CASE("renyi pair")
{
    check_pair(renyi_pair_check(normal(), 0.5, 2.0), oracle::kRenyiPairLhs, oracle::kRenyiPairRhs);
    const BoundCertificate u = renyi_pair_check(families::uniform({0.0}, {1.0}), 0.5, 2.0);
    CHECK(std::fabs(u.lhs) < 1e-12);
    CHECK(oracle::close(u.rhs, oracle::kRenyiPairUniformRhs, 1e-9));
    CHECK_THROWS_WITH_AS(renyi_pair_check(normal(), 2.0, 0.5), doctest::Contains("requires q < r"), InvalidArgument);
    // Order 1 is finite in log-norm form.
    const BoundCertificate one = renyi_pair_check(normal(), 1.0, 2.0);
    CHECK(std::fabs(one.lhs) < 1e-9);
    CHECK(one.satisfied);
    const BoundCertificate sup = renyi_pair_check(normal(), 0.5, inf);
    CHECK(sup.satisfied);
}

TEST_CASE("tsallis bound")
{
    check_pair(tsallis_bound_check(normal(), 2.0), 2.0 * oracle::kSqrtPi, oracle::kC1Alpha2);
    check_pair(tsallis_bound_check(normal(), 0.5), oracle::kNormalHalfNorm, oracle::kTsallisHalfRhs);
    check_pair(tsallis_bound_check(families::uniform({0.0}, {1.0}), 2.0), 1.0, oracle::kThm1Uniform);
}

TEST_CASE("probability bounds")
{
    const Density g = normal();
    check_pair(prob_bound_check(g, Region::box({0.0}, {inf}), 2.0), oracle::kProbLhs, oracle::kProbRhs);
    const BoundCertificate full = prob_bound_check(g, Region::all(1), 2.0);
    CHECK(full.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(full.rhs >= 1.0);
    CHECK(full.satisfied);
    const BoundCertificate empty = prob_bound_check(g, Region::box({1.0}, {0.5}), 2.0);
    CHECK(empty.lhs == 0.0);
    CHECK(empty.rhs == 0.0);
    CHECK(empty.slack == 0.0);
    CHECK(empty.satisfied);
    CHECK_THROWS_AS(prob_bound_check(g, Region::all(1), 1.0), InvalidArgument);
    CHECK_THROWS_AS(prob_bound_check(g, Region::all(2), 2.0), InvalidArgument);

    const BoundCertificate s = prob_bound_sup_check(g, Region::all(1));
    CHECK(s.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(oracle::close(s.rhs, oracle::kProbSupRhs, 1e-9));
    check_pair(prob_bound_sup_check(g, Region::box({3.0}, {inf})), oracle::kProbSup3Lhs, oracle::kProbSup3Rhs, 1e-8);
    check_pair(prob_bound_sup_check(families::uniform({0.0}, {1.0}), Region::box({0.0}, {0.5})), 0.5,
               oracle::kProbSupUniformRhs, 1e-8);
}

TEST_CASE("certificate bookkeeping")
{
    BoundCertificate c;
    c.lhs = 1.0;
    c.rhs = 0.9;
    c.lhs_error = 0.05;
    c.rhs_error = 0.06;
    c.finalize();
    CHECK(c.satisfied);
    CHECK(c.tight());
    c.rhs_error = 0.01;
    c.finalize();
    CHECK_FALSE(c.satisfied);
    CHECK(c.status() == "violated");
    c.rhs = 5.0;
    c.finalize();
    CHECK(c.status() == "ok");
    CHECK(c.slack == 4.0);
}

TEST_CASE("property: satisfied iff slack within combined error")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        BoundCertificate c;
        c.lhs = u(rng);
        c.rhs = u(rng);
        c.lhs_error = std::fabs(u(rng)) * 0.1;
        c.rhs_error = std::fabs(u(rng)) * 0.1;
        c.finalize();
        CHECK(c.satisfied == (c.slack >= -(c.lhs_error + c.rhs_error)));
    }
}

TEST_CASE("property: theorem 2 ratio is affine invariant")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const BoundCertificate base = theorem2_check(normal2(1, 1, 0), 1.0, 2.0);
    const double ratio = base.rhs / base.lhs;
    const Density mix = families::mixture(
        {0.4, 0.6}, {families::gaussian({-1.0, 0.0}, Matrix::Identity(2, 2)), normal2(2.0, 0.5, 0.3)});
    for (double r : {2.0, inf}) {
        const BoundCertificate m0 = theorem2_check(mix, 1.0, r);
        for (int trial = 0; trial < 6; ++trial) {
            Matrix a(2, 2);
            a << u(rng), u(rng), u(rng), u(rng);
            a += 1.5 * Matrix::Identity(2, 2);
            Vector m(2);
            m << u(rng), u(rng);
            const Matrix cov = a * a.transpose();
            const Density g = families::gaussian({m(0), m(1)}, cov);
            const BoundCertificate c = theorem2_check(g, 1.0, r);
            if (r == 2.0)
                CHECK(oracle::close(c.rhs / c.lhs, ratio, 1e-6));
            CHECK(c.satisfied);
            // Pushforward of a non-Gaussian through y -> A y + m.
            const Density t = families::affine(mix, a.inverse(), -a.inverse() * m, 1.0 / std::fabs(a.determinant()));
            const BoundCertificate mt = theorem2_check(t, 1.0, r);
            const double rel_err = mt.rhs_error / mt.rhs + mt.lhs_error / mt.lhs + m0.rhs_error / m0.rhs +
                                   m0.lhs_error / m0.lhs;
            CHECK(std::fabs(mt.rhs / mt.lhs - m0.rhs / m0.lhs) <= (1e-6 + rel_err) * (m0.rhs / m0.lhs));
        }
    }
}

TEST_CASE("property: orders near one agree with the shannon bound")
{
    const Density u = families::uniform({0.0}, {1.0});
    const double su = shannon_upper_bound(u).rhs;
    for (double eps : {-1e-3, 1e-3}) {
        CHECK(std::fabs(renyi_upper_bound(u, 1.0 + eps).rhs - su) <= 1e-4);
        CHECK(std::fabs(std::log(tsallis_bound_check(u, 1.0 + eps).rhs) - su) <= 1e-4);
    }
    // Above order 1 both use the ordinary covariance. Below it the escort
    // covariance moves log det by about (n / 2) |eps| for a Gaussian.
    const Density g = normal();
    const double sg = shannon_upper_bound(g).rhs;
    CHECK(std::fabs(renyi_upper_bound(g, 1.001).rhs - sg) <= 1e-4);
    CHECK(std::fabs(std::log(tsallis_bound_check(g, 1.001).rhs) - sg) <= 1e-4);
    CHECK(std::fabs(renyi_upper_bound(g, 0.999).rhs - sg) <= 0.5 * 1e-3 * 1.01);
    CHECK(std::fabs(std::log(tsallis_bound_check(g, 0.999).rhs) - sg) <= 0.5 * 1e-3 * 1.01);
}

TEST_CASE("property: soundness on randomized mixtures")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 12; ++trial) {
        const Density f = random_mixture(rng);
        std::vector<BoundCertificate> certs;
        for (double q : {0.5, 1.0, 2.0})
            for (double r : {2.5, 4.0, inf})
                for (double alpha : {1.0, 2.0})
                    certs.push_back(theorem1_check(f, {q, r, alpha, {}}));
        certs.push_back(theorem2_check(f, 1.0, 2.0));
        certs.push_back(renyi_upper_bound(f, 2.0));
        certs.push_back(renyi_upper_bound(f, 0.5));
        certs.push_back(shannon_upper_bound(f));
        certs.push_back(renyi_pair_check(f, 0.5, 2.0));
        certs.push_back(tsallis_bound_check(f, 2.0));
        certs.push_back(tsallis_bound_check(f, 0.5));
        certs.push_back(prob_bound_check(f, Region::box({0.0}, {inf}), 2.0));
        certs.push_back(prob_bound_sup_check(f, Region::box({-1.0}, {1.0})));
        for (const auto& c : certs) {
            INFO(trial << " " << c.inequality_id << " q=" << c.q.value_or(NAN) << " r=" << c.r.value_or(NAN)
                       << " slack=" << c.slack);
            CHECK(c.satisfied);
        }
    }
}
