#include "doctest.h"

#include "lpq/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace lpq::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

double abs_sum(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::fabs(a[i] * b[i]);
    return s;
}

} // namespace

TEST_CASE("scalar reference kernels")
{
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {4, -5, 6};
    CHECK(scalar::dot(a, b) == 12.0);
    const GkSums s = scalar::gk_reduce(b, a, std::vector<double>{0, 1, 0});
    CHECK(s.kronrod == 12.0);
    CHECK(s.gauss == -5.0);
    CHECK(s.abs_kronrod == 32.0);
    CHECK(scalar::abs_deviation(b, a, 1.0) == 3.0 + 12.0 + 15.0);
    CHECK(scalar::argmax(b) == 2);
    CHECK(scalar::argmax(std::vector<double>{}) == 0);
}

TEST_CASE("argmax ignores NaN and returns the first maximum")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> v = {nan, 1.0, 3.0, nan, 3.0, 2.0, 3.0, -1.0, nan};
    CHECK(scalar::argmax(v) == 2);
    CHECK(argmax(v) == 2);
    const std::vector<double> all_nan(7, nan);
    CHECK(scalar::argmax(all_nan) == all_nan.size());
    CHECK(argmax(all_nan) == all_nan.size());
}

TEST_CASE("dispatched kernels agree with the scalar reference")
{
    std::mt19937_64 rng(7);
    INFO("active isa: " << isa_name(active_isa()));
    CHECK(isa_available(Isa::scalar));
    for (std::size_t n = 0; n < 70; ++n) {
        const auto a = random_vector(rng, n, 3.0);
        const auto b = random_vector(rng, n, 2.0);
        const auto g = random_vector(rng, n, 1.0);
        const double tol = 8.0 * std::numeric_limits<double>::epsilon() * (abs_sum(a, b) + 1e-300);
        CHECK(std::fabs(dot(a, b) - scalar::dot(a, b)) <= tol);
        const GkSums s = gk_reduce(a, b, g);
        const GkSums r = scalar::gk_reduce(a, b, g);
        CHECK(std::fabs(s.kronrod - r.kronrod) <= tol);
        CHECK(std::fabs(s.gauss - r.gauss) <= 8.0 * std::numeric_limits<double>::epsilon() * (abs_sum(a, g) + 1e-300));
        CHECK(std::fabs(s.abs_kronrod - r.abs_kronrod) <= tol);
        CHECK(std::fabs(abs_deviation(a, b, 0.25) - scalar::abs_deviation(a, b, 0.25)) <= 4.0 * tol + 1e-300);
        CHECK(argmax(a) == scalar::argmax(a));
    }
}

TEST_CASE("every available variant matches the reference")
{
    std::mt19937_64 rng(11);
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (!isa_available(isa))
            continue;
        INFO("isa: " << isa_name(isa));
        for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 21u, 64u, 1000u, 4097u}) {
            auto a = random_vector(rng, n, 5.0);
            const auto b = random_vector(rng, n, 1.0);
            const double tol = 8.0 * std::numeric_limits<double>::epsilon() * abs_sum(a, b);
            const double d = isa == Isa::avx2 ? avx2::dot(a, b) : neon::dot(a, b);
            CHECK(std::fabs(d - scalar::dot(a, b)) <= tol);
            const GkSums s = isa == Isa::avx2 ? avx2::gk_reduce(a, b, b) : neon::gk_reduce(a, b, b);
            CHECK(std::fabs(s.kronrod - scalar::gk_reduce(a, b, b).kronrod) <= tol);
            CHECK(std::fabs(s.abs_kronrod - scalar::gk_reduce(a, b, b).abs_kronrod) <= tol);
            // Duplicate maxima and NaNs exercise the tie-breaking path.
            if (n > 4) {
                a[n / 2] = 10.0;
                a[n - 1] = 10.0;
                a[0] = std::numeric_limits<double>::quiet_NaN();
            }
            const std::size_t m = isa == Isa::avx2 ? avx2::argmax(a) : neon::argmax(a);
            CHECK(m == scalar::argmax(a));
        }
    }
}
