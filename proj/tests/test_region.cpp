#include "doctest.h"

#include "lpq/error.hpp"
#include "lpq/region.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace lpq;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("box and halfspace membership")
{
    const Region box = Region::box({0.0, -1.0}, {1.0, 1.0});
    const std::vector<double> in = {0.5, 0.0};
    const std::vector<double> edge = {1.0, 1.0};
    const std::vector<double> out = {1.5, 0.0};
    CHECK(box.contains(in));
    CHECK(box.contains(edge));
    CHECK_FALSE(box.contains(out));
    const Region h = Region::halfspace({1.0, 1.0}, 1.0);
    CHECK(h.contains(std::vector<double>{0.5, 0.5}));
    CHECK_FALSE(h.contains(std::vector<double>{0.0, 0.5}));
    CHECK(Region::complement(h).contains(std::vector<double>{0.0, 0.5}));
    CHECK(Region::all(3).contains(std::vector<double>{1e300, -1e300, 0.0}));
}

TEST_CASE("json round trip")
{
    const char* text = R"({"kind": "intersection", "parts": [
        {"kind": "box", "box": [[0, "inf"], ["-inf", 2]]},
        {"kind": "complement", "of": {"kind": "halfspace", "normal": [1, -1], "offset": 3}}]})";
    const Region r = Region::parse(text);
    CHECK(r.dim() == 2);
    const Region back = Region::from_json(r.to_json());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
        const std::vector<double> x = {u(rng), u(rng)};
        CHECK(r.contains(x) == back.contains(x));
    }
    CHECK_THROWS_AS(Region::parse(R"({"kind": "ball"})"), InvalidArgument);
    CHECK_THROWS_AS(Region::parse("{"), InvalidArgument);
}

TEST_CASE("indicator is {0,1}-valued and idempotent on random points")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const std::vector<Region> regions = {
        Region::box({-1.0, -inf}, {1.0, 0.5}),
        Region::halfspace({0.3, -0.7}, 0.2),
        Region::complement(Region::box({0.0, 0.0}, {1.0, 1.0})),
        Region::intersection({Region::halfspace({1.0, 0.0}, 0.0), Region::halfspace({0.0, 1.0}, 0.0)}),
    };
    for (const Region& r : regions) {
        for (int i = 0; i < 2000; ++i) {
            const std::vector<double> x = {u(rng), u(rng)};
            const double a = r.indicator(x);
            CHECK((a == 0.0 || a == 1.0));
            CHECK(r.indicator(x) * r.indicator(x) == a);
            CHECK(a == (r.contains(x) ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("bounding boxes")
{
    const Box b = Region::halfspace({1.0}, 3.0).bounding_box();
    CHECK(b.lower[0] == 3.0);
    CHECK(std::isinf(b.upper[0]));
    CHECK(Region::halfspace({-2.0}, 4.0).bounding_box().upper[0] == -2.0);
    CHECK(Region::complement(Region::all(2)).bounding_box().empty());
    CHECK(Region::box({0.0}, {1.0}).is_box());
    CHECK_FALSE(Region::halfspace({1.0, 1.0}, 0.0).is_box());
    const Box i = Region::intersection({Region::box({0.0, 0.0}, {2.0, 2.0}), Region::box({1.0, -1.0}, {3.0, 1.0})})
                      .bounding_box();
    CHECK(i.lower == std::vector<double>{1.0, 0.0});
    CHECK(i.upper == std::vector<double>{2.0, 1.0});
}

TEST_CASE("pullback agrees with the forward map")
{
    Matrix a(2, 2);
    a << 2.0, 0.5, 0.0, 1.5;
    Vector m(2);
    m << 1.0, -1.0;
    const Region omega = Region::intersection(
        {Region::box({-1.0, -2.0}, {2.0, 3.0}), Region::halfspace({1.0, 1.0}, 0.5)});
    const Region pulled = omega.pullback(a, m);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        Vector y(2);
        y << u(rng), u(rng);
        const Vector x = a * y + m;
        CHECK(pulled.contains(std::vector<double>{y(0), y(1)}) == omega.contains(std::vector<double>{x(0), x(1)}));
    }
}

TEST_CASE("axis breaks of a halfspace depend on the fixed prefix")
{
    const Region h = Region::halfspace({1.0, 2.0}, 4.0);
    std::vector<double> out;
    h.axis_breaks(0, {}, out);
    CHECK(out.empty());
    const std::vector<double> prefix = {1.0};
    h.axis_breaks(1, prefix, out);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(1.5));
}
