#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hypcap/hypgeo.hpp"

using namespace hypcap;
using C = std::complex<double>;

TEST_CASE("hypDistance") {
    CHECK(hypDistance(C(0.3, -0.2), C(0.3, -0.2)) == 0.0);
    CHECK(hypDistance(C(0), C(0.6)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(hypDistance(C(-0.6), C(0.6)) == doctest::Approx(std::log(16.0)).epsilon(1e-14));
    CHECK_THROWS_AS(hypDistance(C(1.0), C(0)), DomainError);
    CHECK_THROWS_AS(hypDistance(C(0), C(0.8, 0.8)), DomainError);
}

TEST_CASE("hypDistance agrees with the cosh form of the metric") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.69, 0.69);
    for (int k = 0; k < 50; ++k) {
        const C x(u(rng), u(rng)), y(u(rng), u(rng));
        const double ch = 1.0 + 2.0 * std::norm(x - y) / ((1.0 - std::norm(x)) * (1.0 - std::norm(y)));
        CHECK(hypDistance(x, y) == doctest::Approx(std::acosh(ch)).epsilon(1e-12));
    }
}

TEST_CASE("hypMidpoint") {
    const C x(0.2, 0.5);
    CHECK(std::abs(hypMidpoint(x, x) - x) < 1e-15);
    CHECK(std::abs(hypMidpoint(C(-0.7), C(0.7))) < 1e-15);
    CHECK(std::abs(hypMidpoint(C(0), C(0.6)) - C(1.0 / 3.0)) < 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.69, 0.69);
    for (int k = 0; k < 20; ++k) {
        const C a(u(rng), u(rng)), b(u(rng), u(rng));
        const C mid = hypMidpoint(a, b);
        const double d = hypDistance(a, b);
        CHECK(hypDistance(a, mid) == doctest::Approx(d / 2).epsilon(1e-12));
        CHECK(hypDistance(mid, b) == doctest::Approx(d / 2).epsilon(1e-12));
    }
}

TEST_CASE("hypToEuc and eucToHyp") {
    const auto e0 = hypToEuc(HypDisk{C(0), 1.3});
    CHECK(std::abs(e0.center) == 0.0);
    CHECK(e0.radius == doctest::Approx(std::tanh(0.65)).epsilon(1e-15));

    const auto e = hypToEuc(HypDisk{C(0.5), 1.0});
    // endpoints on the real axis: tanh(artanh(0.5) -+ 1/2)
    const double lo = std::tanh(std::atanh(0.5) - 0.5), hi = std::tanh(std::atanh(0.5) + 0.5);
    CHECK(std::abs(e.center - C((lo + hi) / 2)) < 1e-15);
    CHECK(e.radius == doctest::Approx((hi - lo) / 2).epsilon(1e-15));
    CHECK(e.center.real() == doctest::Approx(0.415401).epsilon(1e-6));
    CHECK(e.radius == doctest::Approx(0.366135).epsilon(1e-6));
    // the Euclidean diameter endpoints lie at hyperbolic distance 1 from the center
    CHECK(hypDistance(C(0.5), e.center - e.radius) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(hypDistance(C(0.5), e.center + e.radius) == doctest::Approx(1.0).epsilon(1e-13));

    const auto degenerate = hypToEuc(HypDisk{C(0.4, 0.1), 0.0});
    CHECK(std::abs(degenerate.center - C(0.4, 0.1)) < 1e-16);
    CHECK(degenerate.radius == 0.0);

    const auto h0 = eucToHyp(EucDisk{C(0), 0.5});
    CHECK(std::abs(h0.center) == 0.0);
    CHECK(h0.radius == doctest::Approx(2 * std::atanh(0.5)).epsilon(1e-15));

    const auto h = eucToHyp(EucDisk{e.center, e.radius});
    CHECK(std::abs(h.center - C(0.5)) < 1e-12);
    CHECK(h.radius == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(hypToEuc(HypDisk{C(0), -0.1}), DomainError);
    CHECK_THROWS_AS(eucToHyp(EucDisk{C(0.6), 0.4}), DomainError);
    CHECK_THROWS_AS(eucToHyp(EucDisk{C(0.2), 0.0}), DomainError);
}

TEST_CASE("disk conversion roundtrip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0, 0.95), M(0.01, 2.0);
    for (int k = 0; k < 200; ++k) {
        const HypDisk d{std::polar(rad(rng), ang(rng)), M(rng)};
        const auto back = eucToHyp(hypToEuc(d));
        CHECK(std::abs(back.center - d.center) < 1e-12);
        CHECK(std::abs(back.radius - d.radius) < 1e-12);
    }
}

TEST_CASE("area and circumference") {
    CHECK(hypArea(0.0) == 0.0);
    CHECK(hypArea(1.0) == doctest::Approx(3.4122763).epsilon(1e-7));
    CHECK(hypCircumference(1.0) == doctest::Approx(7.3840069).epsilon(1e-7));
    // area is the integral of the circumference
    const int k = 2000;
    double integral = 0;
    for (int i = 0; i < k; ++i) integral += hypCircumference((i + 0.5) / k) / k;
    CHECK(integral == doctest::Approx(hypArea(1.0)).epsilon(1e-6));
    CHECK_THROWS_AS(hypArea(-1.0), DomainError);
    CHECK_THROWS_AS(hypCircumference(-1.0), DomainError);
}

TEST_CASE("Mobius self-maps") {
    const C z(0.3, -0.4);
    CHECK(std::abs(mobiusApply(Mobius{}, z) - z) < 1e-16);

    const HypDisk d{C(-0.2, 0.55), 0.7};
    const auto img = mobiusMapDisk(Mobius{d.center, 0.8}, d);
    CHECK(std::abs(img.center) < 1e-15);
    CHECK(img.radius == d.radius);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6), ph(-3, 3);
    for (int k = 0; k < 20; ++k) {
        const Mobius T{C(u(rng), u(rng)), ph(rng)};
        const C x(u(rng), u(rng)), y(u(rng), u(rng));
        CHECK(hypDistance(mobiusApply(T, x), mobiusApply(T, y)) == doctest::Approx(hypDistance(x, y)).epsilon(1e-11));
        CHECK(std::abs(mobiusApply(mobiusInverse(T), mobiusApply(T, x)) - x) < 1e-14);
    }
}

TEST_CASE("hypCirclePoint and hypCircleAngle") {
    const C c(0.3, 0.2);
    for (double th : {-2.0, 0.0, 0.5, 3.0}) {
        const C p = hypCirclePoint(c, 0.8, th);
        CHECK(hypDistance(c, p) == doctest::Approx(0.8).epsilon(1e-13));
        CHECK(hypCircleAngle(c, p) == doctest::Approx(th).epsilon(1e-13));
    }
}

TEST_CASE("hypCircleIntersection") {
    CHECK(hypCircleIntersection(C(0.1), 0.3, C(0.1), 0.5).empty());

    const auto pts = hypCircleIntersection(C(-0.3), 0.8, C(0.3), 0.8);
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        CHECK(std::abs(p.real()) < 1e-14);
        CHECK(hypDistance(p, C(-0.3)) == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(hypDistance(p, C(0.3)) == doctest::Approx(0.8).epsilon(1e-12));
    }

    // tangent circles: compare with a dense scan of the first circle
    const C c1(0.1, 0.2), c2(-0.3, 0.4);
    const double M1 = 0.4, M2 = hypDistance(c1, c2) - M1;
    const auto tp = hypCircleIntersection(c1, M1, c2, M2);
    REQUIRE(tp.size() == 1);
    double best = 1e9;
    C bestPoint;
    for (int k = 0; k < 200000; ++k) {
        const C p = hypCirclePoint(c1, M1, 2 * std::numbers::pi * k / 200000.0);
        const double dist = hypDistance(p, c2);
        if (dist < best) best = dist, bestPoint = p;
    }
    CHECK(best == doctest::Approx(M2).epsilon(1e-9));
    CHECK(std::abs(bestPoint - tp[0]) < 1e-4);
}

TEST_CASE("float scalar instantiation") {
    CHECK(hypDistance(std::complex<float>(0), std::complex<float>(0.6f)) == doctest::Approx(std::log(4.0)).epsilon(1e-6));
}
