#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "hypcap/capacity.hpp"
#include "hypcap/experiments.hpp"

using namespace hypcap;
using C = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

double rho(const HypDisk& a, const HypDisk& b) { return hypDistance(a.center, b.center); }

void requireGeneratorFeasible(const Constellation& c) {
    const auto rep = validate(c);
    CHECK(rep.feasible());
    CHECK(rep.minPairMargin >= -1e-12);
}

}  // namespace

TEST_CASE("validate") {
    CHECK(validate(Constellation{{{C(0), 0.5}}, 0.02}).feasible());
    CHECK(validate(Constellation{{{C(0), 0.5}}, 0.02}).minPairMargin == std::numeric_limits<double>::infinity());

    const HypDisk a{C(-0.1, 0.2), 0.4};
    const HypDisk b{hypCirclePoint(a.center, 0.4 + 0.3 - 0.1, 0.7), 0.3};
    const auto rep = validate(Constellation{{a, b}, 0.0});
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].i == 0);
    CHECK(rep.violations[0].j == 1);
    CHECK(rep.violations[0].margin == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(rep.describe().find("disks 0 and 1") != std::string::npos);

    const auto outside = validate(Constellation{{{C(1.2), 0.1}, {C(0), 0.1}}, 0.0});
    REQUIRE(outside.violations.size() == 1);
    CHECK(outside.violations[0].j == -1);

    // roundoff below the separation is tolerated, a real overlap is not
    const HypDisk t{hypCirclePoint(a.center, 0.7 - 1e-9, 0.7), 0.3};
    CHECK_FALSE(validate(Constellation{{a, t}, 0.0}).feasible());
    const HypDisk u{hypCirclePoint(a.center, 0.72 - 1e-14, 0.7), 0.3};
    CHECK(validate(Constellation{{a, u}, 0.02}).feasible());
    const HypDisk v{hypCirclePoint(a.center, 0.72 - 1e-9, 0.7), 0.3};
    CHECK_FALSE(validate(Constellation{{a, v}, 0.02}).feasible());
    // exact separation is feasible
    const HypDisk s{hypCirclePoint(a.center, 0.72, 0.7), 0.3};
    CHECK(validate(Constellation{{a, s}, 0.02}).feasible());
}

TEST_CASE("collinear chain") {
    const auto two = collinearChain({0.3, 0.3}, 0.1, 0);
    CHECK(std::abs(two.disks[0].center) == 0.0);
    CHECK(std::abs(two.disks[1].center - C(std::tanh(0.35))) < 1e-15);
    CHECK(std::abs(collinearChain({0.4}, 0.1, 0).disks[0].center) == 0.0);

    const auto c = collinearFamily4(0.05);
    const auto r = c.radii();
    const double d = 0.05;
    CHECK(std::abs(c.disks[0].center - C(-std::tanh((r[1] + r[0] + d) / 2))) < 1e-15);
    CHECK(std::abs(c.disks[1].center) == 0.0);
    CHECK(std::abs(c.disks[2].center - C(std::tanh((r[1] + r[2] + d) / 2))) < 1e-15);
    CHECK(std::abs(c.disks[3].center - C(std::tanh((r[1] + 2 * r[2] + r[3] + 2 * d) / 2))) < 1e-15);
    CHECK(referenceDiameter() == doctest::Approx(std::log(16.0)).epsilon(1e-14));

    const auto rep = validate(Constellation{c.disks, 0.0});
    CHECK(rep.feasible());
    CHECK(rep.minPairMargin == doctest::Approx(0.05).epsilon(1e-12));

    for (int m : {2, 3, 4}) {
        for (int anchor = 0; anchor < m; ++anchor) {
            const auto ch = collinearChain(collinearFamilyRadii(m), 0.07, anchor);
            requireGeneratorFeasible(ch);
            CHECK(std::abs(ch.disks[anchor].center) == 0.0);
            for (int i = 0; i < m; ++i) CHECK(ch.disks[i].center.imag() == 0.0);
            for (int i = 0; i + 1 < m; ++i)
                CHECK(std::abs(rho(ch.disks[i], ch.disks[i + 1]) - (ch.disks[i].radius + ch.disks[i + 1].radius + 0.07)) < 1e-13);
        }
    }
    CHECK_THROWS_AS(collinearChain({0.3, 0.3}, -0.1, 0), DomainError);
    CHECK_THROWS_AS(collinearChain({0.3, 0.3}, 0.1, 2), DomainError);
}

TEST_CASE("centered chain") {
    const std::vector<double> r{0.5, 0.4, 0.25, 0.2};
    const auto c = centeredChain(r, 0.02);
    requireGeneratorFeasible(c);
    // hyperbolic extent symmetric about the origin
    const double left = hypDistance(C(0), c.disks.front().center) + r.front();
    const double right = hypDistance(C(0), c.disks.back().center) + r.back();
    CHECK(left == doctest::Approx(right).epsilon(1e-12));
}

TEST_CASE("circle-mounted disks") {
    const auto triple = circleMounted({0.2, 0.2, 0.2}, {0, 2 * pi / 3, 4 * pi / 3}, 0.5);
    requireGeneratorFeasible(triple);
    for (const auto& d : triple.disks) CHECK(std::abs(d.center) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_FALSE(validate(circleMounted({0.2, 0.2}, {1.0, 1.0}, 0.5)).feasible());

    const double th = chordAngle(0.5, 0.9);
    CHECK(hypDistance(C(0.5), std::polar(0.5, th)) == doctest::Approx(0.9).epsilon(1e-13));
    CHECK_THROWS_AS(chordAngle(0.5, 5.0), DomainError);
}

TEST_CASE("permutation family") {
    for (auto layout : {Layout::Diameter, Layout::Circle}) {
        const auto fam = permutationFamily({0.5, 0.4, 0.25, 0.2}, layout, 0.02);
        CHECK(fam.size() == 12);
        std::set<std::string> all;
        for (const auto& lc : fam) {
            all.insert(lc.label);
            all.insert(std::string(lc.label.rbegin(), lc.label.rend()));
            requireGeneratorFeasible(lc.constellation);
            const auto& ds = lc.constellation.disks;
            for (int i = 0; i < 3; ++i)
                CHECK(std::abs(rho(ds[i], ds[i + 1]) - ds[i].radius - ds[i + 1].radius - 0.02) < 1e-12);
        }
        CHECK(all.size() == 24);
    }
    CHECK(canonicalLabel("DBAC") == "CABD");
    CHECK_THROWS_AS(permutationFamily({0.5, 0.5, 0.25, 0.2}, Layout::Diameter, 0.02), DomainError);
    CHECK_THROWS_AS(permutationFamily({0.5, 0.4, 0.25}, Layout::Diameter, 0.02), DomainError);
}

TEST_CASE("diameter orderings by capacity") {
    const Table t = permTable({0.5, 0.4, 0.25, 0.2}, Layout::Diameter, 0.02, SolverConfig{}, 4);
    REQUIRE(t.rows.size() == 12);
    const std::vector<std::string> expected{"CABD", "CBAD", "BACD", "BADC", "ABCD", "BCAD",
                                            "BDAC", "ABDC", "ACBD", "ADBC", "ACDB", "ADCB"};
    for (std::size_t i = 0; i < 12; ++i) {
        std::string label;
        for (int k = 1; k <= 4; ++k) label += std::get<std::string>(t.rows[i][k]);
        CHECK(canonicalLabel(label) == expected[i]);
        if (i) CHECK(std::get<double>(t.rows[i][5]) > std::get<double>(t.rows[i - 1][5]));
    }
}

TEST_CASE("rolling path, three arcs") {
    const auto radii = rollingCaseRadii(1);
    const double gap = 0.02, r4 = radii[3];
    const auto fixed = rollingFixedDisks({radii[0], radii[1], radii[2]}, gap);
    CHECK(fixed[0].center.real() == doctest::Approx(-std::tanh((radii[0] - gap) / 2)).epsilon(1e-15));
    const auto p = rollingPath(fixed, r4, gap);
    REQUIRE(p.junctions() == 2);
    CHECK(p.breakpoints[1] == doctest::Approx(1.0 / 3.0));
    CHECK(p.breakpoints[2] == doctest::Approx(2.0 / 3.0));

    const C start = pathPoint(p, 0.0);
    CHECK(std::abs(start.imag()) < 1e-15);
    CHECK(start.real() < fixed[0].center.real());
    CHECK(hypDistance(start, fixed[0].center) == doctest::Approx(radii[0] + r4 + gap).epsilon(1e-13));
    const C end = pathPoint(p, 1.0);
    CHECK(std::abs(end.imag()) < 1e-15);
    CHECK(end.real() > fixed[2].center.real());

    const C j = pathPoint(p, 1.0 / 3.0);
    CHECK(j.imag() > 0);
    CHECK(hypDistance(j, fixed[0].center) == doctest::Approx(radii[0] + r4 + gap).epsilon(1e-12));
    CHECK(hypDistance(j, fixed[1].center) == doctest::Approx(radii[1] + r4 + gap).epsilon(1e-12));
    const auto both = hypCircleIntersection(fixed[0].center, radii[0] + r4 + gap, fixed[1].center, radii[1] + r4 + gap);
    bool found = false;
    for (const auto& q : both) found = found || (q.imag() > 0 && std::abs(q - j) < 1e-12);
    CHECK(found);

    for (int k = 0; k <= 1000; ++k) {
        const double tau = k / 1000.0;
        CHECK(std::abs(pathPoint(p, tau) - pathPoint(p, tau + 1e-6)) <= 1e-4);
        const auto c = rollingConstellation(p, tau);
        CHECK(validate(c).feasible());
        double touch = 1e9;
        for (int i = 0; i < 3; ++i) touch = std::min(touch, pairMargin(c.disks[i], c.disks[3], gap));
        CHECK(std::abs(touch) < 1e-10);
    }
}

TEST_CASE("rolling path mirror symmetry") {
    const auto fixed = rollingFixedDisks({0.3, 0.3, 0.3}, 0.02);
    const auto p = rollingPath(fixed, 0.2, 0.02);
    const Mobius T{fixed[1].center, 0.0};
    for (double tau : {0.0, 0.1, 0.3, 0.45}) {
        const C w = mobiusApply(T, pathPoint(p, tau)), v = mobiusApply(T, pathPoint(p, 1 - tau));
        CHECK(std::abs(v + std::conj(w)) < 1e-12);
    }
}

TEST_CASE("rolling path, single junction") {
    // a mobile disk too large to reach the small middle disk
    const auto fixed = rollingFixedDisks({0.5, 0.1, 0.5}, 0.02);
    const auto p = rollingPath(fixed, 1.0, 0.02);
    CHECK(p.junctions() == 1);
    const C j = pathPoint(p, 0.5);
    CHECK(hypDistance(j, fixed[0].center) == doctest::Approx(1.52).epsilon(1e-12));
    CHECK(hypDistance(j, fixed[2].center) == doctest::Approx(1.52).epsilon(1e-12));
    CHECK(hypDistance(j, fixed[1].center) > 1.12);
}

TEST_CASE("er_config") {
    const double r = 0.5, gap = 0.02;
    const auto two = erConfig(2, r);
    CHECK(std::abs(two.disks[1].center - C(std::tanh((2 * r + gap) / 4))) < 1e-15);
    CHECK(rho(two.disks[0], two.disks[1]) == doctest::Approx(2 * r + gap).epsilon(1e-14));

    const auto three = erConfig(3, r);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) CHECK(rho(three.disks[i], three.disks[j]) == doctest::Approx(1.02).epsilon(1e-13));

    const auto sq = erConfig(4, r, ERCase::I);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(pairMargin(sq.disks[i], sq.disks[(i + 1) % 4], 0.0) - gap) < 1e-10);
        CHECK(pairMargin(sq.disks[i], sq.disks[(i + 2) % 4], 0.0) > gap);
        CHECK(sq.disks[i].center.real() * sq.disks[i].center.imag() == doctest::Approx(0.0));
    }
    // rotation by pi/2 permutes the centers
    for (const auto& d : sq.disks) {
        const C rot = d.center * C(0, 1);
        double best = 1e9;
        for (const auto& e : sq.disks) best = std::min(best, std::abs(rot - e.center));
        CHECK(best < 1e-12);
    }

    for (double rr : {0.02, 0.5, 1.0, 2.0}) {
        const auto tri = erConfig(4, rr, ERCase::II);
        requireGeneratorFeasible(tri);
        int touching = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double g = pairMargin(tri.disks[i], tri.disks[j], 0.0);
                CHECK(g >= gap - 1e-10);
                touching += std::abs(g - gap) < 1e-10;
            }
        CHECK(touching == 5);
        const double rays[] = {0.0, 2 * pi / 3, -2 * pi / 3, pi / 3};
        for (int i = 0; i < 4; ++i) CHECK(std::arg(tri.disks[i].center) == doctest::Approx(rays[i]).epsilon(1e-12));

        const auto eq = erConfig(4, rr, ERCase::IIEqualDistance);
        requireGeneratorFeasible(eq);
        const double s = std::abs(eq.disks[0].center);
        for (const auto& d : eq.disks) CHECK(std::abs(d.center) == doctest::Approx(s).epsilon(1e-14));
        CHECK(std::abs(pairMargin(eq.disks[0], eq.disks[1], 0.0) - gap) < 1e-10);
        CHECK(std::abs(pairMargin(eq.disks[1], eq.disks[2], 0.0) - gap) < 1e-10);
    }
    for (int m : {1, 2, 3})
        for (double rr : {0.02, 1.0, 2.0}) requireGeneratorFeasible(erConfig(m, rr));
    CHECK_THROWS_AS(erConfig(5, 0.5), DomainError);
    CHECK_THROWS_AS(erConfig(2, 0.0), DomainError);
}

TEST_CASE("three disks on a circle") {
    const auto c = threeOnCircle(0.3, 0.5, 0.8);
    CHECK(rho(c.disks[0], c.disks[1]) == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(rho(c.disks[0], c.disks[2]) == doctest::Approx(0.8).epsilon(1e-13));
    const double dmax = threeOnCircleMaxDistance(0.3, 0.5, 0.02);
    const auto far = threeOnCircle(0.3, 0.5, dmax);
    CHECK(pairMargin(far.disks[1], far.disks[2], 0.0) == doctest::Approx(0.02).epsilon(1e-10));
    CHECK(rho(far.disks[0], far.disks[1]) == doctest::Approx(dmax).epsilon(1e-12));
}

TEST_CASE("Mobius image of a constellation") {
    const auto c = collinearFamily4(0.1);
    const Mobius T{C(0.2, -0.3), 1.1};
    const auto d = mapConstellation(T, c);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            CHECK(rho(d.disks[i], d.disks[j]) == doctest::Approx(rho(c.disks[i], c.disks[j])).epsilon(1e-12));
}
