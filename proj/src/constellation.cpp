#include "hypcap/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypcap/errors.hpp"

namespace hypcap {

namespace {

constexpr double pi = std::numbers::pi;

// Euclidean coordinate on the diameter at signed hyperbolic distance s from 0.
double diameterPoint(double s) { return std::tanh(s / 2.0); }

}  // namespace

std::vector<double> Constellation::radii() const {
    std::vector<double> r;
    r.reserve(disks.size());
    for (const auto& d : disks) r.push_back(d.radius);
    return r;
}

std::vector<cplx> Constellation::centers() const {
    std::vector<cplx> z;
    z.reserve(disks.size());
    for (const auto& d : disks) z.push_back(d.center);
    return z;
}

double pairMargin(const HypDisk& a, const HypDisk& b, double delta) {
    return hypDistance(a.center, b.center) - a.radius - b.radius - delta;
}

FeasibilityReport validate(const Constellation& c) {
    FeasibilityReport rep{{}, std::numeric_limits<double>::infinity()};
    std::vector<bool> inside(c.disks.size(), true);
    for (int i = 0; i < c.size(); ++i) {
        const auto& d = c.disks[i];
        if (!(std::abs(d.center) < 1.0) || !(d.radius > 0.0)) {
            inside[i] = false;
            rep.violations.push_back({i, -1, 1.0 - std::abs(d.center)});
        }
    }
    for (int i = 0; i < c.size(); ++i) {
        for (int j = i + 1; j < c.size(); ++j) {
            if (!inside[i] || !inside[j]) continue;
            const double g = pairMargin(c.disks[i], c.disks[j], c.delta);
            rep.minPairMargin = std::min(rep.minPairMargin, g);
            // Generators place neighbours at exactly r_i + r_j + delta, so roundoff is tolerated
            // there; with delta = 0 the disks must still be disjoint.
            if (c.delta > 0.0 ? g < -marginTolerance : !(g > 0.0)) rep.violations.push_back({i, j, g});
        }
    }
    return rep;
}

std::string FeasibilityReport::describe() const {
    if (violations.empty()) return "feasible";
    std::ostringstream os;
    os.precision(6);
    for (std::size_t k = 0; k < violations.size(); ++k) {
        const auto& v = violations[k];
        if (k) os << "; ";
        if (v.j < 0)
            os << "disk " << v.i << " is not inside the unit disk";
        else
            os << "disks " << v.i << " and " << v.j << " violate the separation by " << -v.margin;
    }
    return os.str();
}

Constellation mapConstellation(const Mobius& T, const Constellation& c) {
    Constellation out{{}, c.delta};
    out.disks.reserve(c.disks.size());
    for (const auto& d : c.disks) out.disks.push_back(mobiusMapDisk(T, d));
    return out;
}

Constellation collinearChain(const std::vector<double>& radii, double d, int anchorIndex) {
    if (d < 0.0) throw DomainError("collinearChain: negative gap");
    if (radii.empty()) return {};
    if (anchorIndex < 0 || anchorIndex >= static_cast<int>(radii.size()))
        throw DomainError("collinearChain: anchor index out of range");
    for (double r : radii)
        if (!(r > 0.0)) throw DomainError("collinearChain: radii must be positive");
    std::vector<double> s(radii.size(), 0.0);
    for (std::size_t i = 1; i < radii.size(); ++i) s[i] = s[i - 1] + radii[i - 1] + radii[i] + d;
    const double shift = s[anchorIndex];
    Constellation c{{}, d};
    for (std::size_t i = 0; i < radii.size(); ++i) c.disks.push_back({cplx(diameterPoint(s[i] - shift)), radii[i]});
    return c;
}

Constellation centeredChain(const std::vector<double>& radii, double d) {
    Constellation c = collinearChain(radii, d, 0);
    if (c.disks.empty()) return c;
    double total = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) total += 2.0 * radii[i] + (i ? d : 0.0);
    // disk 0 spans [-r_0, r_0]; move the left end of the union to -total/2
    const double shift = -total / 2.0 + radii[0];
    return mapConstellation(Mobius{cplx(-diameterPoint(shift)), 0.0}, c);
}

Constellation circleMounted(const std::vector<double>& radii, const std::vector<double>& angles,
                            double circleRadius, double delta) {
    if (radii.size() != angles.size()) throw DomainError("circleMounted: radii and angles differ in length");
    if (!(circleRadius >= 0.0 && circleRadius < 1.0)) throw DomainError("circleMounted: circle radius not in [0,1)");
    Constellation c{{}, delta};
    for (std::size_t i = 0; i < radii.size(); ++i) c.disks.push_back({std::polar(circleRadius, angles[i]), radii[i]});
    return c;
}

double chordAngle(double circleRadius, double dist) {
    // sh(D/2) = 2 R sin(theta/2) / (1 - R^2)
    const double s = std::sinh(dist / 2.0) * (1.0 - circleRadius * circleRadius) / (2.0 * circleRadius);
    if (s > 1.0) throw DomainError("chordAngle: distance exceeds the diameter of the circle");
    return 2.0 * std::asin(s);
}

double referenceDiameter() { return hypDistance(cplx(-0.6), cplx(0.6)); }

std::vector<double> collinearFamilyRadii(int m) {
    std::vector<double> f;
    switch (m) {
        case 2: f = {0.55, 0.45}; break;
        case 3: f = {0.35, 0.25, 0.40}; break;
        case 4: f = {0.15, 0.35, 0.20, 0.30}; break;
        default: throw DomainError("collinearFamilyRadii: m must be 2, 3 or 4");
    }
    const double half = referenceDiameter() / 2.0;
    for (double& r : f) r *= half;
    return f;
}

Constellation collinearFamily4(double d) { return collinearChain(collinearFamilyRadii(4), d, 1); }

std::vector<double> mobilityRadii() { return {3.0 / 30.0, 5.0 / 30.0, 7.0 / 30.0, 9.0 / 30.0}; }

std::string canonicalLabel(const std::string& label) {
    std::string rev(label.rbegin(), label.rend());
    return std::min(label, rev);
}

std::vector<LabeledConstellation> permutationFamily(const std::vector<double>& sortedRadii, Layout layout,
                                                    double delta) {
    if (sortedRadii.size() != 4) throw DomainError("permutationFamily: exactly four radii required");
    for (std::size_t i = 1; i < 4; ++i)
        if (!(sortedRadii[i] < sortedRadii[i - 1]) || !(sortedRadii[i] > 0.0))
            throw DomainError("permutationFamily: radii must be positive and strictly decreasing");
    if (!(delta > 0.0)) throw DomainError("permutationFamily: delta must be positive");

    std::vector<LabeledConstellation> out;
    std::string label = "ABCD";
    do {
        if (canonicalLabel(label) != label) continue;
        std::vector<double> r;
        for (char ch : label) r.push_back(sortedRadii[ch - 'A']);
        Constellation c;
        if (layout == Layout::Diameter) {
            c = centeredChain(r, delta);
        } else {
            std::vector<double> angles{0.0};
            for (std::size_t i = 1; i < r.size(); ++i)
                angles.push_back(angles.back() + chordAngle(0.5, r[i - 1] + r[i] + delta));
            c = circleMounted(r, angles, 0.5, delta);
        }
        out.push_back({label, std::move(c)});
    } while (std::next_permutation(label.begin(), label.end()));
    return out;
}

std::vector<HypDisk> rollingFixedDisks(const std::vector<double>& radii, double d) {
    if (radii.size() != 3) throw DomainError("rollingFixedDisks: three radii required");
    const double s1 = -(radii[0] - d);
    const double s2 = radii[1] + 2.0 * d;
    const double s3 = radii[2] + 2.0 * radii[1] + 3.0 * d;
    return {{cplx(diameterPoint(s1)), radii[0]}, {cplx(diameterPoint(s2)), radii[1]}, {cplx(diameterPoint(s3)), radii[2]}};
}

namespace {

// Upper-half-plane intersection of two hyperbolic circles, if any.
bool upperIntersection(cplx c1, double R1, cplx c2, double R2, cplx& out) {
    const auto pts = hypCircleIntersection(c1, R1, c2, R2);
    for (const auto& p : pts) {
        if (p.imag() >= 0.0) {
            out = p;
            return true;
        }
    }
    return false;
}

}  // namespace

RollingPath rollingPath(const std::vector<HypDisk>& fixed, double mobileRadius, double gap) {
    if (fixed.size() != 3) throw DomainError("rollingPath: three fixed disks required");
    if (!(mobileRadius > 0.0) || gap < 0.0) throw DomainError("rollingPath: invalid mobile radius or gap");
    RollingPath p{fixed, mobileRadius, gap, {}, {}};
    double R[3];
    cplx z[3];
    for (int i = 0; i < 3; ++i) {
        R[i] = fixed[i].radius + mobileRadius + gap;
        z[i] = fixed[i].center;
    }

    cplx j12, j23, j13;
    const bool has12 = upperIntersection(z[0], R[0], z[1], R[1], j12);
    const bool has23 = upperIntersection(z[1], R[1], z[2], R[2], j23);
    bool middleVisible = has12 && has23;
    if (middleVisible) {
        const double a12 = hypCircleAngle(z[1], j12);
        const double a23 = hypCircleAngle(z[1], j23);
        middleVisible = a12 > a23 && hypDistance(j12, z[2]) >= R[2] && hypDistance(j23, z[0]) >= R[0];
    }

    if (middleVisible) {
        p.arcs.push_back({z[0], R[0], pi, hypCircleAngle(z[0], j12)});
        p.arcs.push_back({z[1], R[1], hypCircleAngle(z[1], j12), hypCircleAngle(z[1], j23)});
        p.arcs.push_back({z[2], R[2], hypCircleAngle(z[2], j23), 0.0});
        p.breakpoints = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    } else {
        if (!upperIntersection(z[0], R[0], z[2], R[2], j13))
            throw DomainError("rollingPath: outer tangency circles do not meet");
        p.arcs.push_back({z[0], R[0], pi, hypCircleAngle(z[0], j13)});
        p.arcs.push_back({z[2], R[2], hypCircleAngle(z[2], j13), 0.0});
        p.breakpoints = {0.0, 0.5, 1.0};
    }
    return p;
}

cplx pathPoint(const RollingPath& p, double tau) {
    tau = std::clamp(tau, 0.0, 1.0);
    std::size_t k = 0;
    while (k + 1 < p.arcs.size() && tau > p.breakpoints[k + 1]) ++k;
    const double t0 = p.breakpoints[k], t1 = p.breakpoints[k + 1];
    const double u = (tau - t0) / (t1 - t0);
    const Arc& a = p.arcs[k];
    return hypCirclePoint(a.center, a.radius, a.startAngle + u * (a.endAngle - a.startAngle));
}

Constellation rollingConstellation(const RollingPath& p, double tau) {
    Constellation c{p.fixed, p.gap};
    c.disks.push_back({pathPoint(p, tau), p.mobileRadius});
    return c;
}

Constellation erConfig(int m, double r, ERCase cs, double gap) {
    if (!(r > 0.0)) throw DomainError("erConfig: radius must be positive");
    const double D = 2.0 * r + gap;
    // hyperbolic distance s from the origin such that centers at angular separation
    // dtheta are D apart: sh(D/2) = sh(s) sin(dtheta/2)
    auto ringRadius = [D](double dtheta) {
        const double s = std::asinh(std::sinh(D / 2.0) / std::sin(dtheta / 2.0));
        return diameterPoint(s);
    };
    Constellation c{{}, gap};
    switch (m) {
        case 1:
            c.disks.push_back({cplx(0.0), r});
            break;
        case 2: {
            const double x = diameterPoint(D / 2.0);
            c.disks = {{cplx(-x), r}, {cplx(x), r}};
            break;
        }
        case 3: {
            const double rho = ringRadius(2.0 * pi / 3.0);
            for (int k = 0; k < 3; ++k) c.disks.push_back({std::polar(rho, 2.0 * pi * k / 3.0), r});
            break;
        }
        case 4: {
            if (cs == ERCase::I) {
                const double rho = ringRadius(pi / 2.0);
                for (int k = 0; k < 4; ++k) c.disks.push_back({std::polar(rho, pi * k / 2.0), r});
            } else if (cs == ERCase::IIEqualDistance) {
                const double rho = ringRadius(pi / 3.0);
                for (double th : {0.0, pi / 3.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0}) c.disks.push_back({std::polar(rho, th), r});
            } else {
                // Equilateral triple on the rays 0, 2pi/3, 4pi/3 and a fourth disk on the ray pi/3
                // at distance D from the first two: ch D = ch s ch u - sh s sh u cos(pi/3).
                const double s = std::asinh(std::sinh(D / 2.0) / std::sin(pi / 3.0));
                const double A = std::cosh(s), B = std::sinh(s) / 2.0;
                const double u = std::atanh(B / A) + std::acosh(std::cosh(D) / std::sqrt(A * A - B * B));
                for (double th : {0.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0}) c.disks.push_back({std::polar(diameterPoint(s), th), r});
                c.disks.push_back({std::polar(diameterPoint(u), pi / 3.0), r});
            }
            break;
        }
        default:
            throw DomainError("erConfig: m must be in {1, 2, 3, 4}");
    }
    return c;
}

Constellation threeOnCircle(double r, double circleRadius, double d) {
    const double th = chordAngle(circleRadius, d);
    return circleMounted({r, r, r}, {0.0, th, -th}, circleRadius);
}

double threeOnCircleMaxDistance(double r, double circleRadius, double gap) {
    const double th = pi - chordAngle(circleRadius, 2.0 * r + gap) / 2.0;
    return hypDistance(cplx(circleRadius), std::polar(circleRadius, th));
}

}  // namespace hypcap
