#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hypcap/hypgeo.hpp"

namespace hypcap {

using cplx = std::complex<double>;

// Ordered union of disjoint hyperbolic disks with a required minimal hyperbolic separation.
struct Constellation {
    std::vector<HypDisk> disks;
    double delta = 0.0;

    int size() const { return static_cast<int>(disks.size()); }
    std::vector<double> radii() const;
    std::vector<cplx> centers() const;
};

struct Violation {
    int i;  // disk index
    int j;  // second disk index, or -1 for a containment violation of disk i
    double margin;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    double minPairMargin;  // +inf for fewer than two disks

    bool feasible() const { return violations.empty(); }
    std::string describe() const;
};

inline constexpr double marginTolerance = 1e-12;

// Pair margins rho(z_i, z_j) - r_i - r_j - delta. A violation is a margin below -marginTolerance
// when delta > 0, a margin <= 0 when delta = 0 (touching disks), or a center on/outside the unit circle.
FeasibilityReport validate(const Constellation& c);

double pairMargin(const HypDisk& a, const HypDisk& b, double delta);

Constellation mapConstellation(const Mobius& T, const Constellation& c);

// Centers on the real diameter with consecutive center distances r_i + r_{i+1} + d
// and disk `anchorIndex` at the origin.
Constellation collinearChain(const std::vector<double>& radii, double d, int anchorIndex);

// Same chain shifted along the diameter so the hyperbolic extent of the union is symmetric about 0.
Constellation centeredChain(const std::vector<double>& radii, double d);

// Hyperbolic centers at circleRadius * e^{i angle_k}.
Constellation circleMounted(const std::vector<double>& radii, const std::vector<double>& angles,
                            double circleRadius, double delta = 0.0);

// Angle subtended at the origin by two points on |z| = circleRadius at hyperbolic distance dist.
double chordAngle(double circleRadius, double dist);

// The collinear family with radii fractions of d1/2, d1 = rho(-0.6, 0.6) = ln 16.
double referenceDiameter();
std::vector<double> collinearFamilyRadii(int m);
// Four disks r = (0.15, 0.35, 0.20, 0.30) d1/2, disk 2 at the origin, gaps d.
Constellation collinearFamily4(double d);

// Free-mobility family: radii {3,5,7,9}/30.
std::vector<double> mobilityRadii();

enum class Layout { Diameter, Circle };

struct LabeledConstellation {
    std::string label;  // e.g. "DBAC", the radii in order along the diameter or the circle
    Constellation constellation;
};

// One representative per reversal class of the 24 orderings of four strictly decreasing radii.
std::vector<LabeledConstellation> permutationFamily(const std::vector<double>& sortedRadii, Layout layout,
                                                    double delta);
std::string canonicalLabel(const std::string& label);

struct Arc {
    cplx center;
    double radius;  // hyperbolic
    double startAngle;
    double endAngle;
};

// Route of the center of a disk of radius mobileRadius rolling over three fixed disks
// at separation gap; tau in [0,1] runs from the left end of the diameter to the right.
struct RollingPath {
    std::vector<HypDisk> fixed;
    double mobileRadius;
    double gap;
    std::vector<Arc> arcs;          // one arc per fixed disk touched along the way
    std::vector<double> breakpoints;  // tau values where consecutive arcs meet

    int junctions() const { return static_cast<int>(arcs.size()) - 1; }
};

// Three fixed disks in a chain along the diameter, z_1 = -th((r_1 - d)/2).
std::vector<HypDisk> rollingFixedDisks(const std::vector<double>& radii, double d);
RollingPath rollingPath(const std::vector<HypDisk>& fixed, double mobileRadius, double gap);
cplx pathPoint(const RollingPath& p, double tau);
Constellation rollingConstellation(const RollingPath& p, double tau);

// Layouts of four equal disks. I: centers on the four half-axes at a common distance from 0.
// II: centers on the rays 0, pi/3, 2pi/3, 4pi/3 forming two equilateral triangles (five touching pairs).
// IIEqualDistance: the same rays at a common distance from 0, so the 4pi/3 disk touches no other.
enum class ERCase { I, II, IIEqualDistance };

// m equal disks of radius r whose adjacent pairs are separated by `gap`.
Constellation erConfig(int m, double r, ERCase cs = ERCase::I, double gap = 0.02);

// Three equal disks on |z| = circleRadius: one at the positive real axis, two mirrored
// at hyperbolic center distance d from it.
Constellation threeOnCircle(double r, double circleRadius, double d);
// Largest d for which the mirrored pair is still separated by `gap`.
double threeOnCircleMaxDistance(double r, double circleRadius, double gap);

}  // namespace hypcap
