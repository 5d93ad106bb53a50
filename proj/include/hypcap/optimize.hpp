#pragma once

// Minimization of constellation capacity over disk positions with fixed hyperbolic radii
// and a minimal hyperbolic separation between disks.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypcap/capacity.hpp"
#include "hypcap/constellation.hpp"

namespace hypcap {

enum class MobilityKind { Fixed, Free2D, OnCircle, OnDiameter };

struct Mobility {
    MobilityKind kind = MobilityKind::Fixed;
    double circleRadius = 0.0;  // OnCircle only: Euclidean radius of the center locus

    static Mobility fixed() { return {}; }
    static Mobility free2D() { return {MobilityKind::Free2D, 0.0}; }
    static Mobility onCircle(double radius) { return {MobilityKind::OnCircle, radius}; }
    static Mobility onDiameter() { return {MobilityKind::OnDiameter, 0.0}; }

    bool mobile() const { return kind != MobilityKind::Fixed; }
    int dof() const { return kind == MobilityKind::Free2D ? 2 : (kind == MobilityKind::Fixed ? 0 : 1); }
};

std::string toString(MobilityKind k);
MobilityKind parseMobilityKind(const std::string& s);

struct OptimizationProblem {
    Constellation start;  // template; fixed disks keep these centers
    std::vector<Mobility> mobility;
    double delta = 0.02;
    SolverConfig solver;
};

void checkProblem(const OptimizationProblem& p);

struct OptimizerConfig {
    double tolerance = 1e-6;   // first-order measure, step and final barrier weight
    double fdStep = 1e-6;
    int maxIterations = 200;
    int seeds = 1;             // multistart count
    std::uint64_t rngSeed = 1;
    double initialBarrier = 1e-2;
    double barrierReduction = 0.1;
    double maxStep = 0.5;      // largest parameter change per iteration
};

enum class OptStatus { Converged, MaxIter, Infeasible };
std::string toString(OptStatus s);

struct TrajectoryPoint {
    int iteration;
    double barrierWeight;
    double cap;
    double merit;  // cap - barrierWeight * sum log(margin)
    Eigen::VectorXd params;
};

struct OptimizationResult {
    Constellation configuration;
    double cap = 0.0;
    int iterations = 0;
    int evaluations = 0;
    OptStatus status = OptStatus::Converged;
    double kktResidual = 0.0;  // infinity norm of grad cap - sum lambda grad margin
    double minMargin = 0.0;    // smallest constraint margin involving a mobile disk
    int fdFallbacks = 0;       // one-sided differences taken near the boundary
    std::vector<TrajectoryPoint> trajectory;
};

// Euclidean (x, y) for free disks, the angle for disks on a circle, the real coordinate for
// disks on the diameter; fixed disks contribute nothing.
Eigen::VectorXd packParams(const OptimizationProblem& p, const Constellation& c);
inline Eigen::VectorXd packParams(const OptimizationProblem& p) { return packParams(p, p.start); }
Constellation unpackParams(const OptimizationProblem& p, const Eigen::VectorXd& x);

// Containment guard 1 - |z_k| - eps for every disk.
inline constexpr double containmentGuard = 1e-9;

struct ConstraintLayout {
    std::vector<std::array<int, 2>> pairs;  // (i, j), i < j, in row-major order
    int disks = 0;
};

// Margins rho(z_i, z_j) - r_i - r_j - delta for all pairs, then 1 - |z_k| - eps for all disks.
Eigen::VectorXd constraintValues(const OptimizationProblem& p, const Eigen::VectorXd& x);
ConstraintLayout constraintLayout(const OptimizationProblem& p);
// Indices into constraintValues that depend on the parameters.
std::vector<int> mobileConstraints(const OptimizationProblem& p);

struct FdGradient {
    Eigen::VectorXd grad;
    int evaluations = 0;
    int fallbacks = 0;
};

// Central differences; a stencil point that fails `admissible` halves the step up to three
// times, after which a one-sided difference on the admissible side is used.
FdGradient fdGradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x, double f0,
                      double step, const std::function<bool(const Eigen::VectorXd&)>& admissible);

OptimizationResult minimize(const OptimizationProblem& p, const OptimizerConfig& cfg = {});

enum class StartStrategy {
    Random,        // random admissible positions for all mobile disks
    PermuteMobile  // the template's mobile positions, reassigned among the mobile disks
};

// Results sorted by capacity with duplicates (capacity within 1e-4 and every center within
// hyperbolic distance 1e-2) removed. Start 0 is always the template itself.
std::vector<OptimizationResult> multistart(const OptimizationProblem& p, const OptimizerConfig& cfg, int k,
                                           StartStrategy strategy = StartStrategy::Random, int jobs = 1);

// Distinct capacity levels (values closer than tol merged).
std::vector<double> capacityLevels(const std::vector<OptimizationResult>& results, double tol = 1e-4);

struct LevelGrid {
    std::vector<double> xs, ys;
    // values[iy * xs.size() + ix]; empty where the free disk violates a constraint
    std::vector<std::optional<double>> values;

    const std::optional<double>& at(std::size_t ix, std::size_t iy) const { return values[iy * xs.size() + ix]; }
};

// Capacity as a function of the hyperbolic center x + iy of the only Free2D disk.
LevelGrid levelGrid(const OptimizationProblem& p, std::array<double, 2> xRange, std::array<double, 2> yRange,
                    int resolution, int jobs = 1);

struct MinimaCount {
    int count = 0;
    std::vector<std::array<std::size_t, 2>> cells;  // (ix, iy), one representative per cluster
};

// A cell is a local minimum when it is strictly below every feasible 8-neighbour. An 8-connected
// plateau of equal values counts once, as a minimum when every feasible cell around it is higher.
MinimaCount countLocalMinima(const LevelGrid& g);

struct GridBasins {
    std::vector<std::array<std::size_t, 2>> seeds;  // discrete minima of the grid
    std::vector<int> basinOfSeed;                   // index into minimizers
    std::vector<OptimizationResult> minimizers;     // distinct, sorted by capacity

    int count() const { return static_cast<int>(minimizers.size()); }
};

// Runs minimize from every discrete local minimum of the grid and merges seeds that reach the same
// minimizer (capacity within 1e-4, centers within hyperbolic distance 1e-2). Cells next to a
// constraint boundary sample it at irregular gaps, so the discrete count alone over-reports basins
// there; descending from each seed sorts those cells into the basins they belong to.
GridBasins gridBasins(const OptimizationProblem& p, const LevelGrid& g, const OptimizerConfig& cfg = {}, int jobs = 1);

}  // namespace hypcap
