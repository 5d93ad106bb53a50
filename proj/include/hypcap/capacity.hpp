#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "hypcap/bie.hpp"
#include "hypcap/constellation.hpp"

namespace hypcap {

using Domain = CircularDomain<double>;
using Grid = BoundaryGrid<double>;

struct SolverConfig {
    int n = 128;                // nodes per boundary component, even
    std::optional<cplx> alpha;  // auxiliary point in Omega; chosen automatically when empty
    SolveMode mode = SolveMode::Direct;
    double tolerance = 1e-14;   // GMRES relative residual
    int maxIterations = 100;    // GMRES, unrestarted
    QuadratureOptions quadrature;
};

struct CapacityResult {
    double cap = 0.0;
    Eigen::VectorXd a;     // a_1..a_m
    double c = 0.0;
    Eigen::MatrixXd h;     // (m+1) x m, h(j, k-1) = h_{j,k}
    Eigen::MatrixXd hStd;  // per-component standard deviation of h_k around its mean
    int n = 0;
    cplx alpha;
    SolveMode mode = SolveMode::Direct;
    int iterations = 0;    // largest GMRES iteration count over the m solves
    double residual = 0.0; // largest relative residual over the m solves
};

// Euclidean circles of the hyperbolic disks.
Domain toDomain(const Constellation& c);

// alpha = 0 when the origin has clearance at least 0.05 in Omega, otherwise the candidate point
// (origin or a polar grid of radii 0.05..0.95) with the largest clearance.
cplx autoAlpha(const Domain& dom);

// gamma_k(t) = log|eta(t) - z_k| for the k-th inner circle (1-based).
Eigen::VectorXd gammaFor(const Grid& grid, const Domain& dom, int k);

CapacityResult capacity(const Domain& dom, const SolverConfig& cfg = {});
// Requires pairwise disjoint disks (positive hyperbolic gaps); delta is not enforced here.
CapacityResult capacity(const Constellation& c, const SolverConfig& cfg = {});

// 2 pi / log(1 / th(M/2)), the capacity of a single hyperbolic disk of radius M.
double singleDiskCapacity(double M);
double upperBoundSum(const std::vector<double>& radii);

// Radius of the single disk with the hyperbolic area of m disks of radius r.
double gehringRadius(int m, double r);
double gehringBound(int m, double r);
// (cap - L(r)) / L(r) for m disks of common radius r.
double lrRatio(const Constellation& c, const SolverConfig& cfg = {});

struct ConvergenceRow {
    int n;
    double cap;
    double error;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    int nRef;
    double capRef;
    double sigma;  // least-squares fit of log(error) = const - sigma n over rows with error > errorFloor
};

ConvergenceStudy convergenceStudy(const Constellation& c, std::optional<cplx> alpha, const std::vector<int>& nList,
                                  SolveMode mode = SolveMode::Direct, double errorFloor = 1e-14);

}  // namespace hypcap
