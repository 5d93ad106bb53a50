#pragma once

// Experiment families as plot-ready tables. Every row is computed independently, so sweeps run
// on a worker pool of `jobs` threads; row order never depends on the schedule.

#include <array>
#include <string>
#include <vector>

#include "hypcap/capacity.hpp"
#include "hypcap/io.hpp"
#include "hypcap/optimize.hpp"

namespace hypcap {

// n evenly spaced values on [a, b], endpoints included.
std::vector<double> linspace(double a, double b, int n);

// Collinear family with m disks (2, 3, 4) and gaps d: (d, cap).
Constellation collinearFamily(int m, double d);
Table sweepCollinear(int m, const std::vector<double>& ds, const SolverConfig& cfg, int jobs = 1);

// Three disks of radius r on |z| = circleRadius, d from 2r + gap to the largest admissible value: (d, cap).
Table sweepThreeCircle(double r, double circleRadius, double gap, int samples, const SolverConfig& cfg, int jobs = 1);

// Fixed radii r1, r2, r3 and mobile radius r4 of the rolling-disk cases 1..4.
std::array<double, 4> rollingCaseRadii(int caseNumber);
// (tau, cap) with tau evenly spaced on [0, 1].
Table sweepRolling(const std::array<double, 4>& radii, double gap, int samples, const SolverConfig& cfg, int jobs = 1);

// (r, cap, L, L_r) for m equal disks at the given radii.
Table boundTable(int m, ERCase cs, const std::vector<double>& rs, double gap, const SolverConfig& cfg, int jobs = 1);
ERCase parseERCase(const std::string& s);
std::string toString(ERCase cs);

// The 12 reversal classes sorted by capacity: (case, r1, r2, r3, r4, cap), radii as letters.
Table permTable(const std::vector<double>& sortedRadii, Layout layout, double delta, const SolverConfig& cfg,
                int jobs = 1);

Table convergenceTable(const ConvergenceStudy& st);
// (x, y, cap) with an empty cap where the free disk is infeasible.
Table gridTable(const LevelGrid& g);
// (iteration, mu, cap, merit, p0, p1, ...)
Table trajectoryTable(const OptimizationResult& r);

}  // namespace hypcap
