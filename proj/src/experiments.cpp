#include "hypcap/experiments.hpp"

#include <algorithm>
#include <numeric>

#include "hypcap/errors.hpp"
#include "hypcap/parallel.hpp"

namespace hypcap {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw ConfigError("linspace: need at least one sample");
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
    return v;
}

Constellation collinearFamily(int m, double d) {
    if (m == 4) return collinearFamily4(d);
    return collinearChain(collinearFamilyRadii(m), d, 0);
}

namespace {

// (parameter, cap) rows for a one-parameter family.
template <typename Make>
Table sweep(const std::string& name, const std::vector<double>& params, Make make, const SolverConfig& cfg, int jobs) {
    std::vector<double> caps(params.size());
    parallelFor(static_cast<int>(params.size()), jobs, [&](int i) { caps[i] = capacity(make(params[i]), cfg).cap; });
    Table t{{name, "cap"}, {}};
    for (std::size_t i = 0; i < params.size(); ++i) t.rows.push_back({params[i], caps[i]});
    return t;
}

}  // namespace

Table sweepCollinear(int m, const std::vector<double>& ds, const SolverConfig& cfg, int jobs) {
    return sweep("d", ds, [m](double d) { return collinearFamily(m, d); }, cfg, jobs);
}

Table sweepThreeCircle(double r, double circleRadius, double gap, int samples, const SolverConfig& cfg, int jobs) {
    const double dmax = threeOnCircleMaxDistance(r, circleRadius, gap);
    const double dmin = 2.0 * r + gap;
    if (!(dmax > dmin)) throw DomainError("sweepThreeCircle: no admissible range of d");
    return sweep("d", linspace(dmin, dmax, samples), [&](double d) { return threeOnCircle(r, circleRadius, d); }, cfg,
                 jobs);
}

std::array<double, 4> rollingCaseRadii(int caseNumber) {
    switch (caseNumber) {
        case 1: return {0.4, 0.2, 0.5, 0.25};
        case 2: return {0.2, 0.5, 0.3, 0.5};
        case 3: return {0.5, 0.5, 0.5, 0.2};
        case 4: return {0.2, 0.7, 0.4, 0.1};
        default: throw ConfigError("rolling case must be 1, 2, 3 or 4");
    }
}

Table sweepRolling(const std::array<double, 4>& radii, double gap, int samples, const SolverConfig& cfg, int jobs) {
    const auto path = rollingPath(rollingFixedDisks({radii[0], radii[1], radii[2]}, gap), radii[3], gap);
    return sweep("tau", linspace(0.0, 1.0, samples), [&](double tau) { return rollingConstellation(path, tau); }, cfg,
                 jobs);
}

ERCase parseERCase(const std::string& s) {
    if (s == "I" || s == "1") return ERCase::I;
    if (s == "II" || s == "2") return ERCase::II;
    if (s == "IIEqualDistance" || s == "II-equal") return ERCase::IIEqualDistance;
    throw ConfigError("unknown case '" + s + "' (expected I, II or IIEqualDistance)");
}

std::string toString(ERCase cs) {
    switch (cs) {
        case ERCase::I: return "I";
        case ERCase::II: return "II";
        case ERCase::IIEqualDistance: return "IIEqualDistance";
    }
    return "?";
}

Table boundTable(int m, ERCase cs, const std::vector<double>& rs, double gap, const SolverConfig& cfg, int jobs) {
    std::vector<double> caps(rs.size());
    parallelFor(static_cast<int>(rs.size()), jobs,
                [&](int i) { caps[i] = capacity(erConfig(m, rs[i], cs, gap), cfg).cap; });
    Table t{{"r", "cap", "L", "L_r"}, {}};
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double L = gehringBound(m, rs[i]);
        t.rows.push_back({rs[i], caps[i], L, (caps[i] - L) / L});
    }
    return t;
}

Table permTable(const std::vector<double>& sortedRadii, Layout layout, double delta, const SolverConfig& cfg,
                int jobs) {
    const auto fam = permutationFamily(sortedRadii, layout, delta);
    std::vector<double> caps(fam.size());
    parallelFor(static_cast<int>(fam.size()), jobs, [&](int i) { caps[i] = capacity(fam[i].constellation, cfg).cap; });
    std::vector<std::size_t> order(fam.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return caps[a] < caps[b]; });
    Table t{{"case", "r1", "r2", "r3", "r4", "cap"}, {}};
    long long k = 1;
    for (auto i : order) {
        std::vector<Cell> row{k++};
        for (char ch : fam[i].label) row.emplace_back(std::string(1, ch));
        row.emplace_back(caps[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table convergenceTable(const ConvergenceStudy& st) {
    Table t{{"n", "cap", "error"}, {}};
    for (const auto& r : st.rows) t.rows.push_back({static_cast<long long>(r.n), r.cap, r.error});
    return t;
}

Table gridTable(const LevelGrid& g) {
    Table t{{"x", "y", "cap"}, {}};
    for (std::size_t iy = 0; iy < g.ys.size(); ++iy)
        for (std::size_t ix = 0; ix < g.xs.size(); ++ix) {
            const auto& v = g.at(ix, iy);
            t.rows.push_back({g.xs[ix], g.ys[iy], v ? Cell(*v) : Cell(std::monostate{})});
        }
    return t;
}

Table trajectoryTable(const OptimizationResult& r) {
    Table t{{"iteration", "mu", "cap", "merit"}, {}};
    const Eigen::Index dim = r.trajectory.empty() ? 0 : r.trajectory.front().params.size();
    for (Eigen::Index k = 0; k < dim; ++k) t.header.push_back("p" + std::to_string(k));
    for (const auto& p : r.trajectory) {
        std::vector<Cell> row{static_cast<long long>(p.iteration), p.barrierWeight, p.cap, p.merit};
        for (Eigen::Index k = 0; k < dim; ++k) row.emplace_back(p.params[k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace hypcap
