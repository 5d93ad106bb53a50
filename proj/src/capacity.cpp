#include "hypcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypcap/errors.hpp"

namespace hypcap {

namespace {
constexpr double twoPi = 2.0 * std::numbers::pi;
}

Domain toDomain(const Constellation& c) {
    Domain dom;
    dom.inner.reserve(c.disks.size());
    for (const auto& d : c.disks) {
        const auto e = hypToEuc(d);
        dom.inner.push_back({e.center, e.radius});
    }
    return dom;
}

cplx autoAlpha(const Domain& dom) {
    const double c0 = dom.clearance(cplx(0.0));
    if (c0 >= 0.05) return cplx(0.0);
    cplx best(0.0);
    double bestClear = c0;
    for (int i = 1; i <= 19; ++i) {
        const double rho = 0.05 * i;
        for (int k = 0; k < 64; ++k) {
            const cplx z = std::polar(rho, twoPi * k / 64.0);
            const double cl = dom.clearance(z);
            if (cl > bestClear) {
                bestClear = cl;
                best = z;
            }
        }
    }
    if (!(bestClear > 0.0)) throw ConfigError("autoAlpha: no admissible auxiliary point found");
    return best;
}

Eigen::VectorXd gammaFor(const Grid& grid, const Domain& dom, int k) {
    if (k < 1 || k > dom.m()) throw DomainError("gammaFor: circle index out of range");
    const cplx zk = dom.inner[k - 1].center;
    Eigen::VectorXd g(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) g[i] = std::log(std::abs(grid.eta[i] - zk));
    // exact on the circle itself
    const Eigen::Index n = grid.n;
    g.segment(k * n, n).setConstant(std::log(dom.inner[k - 1].radius));
    return g;
}

CapacityResult capacity(const Domain& dom, const SolverConfig& cfg) {
    const int m = dom.m();
    if (m < 1) throw DomainError("capacity: at least one plate is required");
    checkDomain(dom);
    const cplx alpha = cfg.alpha ? *cfg.alpha : autoAlpha(dom);
    if (!dom.contains(alpha)) {
        std::ostringstream os;
        os << "capacity: alpha = " << alpha << " is not inside the domain";
        throw ConfigError(os.str());
    }

    const Grid grid = buildGrid(dom, cfg.n);
    const BieSolver<double> solver(grid, alpha, cfg.mode, cfg.tolerance, cfg.maxIterations, cfg.quadrature);
    const Eigen::Index n = grid.n;

    CapacityResult res;
    res.n = cfg.n;
    res.alpha = alpha;
    res.mode = cfg.mode;
    res.h.resize(m + 1, m);
    res.hStd.resize(m + 1, m);
    for (int k = 1; k <= m; ++k) {
        const Eigen::VectorXd gamma = gammaFor(grid, dom, k);
        const auto sol = solver.solveMu(gamma);
        res.iterations = std::max(res.iterations, sol.iterations);
        res.residual = std::max(res.residual, sol.residual);
        const Eigen::VectorXd hk = solver.computeH(sol.mu, gamma);
        for (int j = 0; j <= m; ++j) {
            const auto block = hk.segment(j * n, n);
            const double mean = block.mean();
            res.h(j, k - 1) = mean;
            res.hStd(j, k - 1) = std::sqrt((block.array() - mean).square().mean());
        }
    }

    Eigen::MatrixXd S(m + 1, m + 1);
    S.leftCols(m) = res.h;
    S.col(m).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m + 1);
    rhs[0] = 0.0;
    const Eigen::VectorXd sol = S.partialPivLu().solve(rhs);
    res.a = sol.head(m);
    res.c = sol[m];
    res.cap = twoPi * res.a.sum();
    return res;
}

CapacityResult capacity(const Constellation& c, const SolverConfig& cfg) {
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            if (!(pairMargin(c.disks[i], c.disks[j], 0.0) > 0.0))
                throw InfeasibleError("capacity: disks " + std::to_string(i) + " and " + std::to_string(j) +
                                      " touch or overlap; the integral equation needs a positive gap");
    return capacity(toDomain(c), cfg);
}

double singleDiskCapacity(double M) {
    if (!(M > 0.0)) throw DomainError("singleDiskCapacity: radius must be positive");
    return twoPi / -std::log(std::tanh(M / 2.0));
}

double upperBoundSum(const std::vector<double>& radii) {
    double s = 0.0;
    for (double r : radii) s += singleDiskCapacity(r);
    return s;
}

double gehringRadius(int m, double r) {
    if (m < 1 || !(r > 0.0)) throw DomainError("gehringRadius: need m >= 1 and r > 0");
    return 2.0 * std::asinh(std::sqrt(static_cast<double>(m)) * std::sinh(r / 2.0));
}

double gehringBound(int m, double r) { return singleDiskCapacity(gehringRadius(m, r)); }

double lrRatio(const Constellation& c, const SolverConfig& cfg) {
    if (c.disks.empty()) throw DomainError("lrRatio: empty constellation");
    const double r = c.disks.front().radius;
    for (const auto& d : c.disks)
        if (std::abs(d.radius - r) > 1e-14 * r) throw DomainError("lrRatio: radii must be equal");
    const double L = gehringBound(c.size(), r);
    return (capacity(c, cfg).cap - L) / L;
}

ConvergenceStudy convergenceStudy(const Constellation& c, std::optional<cplx> alpha, const std::vector<int>& nList,
                                  SolveMode mode, double errorFloor) {
    if (nList.empty()) throw ConfigError("convergenceStudy: empty n list");
    if (!std::is_sorted(nList.begin(), nList.end())) throw ConfigError("convergenceStudy: n list must be increasing");
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.mode = mode;
    ConvergenceStudy st;
    st.nRef = 2 * nList.back();
    cfg.n = st.nRef;
    st.capRef = capacity(c, cfg).cap;
    for (int n : nList) {
        cfg.n = n;
        const double cap = capacity(c, cfg).cap;
        st.rows.push_back({n, cap, std::abs(cap - st.capRef)});
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : st.rows) {
        if (!(r.error > errorFloor)) continue;
        const double x = r.n, y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    st.sigma = cnt >= 2 ? -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::nan("");
    return st;
}

}  // namespace hypcap
