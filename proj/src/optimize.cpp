#include "hypcap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hypcap/errors.hpp"
#include "hypcap/parallel.hpp"

namespace hypcap {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<int> mobileIndices(const OptimizationProblem& p) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(p.mobility.size()); ++i)
        if (p.mobility[i].mobile()) idx.push_back(i);
    return idx;
}

bool strictlyFeasible(const Eigen::VectorXd& g, const std::vector<int>& active) {
    for (int i : active)
        if (!(g[i] > 0.0)) return false;
    return true;
}

double maxCenterDistance(const Constellation& a, const Constellation& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) d = std::max(d, hypDistance(a.disks[i].center, b.disks[i].center));
    return d;
}

}  // namespace

std::string toString(MobilityKind k) {
    switch (k) {
        case MobilityKind::Fixed: return "fixed";
        case MobilityKind::Free2D: return "free2D";
        case MobilityKind::OnCircle: return "onCircle";
        case MobilityKind::OnDiameter: return "onDiameter";
    }
    return "?";
}

MobilityKind parseMobilityKind(const std::string& s) {
    if (s == "fixed") return MobilityKind::Fixed;
    if (s == "free2D" || s == "free") return MobilityKind::Free2D;
    if (s == "onCircle" || s == "circle") return MobilityKind::OnCircle;
    if (s == "onDiameter" || s == "diameter") return MobilityKind::OnDiameter;
    throw ConfigError("unknown mobility '" + s + "' (expected fixed, free2D, onCircle or onDiameter)");
}

std::string toString(OptStatus s) {
    switch (s) {
        case OptStatus::Converged: return "converged";
        case OptStatus::MaxIter: return "maxIter";
        case OptStatus::Infeasible: return "infeasible";
    }
    return "?";
}

void checkProblem(const OptimizationProblem& p) {
    if (p.mobility.size() != p.start.disks.size())
        throw ConfigError("optimization problem: one mobility flag per disk is required");
    if (mobileIndices(p).empty()) throw ConfigError("optimization problem: no mobile disk");
    if (!(p.delta >= 0.0)) throw ConfigError("optimization problem: delta must be nonnegative");
    for (std::size_t i = 0; i < p.mobility.size(); ++i) {
        const auto& mob = p.mobility[i];
        if (mob.kind != MobilityKind::OnCircle) continue;
        if (!(mob.circleRadius > 0.0 && mob.circleRadius < 1.0))
            throw ConfigError("optimization problem: circle radius must lie in (0, 1)");
        if (std::abs(std::abs(p.start.disks[i].center) - mob.circleRadius) > 1e-12)
            throw ConfigError("optimization problem: disk " + std::to_string(i) + " is not on its circle");
    }
    for (std::size_t i = 0; i < p.mobility.size(); ++i)
        if (p.mobility[i].kind == MobilityKind::OnDiameter && p.start.disks[i].center.imag() != 0.0)
            throw ConfigError("optimization problem: disk " + std::to_string(i) + " is not on the diameter");
}

Eigen::VectorXd packParams(const OptimizationProblem& p, const Constellation& c) {
    std::vector<double> v;
    for (std::size_t i = 0; i < p.mobility.size(); ++i) {
        const cplx z = c.disks[i].center;
        switch (p.mobility[i].kind) {
            case MobilityKind::Fixed: break;
            case MobilityKind::Free2D:
                v.push_back(z.real());
                v.push_back(z.imag());
                break;
            case MobilityKind::OnCircle: v.push_back(std::arg(z)); break;
            case MobilityKind::OnDiameter: v.push_back(z.real()); break;
        }
    }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Constellation unpackParams(const OptimizationProblem& p, const Eigen::VectorXd& x) {
    Constellation c = p.start;
    c.delta = p.delta;
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < p.mobility.size(); ++i) {
        const auto& mob = p.mobility[i];
        switch (mob.kind) {
            case MobilityKind::Fixed: break;
            case MobilityKind::Free2D:
                c.disks[i].center = cplx(x[k], x[k + 1]);
                k += 2;
                break;
            case MobilityKind::OnCircle: c.disks[i].center = std::polar(mob.circleRadius, x[k++]); break;
            case MobilityKind::OnDiameter: c.disks[i].center = cplx(x[k++], 0.0); break;
        }
    }
    if (k != x.size()) throw ConfigError("unpackParams: parameter vector has the wrong length");
    return c;
}

ConstraintLayout constraintLayout(const OptimizationProblem& p) {
    ConstraintLayout lay;
    lay.disks = p.start.size();
    for (int i = 0; i < lay.disks; ++i)
        for (int j = i + 1; j < lay.disks; ++j) lay.pairs.push_back({i, j});
    return lay;
}

Eigen::VectorXd constraintValues(const OptimizationProblem& p, const Eigen::VectorXd& x) {
    const Constellation c = unpackParams(p, x);
    const int m = c.size();
    const auto lay = constraintLayout(p);
    Eigen::VectorXd g(static_cast<Eigen::Index>(lay.pairs.size()) + m);
    // Points outside the unit disk get -inf pair margins: they are infeasible regardless.
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    Eigen::Index k = 0;
    for (const auto& [i, j] : lay.pairs) {
        const auto& a = c.disks[i];
        const auto& b = c.disks[j];
        g[k++] = (std::abs(a.center) < 1.0 && std::abs(b.center) < 1.0) ? pairMargin(a, b, p.delta) : ninf;
    }
    for (int i = 0; i < m; ++i) g[k++] = 1.0 - std::abs(c.disks[i].center) - containmentGuard;
    return g;
}

std::vector<int> mobileConstraints(const OptimizationProblem& p) {
    const auto lay = constraintLayout(p);
    std::vector<int> idx;
    int k = 0;
    for (const auto& [i, j] : lay.pairs) {
        if (p.mobility[i].mobile() || p.mobility[j].mobile()) idx.push_back(k);
        ++k;
    }
    for (int i = 0; i < lay.disks; ++i, ++k)
        if (p.mobility[i].mobile()) idx.push_back(k);
    return idx;
}

FdGradient fdGradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x, double f0,
                      double step, const std::function<bool(const Eigen::VectorXd&)>& admissible) {
    if (!(step > 0.0)) throw ConfigError("fdGradient: step must be positive");
    FdGradient out;
    out.grad.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double h = step;
        Eigen::VectorXd xp = x, xm = x;
        bool okP = false, okM = false;
        for (int shrink = 0; shrink <= 3; ++shrink) {
            xp[i] = x[i] + h;
            xm[i] = x[i] - h;
            okP = admissible(xp);
            okM = admissible(xm);
            if (okP && okM) break;
            if (shrink < 3) h *= 0.5;
        }
        if (okP && okM) {
            out.grad[i] = (f(xp) - f(xm)) / (xp[i] - xm[i]);
            out.evaluations += 2;
        } else if (okP) {
            out.grad[i] = (f(xp) - f0) / (xp[i] - x[i]);
            ++out.evaluations;
            ++out.fallbacks;
        } else if (okM) {
            out.grad[i] = (f0 - f(xm)) / (x[i] - xm[i]);
            ++out.evaluations;
            ++out.fallbacks;
        } else {
            out.grad[i] = 0.0;
            ++out.fallbacks;
        }
    }
    return out;
}

OptimizationResult minimize(const OptimizationProblem& p, const OptimizerConfig& cfg) {
    checkProblem(p);
    if (!(cfg.tolerance > 0.0) || !(cfg.fdStep > 0.0) || cfg.maxIterations < 1)
        throw ConfigError("minimize: tolerance, fdStep and maxIterations must be positive");

    const std::vector<int> active = mobileConstraints(p);
    OptimizationResult res;

    Eigen::VectorXd x = packParams(p);
    const Eigen::Index dim = x.size();
    {
        const Eigen::VectorXd g0 = constraintValues(p, x);
        if (!strictlyFeasible(g0, active)) {
            const auto rep = validate(unpackParams(p, x));
            throw InfeasibleError("minimize: infeasible start (" + rep.describe() + ")");
        }
    }

    auto admissible = [&](const Eigen::VectorXd& y) { return strictlyFeasible(constraintValues(p, y), active); };
    auto cap = [&](const Eigen::VectorXd& y) {
        ++res.evaluations;
        return capacity(unpackParams(p, y), p.solver).cap;
    };
    auto barrierTerms = [&](const Eigen::VectorXd& y, double mu, Eigen::VectorXd& grad, Eigen::MatrixXd& hess,
                            Eigen::MatrixXd& jac) {
        // Constraint gradients by central differences; the margins are cheap closed forms.
        const Eigen::VectorXd g = constraintValues(p, y);
        jac.resize(static_cast<Eigen::Index>(active.size()), dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            constexpr double hg = 1e-7;
            Eigen::VectorXd yp = y, ym = y;
            yp[k] += hg;
            ym[k] -= hg;
            const Eigen::VectorXd gp = constraintValues(p, yp), gm = constraintValues(p, ym);
            for (std::size_t a = 0; a < active.size(); ++a) {
                const int c = active[a];
                const double d = std::isfinite(gp[c]) && std::isfinite(gm[c]) ? (gp[c] - gm[c]) / (2 * hg) : 0.0;
                jac(static_cast<Eigen::Index>(a), k) = d;
            }
        }
        grad.setZero(dim);
        hess.setZero(dim, dim);
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double gi = g[active[a]];
            const Eigen::VectorXd row = jac.row(static_cast<Eigen::Index>(a)).transpose();
            grad -= (mu / gi) * row;
            hess += (mu / (gi * gi)) * row * row.transpose();
        }
        return g;
    };
    auto logBarrier = [&](const Eigen::VectorXd& g) {
        double s = 0.0;
        for (int c : active) s += std::log(g[c]);
        return s;
    };

    double f = cap(x);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(dim, dim);
    bool scaled = false;
    Eigen::VectorXd gradF, prevX, prevGradF;
    double lastStep = std::numeric_limits<double>::infinity();
    double mu = cfg.initialBarrier;
    const double muFinal = cfg.tolerance;
    bool finalStage = false;
    bool exhausted = false;

    while (!exhausted) {
        if (mu <= muFinal * (1.0 + 1e-12)) {
            mu = muFinal;
            finalStage = true;
        }
        const double stageTol = std::max(cfg.tolerance, 10.0 * mu);
        bool stageDone = false;
        int failures = 0;
        while (!stageDone) {
            const auto fd = fdGradient(cap, x, f, cfg.fdStep, admissible);
            res.fdFallbacks += fd.fallbacks;
            gradF = fd.grad;
            if (prevGradF.size() == dim) {
                // damped BFGS update of the capacity Hessian model
                const Eigen::VectorXd s = x - prevX;
                Eigen::VectorXd y = gradF - prevGradF;
                const double sy = s.dot(y);
                if (!scaled && sy > 0.0) {
                    B = Eigen::MatrixXd::Identity(dim, dim) * (y.squaredNorm() / sy);
                    scaled = true;
                }
                const Eigen::VectorXd Bs = B * s;
                const double sBs = s.dot(Bs);
                if (sBs > 0.0) {
                    double theta = 1.0;
                    if (sy < 0.2 * sBs) theta = 0.8 * sBs / (sBs - sy);
                    y = theta * y + (1.0 - theta) * Bs;
                    B += y * y.transpose() / s.dot(y) - Bs * Bs.transpose() / sBs;
                }
            }
            Eigen::VectorXd gradB;
            Eigen::MatrixXd hessB, jac;
            const Eigen::VectorXd g = barrierTerms(x, mu, gradB, hessB, jac);
            const Eigen::VectorXd gradPhi = gradF + gradB;
            const double phi = f - mu * logBarrier(g);

            res.trajectory.push_back({res.iterations, mu, f, phi, x});

            const double gnorm = gradPhi.lpNorm<Eigen::Infinity>();
            if (gnorm <= stageTol || (lastStep <= 1e-3 * cfg.tolerance && gnorm <= 10.0 * stageTol)) {
                stageDone = true;
                break;
            }
            if (res.iterations >= cfg.maxIterations) {
                exhausted = true;
                break;
            }

            Eigen::VectorXd dir = (B + hessB).ldlt().solve(-gradPhi);
            if (!dir.allFinite() || dir.dot(gradPhi) >= 0.0) dir = -gradPhi;
            const double dmax = dir.lpNorm<Eigen::Infinity>();
            if (dmax > cfg.maxStep) dir *= cfg.maxStep / dmax;

            double t = 1.0;
            bool accepted = false;
            const double slope = gradPhi.dot(dir);
            for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
                const Eigen::VectorXd xt = x + t * dir;
                const Eigen::VectorXd gt = constraintValues(p, xt);
                if (!strictlyFeasible(gt, active)) continue;
                const double ft = cap(xt);
                const double phit = ft - mu * logBarrier(gt);
                if (phit <= phi + 1e-4 * t * slope) {
                    prevX = x;
                    prevGradF = gradF;
                    lastStep = (t * dir).lpNorm<Eigen::Infinity>();
                    x = xt;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            ++res.iterations;
            if (!accepted) {
                // No decrease along the model direction: restart the model once, then accept the stage.
                B = Eigen::MatrixXd::Identity(dim, dim);
                scaled = false;
                prevGradF.resize(0);
                if (++failures >= 2) stageDone = true;
                lastStep = 0.0;
            } else {
                failures = 0;
            }
        }
        if (exhausted || finalStage) break;
        mu *= cfg.barrierReduction;
        lastStep = std::numeric_limits<double>::infinity();
    }

    // KKT residual with multipliers lambda_i = mu / g_i of the final barrier problem.
    Eigen::VectorXd gradB;
    Eigen::MatrixXd hessB, jac;
    const Eigen::VectorXd g = barrierTerms(x, mu, gradB, hessB, jac);
    if (gradF.size() != dim) gradF = fdGradient(cap, x, f, cfg.fdStep, admissible).grad;
    res.kktResidual = (gradF + gradB).lpNorm<Eigen::Infinity>();
    res.minMargin = std::numeric_limits<double>::infinity();
    for (int c : active) res.minMargin = std::min(res.minMargin, g[c]);
    res.configuration = unpackParams(p, x);
    res.cap = f;
    res.status = (!exhausted && res.kktResidual <= 10.0 * cfg.tolerance) ? OptStatus::Converged : OptStatus::MaxIter;
    return res;
}

namespace {

// Random admissible start: mobile disks are placed one after another by rejection sampling.
std::optional<Constellation> randomStart(const OptimizationProblem& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto mobile = mobileIndices(p);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Constellation c = p.start;
        c.delta = p.delta;
        std::vector<bool> placed(c.disks.size(), true);
        for (int i : mobile) placed[i] = false;
        bool ok = true;
        for (int i : mobile) {
            bool found = false;
            for (int tries = 0; tries < 2000 && !found; ++tries) {
                cplx z;
                switch (p.mobility[i].kind) {
                    case MobilityKind::Free2D: z = std::polar(0.95 * std::sqrt(unit(rng)), 2.0 * pi * unit(rng)); break;
                    case MobilityKind::OnCircle: z = std::polar(p.mobility[i].circleRadius, 2.0 * pi * unit(rng)); break;
                    case MobilityKind::OnDiameter: z = cplx(1.9 * unit(rng) - 0.95, 0.0); break;
                    case MobilityKind::Fixed: break;
                }
                const HypDisk cand{z, c.disks[i].radius};
                found = true;
                for (std::size_t j = 0; j < c.disks.size() && found; ++j)
                    if (placed[j] && !(pairMargin(cand, c.disks[j], p.delta) > 0.0)) found = false;
                if (found) c.disks[i].center = z;
            }
            if (!found) {
                ok = false;
                break;
            }
            placed[i] = true;
        }
        if (ok) return c;
    }
    return std::nullopt;
}

}  // namespace

std::vector<OptimizationResult> multistart(const OptimizationProblem& p, const OptimizerConfig& cfg, int k,
                                           StartStrategy strategy, int jobs) {
    checkProblem(p);
    if (k < 1) throw ConfigError("multistart: k must be at least 1");

    // All starts are drawn up front so the result does not depend on scheduling.
    std::vector<Constellation> starts{p.start};
    if (strategy == StartStrategy::PermuteMobile) {
        const auto mobile = mobileIndices(p);
        std::vector<int> perm(mobile.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        while (std::next_permutation(perm.begin(), perm.end()) && static_cast<int>(starts.size()) < k) {
            Constellation c = p.start;
            for (std::size_t i = 0; i < mobile.size(); ++i)
                c.disks[mobile[i]].center = p.start.disks[mobile[perm[i]]].center;
            starts.push_back(c);
        }
    }
    std::mt19937_64 rng(cfg.rngSeed);
    while (static_cast<int>(starts.size()) < k) {
        auto c = randomStart(p, rng);
        if (!c) throw InfeasibleError("multistart: could not sample an admissible start");
        starts.push_back(*c);
    }

    std::vector<std::optional<OptimizationResult>> runs(starts.size());
    parallelFor(static_cast<int>(starts.size()), jobs, [&](int i) {
        OptimizationProblem q = p;
        q.start = starts[i];
        try {
            runs[i] = minimize(q, cfg);
        } catch (const InfeasibleError&) {
            // permuted starts can overlap when mobile radii differ
        }
    });

    std::vector<OptimizationResult> all;
    for (auto& r : runs)
        if (r) all.push_back(std::move(*r));
    if (all.empty()) throw InfeasibleError("multistart: no start was admissible");
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.cap < b.cap; });

    std::vector<OptimizationResult> distinct;
    for (auto& r : all) {
        bool dup = false;
        for (const auto& d : distinct)
            if (std::abs(d.cap - r.cap) < 1e-4 && maxCenterDistance(d.configuration, r.configuration) < 1e-2) {
                dup = true;
                break;
            }
        if (!dup) distinct.push_back(std::move(r));
    }
    return distinct;
}

std::vector<double> capacityLevels(const std::vector<OptimizationResult>& results, double tol) {
    std::vector<double> caps;
    for (const auto& r : results) caps.push_back(r.cap);
    std::sort(caps.begin(), caps.end());
    std::vector<double> levels;
    for (double c : caps)
        if (levels.empty() || c - levels.back() >= tol) levels.push_back(c);
    return levels;
}

LevelGrid levelGrid(const OptimizationProblem& p, std::array<double, 2> xRange, std::array<double, 2> yRange,
                    int resolution, int jobs) {
    checkProblem(p);
    const auto mobile = mobileIndices(p);
    if (mobile.size() != 1 || p.mobility[mobile[0]].kind != MobilityKind::Free2D)
        throw ConfigError("levelGrid: exactly one free2D disk and no other mobile disk is required");
    if (resolution < 2) throw ConfigError("levelGrid: resolution must be at least 2");
    if (!(xRange[1] > xRange[0]) || !(yRange[1] > yRange[0])) throw ConfigError("levelGrid: empty range");

    LevelGrid grid;
    for (int i = 0; i < resolution; ++i) {
        const double s = static_cast<double>(i) / (resolution - 1);
        grid.xs.push_back(xRange[0] + s * (xRange[1] - xRange[0]));
        grid.ys.push_back(yRange[0] + s * (yRange[1] - yRange[0]));
    }
    grid.values.assign(grid.xs.size() * grid.ys.size(), std::nullopt);
    const auto active = mobileConstraints(p);
    parallelFor(static_cast<int>(grid.values.size()), jobs, [&](int cell) {
        const std::size_t ix = cell % grid.xs.size(), iy = cell / grid.xs.size();
        const Eigen::Vector2d x(grid.xs[ix], grid.ys[iy]);
        const Eigen::VectorXd g = constraintValues(p, x);
        if (!strictlyFeasible(g, active)) return;
        grid.values[cell] = capacity(unpackParams(p, x), p.solver).cap;
    });
    return grid;
}

MinimaCount countLocalMinima(const LevelGrid& g) {
    const std::size_t nx = g.xs.size(), ny = g.ys.size();
    MinimaCount out;
    if (g.values.size() != nx * ny) throw ConfigError("countLocalMinima: malformed grid");

    // Plateaus of exactly equal values are treated as one cell so that ties do not hide a minimum.
    std::vector<int> label(nx * ny, -1);
    std::vector<std::size_t> stack;
    int next = 0;
    for (std::size_t start = 0; start < nx * ny; ++start) {
        if (!g.values[start] || label[start] >= 0) continue;
        const double v = *g.values[start];
        const int id = next++;
        label[start] = id;
        stack.assign(1, start);
        bool hasNeighbour = false, isMin = true;
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const long cx = static_cast<long>(c % nx), cy = static_cast<long>(c / nx);
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy) continue;
                    const long x = cx + dx, y = cy + dy;
                    if (x < 0 || y < 0 || x >= static_cast<long>(nx) || y >= static_cast<long>(ny)) continue;
                    const std::size_t q = static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x);
                    if (!g.values[q]) continue;
                    if (*g.values[q] == v) {
                        if (label[q] < 0) {
                            label[q] = id;
                            stack.push_back(q);
                        }
                        continue;
                    }
                    hasNeighbour = true;
                    if (*g.values[q] < v) isMin = false;
                }
        }
        if (hasNeighbour && isMin) {
            ++out.count;
            out.cells.push_back({start % nx, start / nx});
        }
    }
    return out;
}

GridBasins gridBasins(const OptimizationProblem& p, const LevelGrid& g, const OptimizerConfig& cfg, int jobs) {
    checkProblem(p);
    const auto mobile = mobileIndices(p);
    if (mobile.size() != 1 || p.mobility[mobile[0]].kind != MobilityKind::Free2D)
        throw ConfigError("gridBasins: exactly one free2D disk and no other mobile disk is required");
    GridBasins out;
    out.seeds = countLocalMinima(g).cells;

    std::vector<OptimizationResult> runs(out.seeds.size());
    parallelFor(static_cast<int>(out.seeds.size()), jobs, [&](int i) {
        OptimizationProblem q = p;
        q.start.disks[mobile[0]].center = cplx(g.xs[out.seeds[i][0]], g.ys[out.seeds[i][1]]);
        runs[i] = minimize(q, cfg);
    });

    std::vector<int> order(runs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return runs[a].cap < runs[b].cap; });
    out.basinOfSeed.assign(runs.size(), -1);
    for (int i : order) {
        int found = -1;
        for (std::size_t b = 0; b < out.minimizers.size() && found < 0; ++b)
            if (std::abs(out.minimizers[b].cap - runs[i].cap) < 1e-4 &&
                maxCenterDistance(out.minimizers[b].configuration, runs[i].configuration) < 1e-2)
                found = static_cast<int>(b);
        if (found < 0) {
            found = static_cast<int>(out.minimizers.size());
            out.minimizers.push_back(runs[i]);
        }
        out.basinOfSeed[i] = found;
    }
    return out;
}

}  // namespace hypcap
