#pragma once

// Boundary integral equation with the generalized Neumann kernel on circular
// domains  Omega = {|z| < 1} minus m closed disks, discretized by the Nystrom
// method with the n-point trapezoidal rule on every boundary component.
//
// Component 0 is the unit circle eta_0(t) = e^{it}; component j >= 1 is
// eta_j(t) = z_j + r_j e^{-it}, so Omega lies to the left of every component.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hypcap/errors.hpp"
#include "hypcap/hypgeo.hpp"

namespace hypcap {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
struct Circle {
    Complex<Scalar> center;
    Scalar radius;
};

template <typename Scalar>
struct CircularDomain {
    std::vector<Circle<Scalar>> inner;

    int m() const { return static_cast<int>(inner.size()); }

    // Signed distance from z to the complement of Omega (positive inside Omega).
    Scalar clearance(const Complex<Scalar>& z) const {
        Scalar c = Scalar(1) - std::abs(z);
        for (const auto& circ : inner) c = std::min(c, std::abs(z - circ.center) - circ.radius);
        return c;
    }

    bool contains(const Complex<Scalar>& z) const { return clearance(z) > Scalar(0); }
};

// Validity of a circular domain: inner circles strictly inside the unit disk with disjoint closures.
template <typename Scalar>
void checkDomain(const CircularDomain<Scalar>& dom) {
    for (std::size_t j = 0; j < dom.inner.size(); ++j) {
        const auto& c = dom.inner[j];
        if (!(c.radius > Scalar(0)) || !(std::abs(c.center) + c.radius < Scalar(1)))
            throw InfeasibleError("circle " + std::to_string(j + 1) + " is not strictly inside the unit disk");
        for (std::size_t k = 0; k < j; ++k) {
            const auto& d = dom.inner[k];
            if (!(std::abs(c.center - d.center) > c.radius + d.radius))
                throw InfeasibleError("circles " + std::to_string(k + 1) + " and " + std::to_string(j + 1) +
                                      " touch or overlap");
        }
    }
}

template <typename Scalar>
struct BoundaryPoint {
    int component;
    Scalar t;
    Complex<Scalar> eta, deta, ddeta;
};

template <typename Scalar>
BoundaryPoint<Scalar> boundaryPoint(const CircularDomain<Scalar>& dom, int component, Scalar t) {
    const Complex<Scalar> I(0, 1);
    if (component == 0) {
        const Complex<Scalar> e = std::polar(Scalar(1), t);
        return {0, t, e, I * e, -e};
    }
    const auto& c = dom.inner[component - 1];
    const Complex<Scalar> e = c.radius * std::polar(Scalar(1), -t);
    return {component, t, c.center + e, -I * e, -e};
}

template <typename Scalar>
struct BoundaryGrid {
    Eigen::Index n = 0;           // nodes per component
    Eigen::Index components = 0;  // m + 1
    VectorX<Scalar> s;            // parameter s_k = 2(k-1)pi/n, repeated per component
    VectorXc<Scalar> eta, deta, ddeta;
    CircularDomain<Scalar> domain;

    Eigen::Index size() const { return n * components; }
    int componentOf(Eigen::Index i) const { return static_cast<int>(i / n); }
};

template <typename Scalar>
BoundaryGrid<Scalar> buildGrid(const CircularDomain<Scalar>& dom, Eigen::Index n) {
    if (n <= 0 || n % 2 != 0) throw ConfigError("buildGrid: n must be a positive even integer");
    BoundaryGrid<Scalar> g;
    g.n = n;
    g.components = dom.m() + 1;
    const Eigen::Index N = g.size();
    g.s.resize(N);
    g.eta.resize(N);
    g.deta.resize(N);
    g.ddeta.resize(N);
    g.domain = dom;
    const Scalar h = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n);
    for (Eigen::Index j = 0; j < g.components; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto p = boundaryPoint(dom, static_cast<int>(j), h * Scalar(k));
            const Eigen::Index i = j * n + k;
            g.s[i] = p.t;
            g.eta[i] = p.eta;
            g.deta[i] = p.deta;
            g.ddeta[i] = p.ddeta;
        }
    }
    return g;
}

namespace detail {

// (A(s)/A(t)) eta'(t) / (eta(t) - eta(s)), the common complex factor of N and M.
template <typename Scalar>
Complex<Scalar> kernelCore(const BoundaryPoint<Scalar>& s, const BoundaryPoint<Scalar>& t,
                           const Complex<Scalar>& alpha) {
    return (s.eta - alpha) / (t.eta - alpha) * t.deta / (t.eta - s.eta);
}

// eta''/(2 eta') - eta'/A, whose imaginary/real parts give the diagonal limits of N and M1.
template <typename Scalar>
Complex<Scalar> kernelDiagonal(const Complex<Scalar>& eta, const Complex<Scalar>& deta,
                               const Complex<Scalar>& ddeta, const Complex<Scalar>& alpha) {
    return ddeta / (Scalar(2) * deta) - deta / (eta - alpha);
}

template <typename Scalar>
bool coincident(const BoundaryPoint<Scalar>& s, const BoundaryPoint<Scalar>& t) {
    return s.component == t.component && s.eta == t.eta;
}

}  // namespace detail

// Generalized Neumann kernel N(s, t), including its continuous extension to s = t.
template <typename Scalar>
Scalar kernelN(const BoundaryPoint<Scalar>& s, const BoundaryPoint<Scalar>& t, const Complex<Scalar>& alpha) {
    const Scalar invPi = std::numbers::inv_pi_v<Scalar>;
    if (detail::coincident(s, t)) return invPi * std::imag(detail::kernelDiagonal(t.eta, t.deta, t.ddeta, alpha));
    return invPi * std::imag(detail::kernelCore(s, t, alpha));
}

// Continuous part of M: on the same component M(s,t) + cot((s-t)/2)/(2pi), across components M itself.
template <typename Scalar>
Scalar kernelMCont(const BoundaryPoint<Scalar>& s, const BoundaryPoint<Scalar>& t, const Complex<Scalar>& alpha) {
    const Scalar invPi = std::numbers::inv_pi_v<Scalar>;
    if (detail::coincident(s, t)) return invPi * std::real(detail::kernelDiagonal(t.eta, t.deta, t.ddeta, alpha));
    Scalar v = invPi * std::real(detail::kernelCore(s, t, alpha));
    if (s.component == t.component) v += invPi / Scalar(2) / std::tan((s.t - t.t) / Scalar(2));
    return v;
}

// Discrete conjugation operator on one n-point periodic grid: the odd-even rule
// (2/n) sum_{i-j odd} cot((s_i - s_j)/2) mu_j  for  (1/2pi) PV int cot((s-t)/2) mu(t) dt.
template <typename Scalar>
MatrixX<Scalar> conjugationMatrix(Eigen::Index n) {
    if (n <= 0 || n % 2 != 0) throw ConfigError("conjugationMatrix: n must be a positive even integer");
    MatrixX<Scalar> K = MatrixX<Scalar>::Zero(n, n);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if ((i - j) % 2 != 0) K(i, j) = Scalar(2) / Scalar(n) / std::tan(pi * Scalar(i - j) / Scalar(n));
    return K;
}

template <typename Scalar>
struct OperatorMatrices {
    MatrixX<Scalar> N;
    MatrixX<Scalar> M;
};

// Width of the strip |Im t| < sigma around the real axis in which the kernels with targets on
// component `a` and sources on component `b != a` are analytic in the source parameter t.
template <typename Scalar>
Scalar crossStripWidth(const CircularDomain<Scalar>& dom, int a, int b) {
    if (b == 0) {
        const auto& ca = dom.inner[a - 1];
        return -std::log(std::abs(ca.center) + ca.radius);
    }
    const auto& cb = dom.inner[b - 1];
    const Scalar nearest = a == 0 ? Scalar(1) - std::abs(cb.center)
                                  : std::abs(dom.inner[a - 1].center - cb.center) - dom.inner[a - 1].radius;
    return std::log(nearest / cb.radius);
}

// Values at the q*n equispaced points of the trigonometric interpolant through n equispaced samples.
template <typename Scalar>
MatrixX<Scalar> interpolationMatrix(Eigen::Index n, Eigen::Index q) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    MatrixX<Scalar> P(q * n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index l = 0; l < q * n; ++l) {
            if (l % q == 0) {
                P(l, j) = l / q == j ? Scalar(1) : Scalar(0);
                continue;
            }
            const Scalar x = Scalar(2) * pi * (Scalar(l) / Scalar(q * n) - Scalar(j) / Scalar(n));
            P(l, j) = std::sin(Scalar(n) * x / Scalar(2)) / std::tan(x / Scalar(2)) / Scalar(n);
        }
    }
    return P;
}

struct QuadratureOptions {
    // Integrate cross-component blocks with a nearly singular kernel on a refined source grid.
    bool refineNearField = true;
    int maxOversample = 32;
    // A block counts as resolved once sigma * (oversampled n) reaches this (e^-40 ~ 4e-18).
    double resolvedExponent = 40.0;
};

// Power-of-two oversampling factor per (target, source) component pair; 1 on the diagonal.
template <typename Scalar>
std::vector<std::vector<int>> oversampleFactors(const BoundaryGrid<Scalar>& g, const QuadratureOptions& opts) {
    const int C = static_cast<int>(g.components);
    std::vector<std::vector<int>> q(C, std::vector<int>(C, 1));
    if (!opts.refineNearField) return q;
    for (int a = 0; a < C; ++a) {
        for (int b = 0; b < C; ++b) {
            if (a == b) continue;
            const double sigma = static_cast<double>(crossStripWidth(g.domain, a, b));
            int f = 1;
            while (f < opts.maxOversample && sigma * double(f * g.n) < opts.resolvedExponent) f *= 2;
            q[a][b] = f;
        }
    }
    return q;
}

template <typename Scalar>
OperatorMatrices<Scalar> assemble(const BoundaryGrid<Scalar>& g, const Complex<Scalar>& alpha,
                                  const QuadratureOptions& opts = {}) {
    const Eigen::Index n = g.n, N = g.size();
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar w = Scalar(2) * pi / Scalar(n);
    const Scalar wPi = w / pi;

    // cot(pi k / n) for k = 1..n-1; only odd k enter the odd-even rule, all k enter M1.
    VectorX<Scalar> cotTab(n);
    cotTab[0] = 0;
    for (Eigen::Index k = 1; k < n; ++k) cotTab[k] = Scalar(1) / std::tan(pi * Scalar(k) / Scalar(n));

    const auto q = oversampleFactors(g, opts);
    const VectorXc<Scalar> A = g.eta.array() - alpha;
    OperatorMatrices<Scalar> out{MatrixX<Scalar>(N, N), MatrixX<Scalar>(N, N)};
    for (Eigen::Index j = 0; j < N; ++j) {
        const Complex<Scalar> colFactor = g.deta[j] / A[j];
        const Eigen::Index cj = j / n, kj = j % n;
        for (Eigen::Index i = 0; i < N; ++i) {
            if (i == j) {
                const Complex<Scalar> d = detail::kernelDiagonal(g.eta[j], g.deta[j], g.ddeta[j], alpha);
                out.N(i, j) = wPi * std::imag(d);
                out.M(i, j) = wPi * std::real(d);
                continue;
            }
            const Eigen::Index ci = i / n;
            if (ci != cj && q[ci][cj] > 1) continue;  // filled below
            const Complex<Scalar> v = A[i] * colFactor / (g.eta[j] - g.eta[i]);
            out.N(i, j) = wPi * std::imag(v);
            Scalar m = wPi * std::real(v);
            if (ci == cj) {
                const Eigen::Index k = ((i % n) - kj + n) % n;
                // continuous part M1 = M + cot/(2pi), then the odd-even rule for -cot/(2pi)
                m += w / (Scalar(2) * pi) * cotTab[k];
                if (k % 2 != 0) m -= Scalar(2) / Scalar(n) * cotTab[k];
            }
            out.M(i, j) = m;
        }
    }

    // Refined blocks: trapezoidal rule on q*n source points applied to the trigonometric
    // interpolant of the density, i.e. block = W_fine * P.
    for (Eigen::Index b = 0; b < g.components; ++b) {
        for (Eigen::Index a = 0; a < g.components; ++a) {
            const int f = q[a][b];
            if (a == b || f == 1) continue;
            const Eigen::Index nf = f * n;
            const Scalar wf = Scalar(2) / Scalar(nf);  // (2 pi / nf) / pi
            const MatrixX<Scalar> P = interpolationMatrix<Scalar>(n, f);
            MatrixX<Scalar> Wn(n, nf), Wm(n, nf);
            for (Eigen::Index l = 0; l < nf; ++l) {
                const auto src = boundaryPoint(g.domain, static_cast<int>(b), Scalar(2) * pi * Scalar(l) / Scalar(nf));
                const Complex<Scalar> colFactor = src.deta / (src.eta - alpha);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const Complex<Scalar> v = A[a * n + i] * colFactor / (src.eta - g.eta[a * n + i]);
                    Wn(i, l) = wf * std::imag(v);
                    Wm(i, l) = wf * std::real(v);
                }
            }
            out.N.block(a * n, b * n, n, n).noalias() = Wn * P;
            out.M.block(a * n, b * n, n, n).noalias() = Wm * P;
        }
    }
    return out;
}

enum class SolveMode { Direct, Iterative };

inline const char* toString(SolveMode m) { return m == SolveMode::Direct ? "direct" : "iterative"; }

template <typename Scalar>
struct GmresResult {
    VectorX<Scalar> x;
    int iterations = 0;
    Scalar residual = 0;  // true residual norm relative to ||b||
    bool converged = false;
};

// Unrestarted GMRES (modified Gram-Schmidt, Givens rotations) with x0 = 0.
template <typename Scalar, typename Op>
GmresResult<Scalar> gmres(const Op& apply, const VectorX<Scalar>& b, Scalar tol, int maxIter) {
    const Eigen::Index N = b.size();
    GmresResult<Scalar> res;
    res.x = VectorX<Scalar>::Zero(N);
    const Scalar bnorm = b.norm();
    if (bnorm == Scalar(0)) {
        res.converged = true;
        return res;
    }
    const int kmax = static_cast<int>(std::min<Eigen::Index>(maxIter, N));
    MatrixX<Scalar> V(N, kmax + 1);
    MatrixX<Scalar> H = MatrixX<Scalar>::Zero(kmax + 1, kmax);
    VectorX<Scalar> cs(kmax), sn(kmax), e = VectorX<Scalar>::Zero(kmax + 1);
    V.col(0) = b / bnorm;
    e[0] = bnorm;
    int k = 0;
    while (k < kmax) {
        VectorX<Scalar> v = apply(V.col(k));
        for (int i = 0; i <= k; ++i) {
            H(i, k) = V.col(i).dot(v);
            v -= H(i, k) * V.col(i);
        }
        H(k + 1, k) = v.norm();
        const bool breakdown = H(k + 1, k) == Scalar(0);
        if (!breakdown) V.col(k + 1) = v / H(k + 1, k);
        for (int i = 0; i < k; ++i) {
            const Scalar t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
            H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
            H(i, k) = t;
        }
        const Scalar r = std::hypot(H(k, k), H(k + 1, k));
        cs[k] = H(k, k) / r;
        sn[k] = H(k + 1, k) / r;
        H(k, k) = r;
        H(k + 1, k) = 0;
        e[k + 1] = -sn[k] * e[k];
        e[k] = cs[k] * e[k];
        ++k;
        if (std::abs(e[k]) <= tol * bnorm || breakdown) break;
    }
    const VectorX<Scalar> y =
        H.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(e.head(k));
    res.x = V.leftCols(k) * y;
    res.iterations = k;
    res.residual = (b - apply(res.x)).norm() / bnorm;
    res.converged = std::abs(e[k]) <= tol * bnorm;
    return res;
}

template <typename Scalar>
struct MuSolution {
    VectorX<Scalar> mu;
    int iterations = 0;
    Scalar residual = 0;
};

// Assembled Nystrom system for one domain and auxiliary point alpha. The matrices and the
// factorization are immutable after construction, so solves may run concurrently.
template <typename Scalar>
class BieSolver {
public:
    BieSolver(const BoundaryGrid<Scalar>& grid, const Complex<Scalar>& alpha, SolveMode mode = SolveMode::Direct,
              Scalar tolerance = Scalar(1e-14), int maxIterations = 100, const QuadratureOptions& quad = {})
        : mats_(assemble(grid, alpha, quad)), mode_(mode), tol_(tolerance), maxIter_(maxIterations) {
        system_ = MatrixX<Scalar>::Identity(grid.size(), grid.size()) - mats_.N;
        if (mode_ == SolveMode::Direct) lu_.compute(system_);
    }

    const OperatorMatrices<Scalar>& matrices() const { return mats_; }
    SolveMode mode() const { return mode_; }

    // (I - N) mu = -M gamma
    MuSolution<Scalar> solveMu(const VectorX<Scalar>& gamma) const {
        const VectorX<Scalar> rhs = -(mats_.M * gamma);
        MuSolution<Scalar> out;
        if (mode_ == SolveMode::Direct) {
            out.mu = lu_.solve(rhs);
            const Scalar rn = rhs.norm();
            out.residual = rn > Scalar(0) ? (rhs - system_ * out.mu).norm() / rn : Scalar(0);
            return out;
        }
        auto apply = [this](const auto& v) -> VectorX<Scalar> { return system_ * v; };
        auto g = gmres<Scalar>(apply, rhs, tol_, maxIter_);
        if (!g.converged)
            throw ConvergenceError("GMRES did not reach the residual tolerance in " +
                                       std::to_string(maxIter_) + " iterations",
                                   static_cast<double>(g.residual));
        out.mu = std::move(g.x);
        out.iterations = g.iterations;
        out.residual = g.residual;
        return out;
    }

    // h = [M mu - (I - N) gamma] / 2
    VectorX<Scalar> computeH(const VectorX<Scalar>& mu, const VectorX<Scalar>& gamma) const {
        return (mats_.M * mu - system_ * gamma) / Scalar(2);
    }

private:
    OperatorMatrices<Scalar> mats_;
    MatrixX<Scalar> system_;
    Eigen::PartialPivLU<MatrixX<Scalar>> lu_;
    SolveMode mode_;
    Scalar tol_;
    int maxIter_;
};

}  // namespace hypcap
