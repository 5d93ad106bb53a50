#pragma once

// Hyperbolic geometry of the Poincare unit disk.
//
// Points are complex numbers with |z| < 1. Distances are hyperbolic lengths for
// the metric of curvature -1, i.e. sh^2(rho/2) = |x-y|^2 / ((1-|x|^2)(1-|y|^2)).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "hypcap/errors.hpp"

namespace hypcap {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
struct HyperbolicDisk {
    Complex<Scalar> center;
    Scalar radius;
};

template <typename Scalar>
struct EuclideanDisk {
    Complex<Scalar> center;
    Scalar radius;
};

// z -> e^{i phi} (z - a) / (1 - conj(a) z)
template <typename Scalar>
struct MobiusSelfMap {
    Complex<Scalar> a{};
    Scalar phi{0};
};

using HypDisk = HyperbolicDisk<double>;
using EucDisk = EuclideanDisk<double>;
using Mobius = MobiusSelfMap<double>;

namespace detail {

// 1 - |z|^2 without cancellation for |z| close to one.
template <typename Scalar>
Scalar oneMinusAbs2(const Complex<Scalar>& z) {
    const Scalar r = std::abs(z);
    return (Scalar(1) - r) * (Scalar(1) + r);
}

template <typename Scalar>
void requireInside(const Complex<Scalar>& z, const char* where) {
    if (!(std::abs(z) < Scalar(1)))
        throw DomainError(std::string(where) + ": point not inside the unit disk");
}

}  // namespace detail

template <typename Scalar>
Scalar hypDistance(const Complex<Scalar>& x, const Complex<Scalar>& y) {
    detail::requireInside(x, "hypDistance");
    detail::requireInside(y, "hypDistance");
    const Scalar s = std::abs(x - y) /
                     std::sqrt(detail::oneMinusAbs2(x) * detail::oneMinusAbs2(y));
    return Scalar(2) * std::asinh(s);
}

template <typename Scalar>
Complex<Scalar> hypMidpoint(const Complex<Scalar>& x, const Complex<Scalar>& y) {
    detail::requireInside(x, "hypMidpoint");
    detail::requireInside(y, "hypMidpoint");
    const Scalar ux = detail::oneMinusAbs2(x);
    const Scalar uy = detail::oneMinusAbs2(y);
    const Scalar A = std::sqrt(std::norm(x - y) + ux * uy);
    const Scalar den = Scalar(1) - std::norm(x) * std::norm(y) + A * std::sqrt(ux * uy);
    return (y * ux + x * uy) / den;
}

template <typename Scalar>
EuclideanDisk<Scalar> hypToEuc(const HyperbolicDisk<Scalar>& d) {
    detail::requireInside(d.center, "hypToEuc");
    if (d.radius < Scalar(0)) throw DomainError("hypToEuc: negative radius");
    const Scalar t = std::tanh(d.radius / Scalar(2));
    const Scalar x2 = std::norm(d.center);
    const Scalar den = Scalar(1) - x2 * t * t;
    return {d.center * ((Scalar(1) - t) * (Scalar(1) + t) / den),
            detail::oneMinusAbs2(d.center) * t / den};
}

template <typename Scalar>
HyperbolicDisk<Scalar> eucToHyp(const EuclideanDisk<Scalar>& d) {
    const Scalar dist = std::abs(d.center);
    if (!(d.radius > Scalar(0)) || !(dist + d.radius < Scalar(1)))
        throw DomainError("eucToHyp: disk is not strictly inside the unit disk");
    if (dist == Scalar(0))
        return {Complex<Scalar>(0), Scalar(2) * std::atanh(d.radius)};
    const Complex<Scalar> dir = d.center / dist;
    const Complex<Scalar> lo(dist - d.radius), hi(dist + d.radius);
    const Scalar t = std::real(hypMidpoint(lo, hi));
    return {t * dir, hypDistance(Complex<Scalar>(t), hi)};
}

template <typename Scalar>
Scalar hypArea(Scalar M) {
    if (M < Scalar(0)) throw DomainError("hypArea: negative radius");
    const Scalar s = std::sinh(M / Scalar(2));
    return Scalar(4) * std::numbers::pi_v<Scalar> * s * s;
}

template <typename Scalar>
Scalar hypCircumference(Scalar M) {
    if (M < Scalar(0)) throw DomainError("hypCircumference: negative radius");
    return Scalar(2) * std::numbers::pi_v<Scalar> * std::sinh(M);
}

template <typename Scalar>
Complex<Scalar> mobiusApply(const MobiusSelfMap<Scalar>& T, const Complex<Scalar>& z) {
    return std::polar(Scalar(1), T.phi) * (z - T.a) / (Scalar(1) - std::conj(T.a) * z);
}

template <typename Scalar>
MobiusSelfMap<Scalar> mobiusInverse(const MobiusSelfMap<Scalar>& T) {
    // w = e^{i phi}(z-a)/(1-conj(a)z)  <=>  z = e^{-i phi}(w + a e^{i phi})/(1 + conj(a e^{i phi}) w)
    const Complex<Scalar> b = -T.a * std::polar(Scalar(1), T.phi);
    return {b, -T.phi};
}

template <typename Scalar>
HyperbolicDisk<Scalar> mobiusMapDisk(const MobiusSelfMap<Scalar>& T, const HyperbolicDisk<Scalar>& d) {
    return {mobiusApply(T, d.center), d.radius};
}

// Point at hyperbolic distance `dist` from `center` in the direction of angle `theta`,
// measured in the frame where `center` is moved to the origin by a real-preserving map.
template <typename Scalar>
Complex<Scalar> hypCirclePoint(const Complex<Scalar>& center, Scalar dist, Scalar theta) {
    const Complex<Scalar> w = std::polar(std::tanh(dist / Scalar(2)), theta);
    return (w + center) / (Scalar(1) + std::conj(center) * w);
}

// Inverse of hypCirclePoint for the angle: the argument of z in the frame centred at `center`.
template <typename Scalar>
Scalar hypCircleAngle(const Complex<Scalar>& center, const Complex<Scalar>& z) {
    return std::arg((z - center) / (Scalar(1) - std::conj(center) * z));
}

// Points at hyperbolic distance M1 from c1 and M2 from c2. Near-tangent circles
// (negative discriminant down to -1e-12) collapse to their single tangency point.
template <typename Scalar>
std::vector<Complex<Scalar>> hypCircleIntersection(const Complex<Scalar>& c1, Scalar M1,
                                                   const Complex<Scalar>& c2, Scalar M2) {
    const auto e1 = hypToEuc(HyperbolicDisk<Scalar>{c1, M1});
    const auto e2 = hypToEuc(HyperbolicDisk<Scalar>{c2, M2});
    const Complex<Scalar> dc = e2.center - e1.center;
    const Scalar d = std::abs(dc);
    if (d == Scalar(0)) return {};
    const Scalar a = (d * d + e1.radius * e1.radius - e2.radius * e2.radius) / (Scalar(2) * d);
    const Scalar h2 = e1.radius * e1.radius - a * a;
    const Complex<Scalar> u = dc / d;
    const Complex<Scalar> foot = e1.center + a * u;
    if (h2 < Scalar(-1e-12)) return {};
    if (h2 <= Scalar(0)) return {foot};
    const Scalar h = std::sqrt(h2);
    const Complex<Scalar> iu = Complex<Scalar>(0, 1) * u;
    return {foot + h * iu, foot - h * iu};
}

}  // namespace hypcap
