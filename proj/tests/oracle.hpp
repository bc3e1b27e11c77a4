#pragma once

// Independent reference computations for the test suites. Everything here
// works on raw std::complex arrays and closed-form Bloch vectors, never on
// the library's Ket/Unitary types, so agreement is a genuine cross-check.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {

using C = std::complex<double>;
using Qubit = std::array<C, 2>;
using Mat2 = std::array<std::array<C, 2>, 2>;

inline Qubit chi(double th, double ph) { return {std::cos(th), std::exp(C(0, ph)) * std::sin(th)}; }
inline Qubit chi_perp(double th, double ph) { return {-std::exp(C(0, -ph)) * std::sin(th), std::cos(th)}; }

inline C braket(const Qubit& a, const Qubit& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

/// Observable |chi><chi| - |chi_perp><chi_perp| as n . sigma with the Bloch
/// vector n = (sin 2t cos p, sin 2t sin p, cos 2t).
inline Mat2 observable(double th, double ph) {
    const double nx = std::sin(2 * th) * std::cos(ph);
    const double ny = std::sin(2 * th) * std::sin(ph);
    const double nz = std::cos(2 * th);
    return {{{C(nz), C(nx, -ny)}, {C(nx, ny), C(-nz)}}};
}

/// <psi| A (x) B |psi> for a two-qubit psi (first factor most significant).
inline double expectation(const std::array<C, 4>& psi, const Mat2& a, const Mat2& b) {
    C acc = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += std::conj(psi[i]) * a[i >> 1][j >> 1] * b[i & 1][j & 1] * psi[j];
    return acc.real();
}

inline std::array<C, 4> phi_plus() {
    const double h = (1.0 / std::numbers::sqrt2);
    return {h, 0, 0, h};
}

inline double spatial_correlator(const std::array<C, 4>& psi, double t1, double p1, double t2, double p2) {
    return expectation(psi, observable(t1, p1), observable(t2, p2));
}

/// Sequential two-time amplitude <c2|T|c1><c1|psi>.
inline C evolved_amplitude(const Qubit& psi, const Mat2& T, const Qubit& c1, const Qubit& c2) {
    const Qubit tc1{T[0][0] * c1[0] + T[0][1] * c1[1], T[1][0] * c1[0] + T[1][1] * c1[1]};
    return braket(c2, tc1) * braket(c1, psi);
}

inline Mat2 identity() { return {{{C(1), C(0)}, {C(0), C(1)}}}; }

/// Random SU(2) element exp(-i a n.sigma / 2) with a phase.
template <typename Rng>
Mat2 random_unitary(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    const double a = u(rng), th = u(rng) / 2, ph = u(rng), g = u(rng);
    const double nx = std::sin(th) * std::cos(ph), ny = std::sin(th) * std::sin(ph), nz = std::cos(th);
    const C c(std::cos(a / 2)), s(0, -std::sin(a / 2));
    const C e = std::exp(C(0, g));
    return {{{e * (c + s * nz), e * s * C(nx, -ny)}, {e * s * C(nx, ny), e * (c - s * nz)}}};
}

/// CHSH combination of any correlator e(t1, p1, t2, p2).
template <typename E>
double chsh(const std::array<double, 8>& q, E&& e) {
    return e(q[0], q[1], q[2], q[3]) - e(q[0], q[1], q[6], q[7]) + e(q[4], q[5], q[2], q[3]) +
           e(q[4], q[5], q[6], q[7]);
}

/// Closed form of S~ for [z+] (.) [z+] (phases drop out).
inline double zz_product_s(double t1, double t2, double t3, double t4) {
    return std::cos(2 * t1) * (std::cos(2 * t2) - std::cos(2 * t4)) +
           std::cos(2 * t3) * (std::cos(2 * t2) + std::cos(2 * t4));
}

}  // namespace oracle
