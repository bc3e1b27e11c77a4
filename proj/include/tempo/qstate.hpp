#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tempo {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 8;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Spherical parametrization of a qubit measurement direction, in radians.
/// No range restriction: the functionals integrate each angle over [0, 2pi].
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;

    friend bool operator==(const BlochAngles&, const BlochAngles&) = default;
};

/// State vector over 1-3 qubits (dimension 2, 4 or 8).
///
/// Index encoding is big-endian: qubit 0 (the system) is the most
/// significant bit, then auxiliary qubit 1, then auxiliary qubit 2. A ket
/// produced by a projection is a residual and carries no normalization
/// promise; `is_normalized()` reports which kind a value is.
class Ket {
public:
    /// Builds a normalized ket; throws InvalidArgument unless the squared
    /// norm is 1 within kNormTolerance.
    static Ket normalized(std::span<const Complex> amplitudes);
    static Ket normalized(std::initializer_list<Complex> amplitudes);

    /// Builds an un-normalized residual ket. Any finite vector is accepted.
    static Ket residual(std::span<const Complex> amplitudes);
    static Ket residual(std::initializer_list<Complex> amplitudes);

    static Ket zero(std::size_t dim);
    static Ket basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return dim_; }
    int qubits() const;
    bool is_normalized() const { return normalized_; }

    Complex operator[](std::size_t i) const { return amp_[i]; }
    std::span<const Complex> amplitudes() const { return {amp_.data(), dim_}; }

    double norm_squared() const;

    /// Explicit renormalization of a residual. Throws InvalidArgument on a
    /// zero vector.
    Ket renormalized() const;

    Ket scaled(Complex factor) const;

private:
    Ket() = default;
    static Ket make(std::span<const Complex> amplitudes, bool normalized);

    std::array<Complex, kMaxDim> amp_{};
    std::size_t dim_ = 0;
    bool normalized_ = false;
};

/// Dense unitary on a 1-3 qubit register.
class Unitary {
public:
    /// Row-major entries; throws InvalidArgument unless U^dagger U = 1
    /// entrywise within kNormTolerance.
    static Unitary from_rows(std::size_t dim, std::span<const Complex> entries);
    static Unitary from_rows(std::size_t dim, std::initializer_list<Complex> entries);
    static Unitary identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    Complex operator()(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }

    Unitary adjoint() const;
    friend Unitary operator*(const Unitary& lhs, const Unitary& rhs);

    /// Largest entrywise deviation of U^dagger U from the identity.
    double unitarity_defect() const;

private:
    Unitary() = default;

    std::array<Complex, kMaxDim * kMaxDim> m_{};
    std::size_t dim_ = 0;
};

// Single-qubit reference states in the {|z+>, |z->} basis.
Ket z_plus();
Ket z_minus();
Ket x_plus();
Ket x_minus();

/// (cos theta, e^{i phi} sin theta).
Ket chi(BlochAngles angles);
/// (-e^{-i phi} sin theta, cos theta); orthogonal to chi(angles).
Ket chi_perp(BlochAngles angles);
/// chi or chi_perp selected by flag.
Ket measurement_ket(BlochAngles angles, bool perp);

/// Orthogonal complement of a normalized qubit ket, (-conj b, conj a).
Ket complement(const Ket& qubit);

/// <bra|ket>, conjugate-linear in the first argument.
Complex inner(const Ket& bra, const Ket& ket);

/// Kronecker product, `a` as the more significant factor.
Ket tensor(const Ket& a, const Ket& b);
Ket tensor(std::initializer_list<Ket> factors);

Ket apply(const Unitary& u, const Ket& psi);

/// Outcome of projecting a ket onto a full-register target.
struct Projection {
    Ket residual;       // |target><target|psi>, un-normalized
    Complex amplitude;  // <target|psi>
    double probability() const { return std::norm(amplitude); }
};

Projection project(const Ket& psi, const Ket& target);

/// Outcome of projecting a subset of qubits onto `target` with the identity
/// on the remaining qubits.
struct FactorProjection {
    Ket residual;   // (|target><target| (x) 1) psi, full register
    Ket remainder;  // (<target| (x) 1) psi over the untouched qubits
    double probability() const { return residual.norm_squared(); }
};

/// `qubits` lists the projected register positions in the order matching
/// the target's tensor factors. At least one qubit must remain untouched.
FactorProjection project_factor(const Ket& psi, std::span<const int> qubits, const Ket& target);
FactorProjection project_factor(const Ket& psi, int qubit, const Ket& target);

// Gate constructors.

Unitary pauli_x();

/// Qubit unitary sending `from` to `to` exactly and complement(from) to
/// e^{i complement_phase} complement(to).
Unitary rotation(const Ket& from, const Ket& to, double complement_phase = 0.0);

/// Embeds a single-qubit unitary at `qubit` of an n-qubit register.
Unitary lift(const Unitary& single, int qubit, int num_qubits);

/// Applies `when0` / `when1` to `target` according to the `control` bit.
Unitary controlled(int control, int target, const Unitary& when0, const Unitary& when1, int num_qubits);

Unitary cnot(int control, int target, int num_qubits);

}  // namespace tempo
