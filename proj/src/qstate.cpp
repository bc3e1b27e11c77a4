#include "tempo/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tempo/errors.hpp"

namespace tempo {
namespace {

bool valid_dim(std::size_t dim) { return dim == 2 || dim == 4 || dim == 8; }

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void require_finite(BlochAngles a) {
    if (!std::isfinite(a.theta) || !std::isfinite(a.phi)) {
        throw InvalidArgument("Bloch angles must be finite");
    }
}

void require_same_dim(const Ket& a, const Ket& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()) + ")");
    }
}

int bit_of(std::size_t index, int qubit, int num_qubits) {
    return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1U);
}

}  // namespace

Ket Ket::make(std::span<const Complex> amplitudes, bool normalized) {
    if (!valid_dim(amplitudes.size())) {
        if (amplitudes.size() > kMaxDim) {
            throw UnsupportedDimension("ket dimension " + std::to_string(amplitudes.size()) + " exceeds 8");
        }
        throw InvalidArgument("ket dimension must be 2, 4 or 8, got " + std::to_string(amplitudes.size()));
    }
    Ket k;
    k.dim_ = amplitudes.size();
    for (std::size_t i = 0; i < k.dim_; ++i) {
        if (!finite(amplitudes[i])) {
            throw InvalidArgument("ket amplitudes must be finite");
        }
        k.amp_[i] = amplitudes[i];
    }
    if (normalized) {
        if (std::abs(k.norm_squared() - 1.0) > kNormTolerance) {
            throw InvalidArgument("ket is not normalized");
        }
    }
    k.normalized_ = normalized;
    return k;
}

Ket Ket::normalized(std::span<const Complex> amplitudes) { return make(amplitudes, true); }
Ket Ket::normalized(std::initializer_list<Complex> amplitudes) {
    return make({amplitudes.begin(), amplitudes.size()}, true);
}
Ket Ket::residual(std::span<const Complex> amplitudes) { return make(amplitudes, false); }
Ket Ket::residual(std::initializer_list<Complex> amplitudes) {
    return make({amplitudes.begin(), amplitudes.size()}, false);
}

Ket Ket::zero(std::size_t dim) {
    std::array<Complex, kMaxDim> z{};
    return make({z.data(), dim}, false);
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw InvalidArgument("basis index out of range");
    }
    std::array<Complex, kMaxDim> e{};
    e[index] = 1.0;
    return make({e.data(), dim}, true);
}

int Ket::qubits() const { return dim_ == 2 ? 1 : dim_ == 4 ? 2 : 3; }

double Ket::norm_squared() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += std::norm(amp_[i]);
    return s;
}

Ket Ket::renormalized() const {
    const double n2 = norm_squared();
    if (n2 == 0.0) {
        throw InvalidArgument("cannot renormalize a zero vector");
    }
    Ket k = *this;
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < dim_; ++i) k.amp_[i] *= inv;
    k.normalized_ = true;
    return k;
}

Ket Ket::scaled(Complex factor) const {
    Ket k = *this;
    for (std::size_t i = 0; i < dim_; ++i) k.amp_[i] *= factor;
    k.normalized_ = normalized_ && std::abs(std::norm(factor) - 1.0) <= kNormTolerance;
    return k;
}

Unitary Unitary::from_rows(std::size_t dim, std::span<const Complex> entries) {
    if (!valid_dim(dim)) {
        throw UnsupportedDimension("unitary dimension must be 2, 4 or 8");
    }
    if (entries.size() != dim * dim) {
        throw InvalidArgument("unitary needs dim*dim entries");
    }
    Unitary u;
    u.dim_ = dim;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!finite(entries[i])) throw InvalidArgument("unitary entries must be finite");
        u.m_[i] = entries[i];
    }
    if (u.unitarity_defect() > kNormTolerance) {
        throw InvalidArgument("matrix is not unitary");
    }
    return u;
}

Unitary Unitary::from_rows(std::size_t dim, std::initializer_list<Complex> entries) {
    return from_rows(dim, std::span<const Complex>(entries.begin(), entries.size()));
}

Unitary Unitary::identity(std::size_t dim) {
    if (!valid_dim(dim)) {
        throw UnsupportedDimension("unitary dimension must be 2, 4 or 8");
    }
    Unitary u;
    u.dim_ = dim;
    for (std::size_t i = 0; i < dim; ++i) u.m_[i * dim + i] = 1.0;
    return u;
}

Unitary Unitary::adjoint() const {
    Unitary a;
    a.dim_ = dim_;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) a.m_[c * dim_ + r] = std::conj(m_[r * dim_ + c]);
    return a;
}

Unitary operator*(const Unitary& lhs, const Unitary& rhs) {
    if (lhs.dim_ != rhs.dim_) {
        throw InvalidArgument("unitary product: dimension mismatch");
    }
    Unitary p;
    p.dim_ = lhs.dim_;
    const std::size_t d = lhs.dim_;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += lhs.m_[r * d + k] * rhs.m_[k * d + c];
            p.m_[r * d + c] = s;
        }
    return p;
}

double Unitary::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) s += std::conj(m_[k * dim_ + r]) * m_[k * dim_ + c];
            worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
        }
    return worst;
}

Ket z_plus() { return Ket::basis(2, 0); }
Ket z_minus() { return Ket::basis(2, 1); }
Ket x_plus() {
    const double h = kInvSqrt2;
    return Ket::normalized({h, h});
}
Ket x_minus() {
    const double h = kInvSqrt2;
    return Ket::normalized({h, -h});
}

Ket chi(BlochAngles a) {
    require_finite(a);
    return Ket::normalized({std::cos(a.theta), std::polar(1.0, a.phi) * std::sin(a.theta)});
}

Ket chi_perp(BlochAngles a) {
    require_finite(a);
    return Ket::normalized({-std::polar(1.0, -a.phi) * std::sin(a.theta), std::cos(a.theta)});
}

Ket measurement_ket(BlochAngles angles, bool perp) { return perp ? chi_perp(angles) : chi(angles); }

Ket complement(const Ket& qubit) {
    if (qubit.dim() != 2 || !qubit.is_normalized()) {
        throw InvalidArgument("complement needs a normalized single-qubit ket");
    }
    return Ket::normalized({-std::conj(qubit[1]), std::conj(qubit[0])});
}

Complex inner(const Ket& bra, const Ket& ket) {
    require_same_dim(bra, ket, "inner");
    Complex s = 0.0;
    for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
    return s;
}

Ket tensor(const Ket& a, const Ket& b) {
    const std::size_t d = a.dim() * b.dim();
    if (d > kMaxDim) {
        throw UnsupportedDimension("tensor product of dimension " + std::to_string(d) + " exceeds 8");
    }
    std::array<Complex, kMaxDim> out{};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
    std::span<const Complex> s(out.data(), d);
    return a.is_normalized() && b.is_normalized() ? Ket::normalized(s) : Ket::residual(s);
}

Ket tensor(std::initializer_list<Ket> factors) {
    if (factors.size() == 0) throw InvalidArgument("tensor of no factors");
    auto it = factors.begin();
    Ket acc = *it++;
    for (; it != factors.end(); ++it) acc = tensor(acc, *it);
    return acc;
}

Ket apply(const Unitary& u, const Ket& psi) {
    if (u.dim() != psi.dim()) {
        throw InvalidArgument("apply: dimension mismatch");
    }
    std::array<Complex, kMaxDim> out{};
    for (std::size_t r = 0; r < psi.dim(); ++r) {
        Complex s = 0.0;
        for (std::size_t c = 0; c < psi.dim(); ++c) s += u(r, c) * psi[c];
        out[r] = s;
    }
    std::span<const Complex> s(out.data(), psi.dim());
    return psi.is_normalized() ? Ket::normalized(s) : Ket::residual(s);
}

Projection project(const Ket& psi, const Ket& target) {
    require_same_dim(psi, target, "project");
    if (!target.is_normalized()) {
        throw InvalidArgument("project: target must be normalized");
    }
    const Complex amp = inner(target, psi);
    Ket residual = Ket::residual(target.amplitudes()).scaled(amp);
    return {Ket::residual(residual.amplitudes()), amp};
}

FactorProjection project_factor(const Ket& psi, std::span<const int> qubits, const Ket& target) {
    if (!target.is_normalized()) {
        throw InvalidArgument("project_factor: target must be normalized");
    }
    const int n = psi.qubits();
    const int k = static_cast<int>(qubits.size());
    if (k == 0 || k >= n) {
        throw InvalidArgument("project_factor: must leave at least one qubit untouched");
    }
    if (target.dim() != (std::size_t{1} << k)) {
        throw InvalidArgument("project_factor: target dimension does not match projected qubits");
    }
    unsigned mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n || (mask >> q) & 1U) {
            throw InvalidArgument("project_factor: bad qubit index");
        }
        mask |= 1U << q;
    }
    std::array<int, 3> rest{};
    int nrest = 0;
    for (int q = 0; q < n; ++q)
        if (!((mask >> q) & 1U)) rest[nrest++] = q;

    auto split = [&](std::size_t index, std::size_t& t, std::size_t& r) {
        t = 0;
        r = 0;
        for (int q : qubits) t = (t << 1) | static_cast<std::size_t>(bit_of(index, q, n));
        for (int i = 0; i < nrest; ++i) r = (r << 1) | static_cast<std::size_t>(bit_of(index, rest[i], n));
    };

    std::array<Complex, kMaxDim> rem{};
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        std::size_t t = 0, r = 0;
        split(i, t, r);
        rem[r] += std::conj(target[t]) * psi[i];
    }
    std::array<Complex, kMaxDim> res{};
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        std::size_t t = 0, r = 0;
        split(i, t, r);
        res[i] = target[t] * rem[r];
    }
    return {Ket::residual(std::span<const Complex>(res.data(), psi.dim())),
            Ket::residual(std::span<const Complex>(rem.data(), std::size_t{1} << nrest))};
}

FactorProjection project_factor(const Ket& psi, int qubit, const Ket& target) {
    const std::array<int, 1> q{qubit};
    return project_factor(psi, q, target);
}

Unitary pauli_x() { return Unitary::from_rows(2, {0.0, 1.0, 1.0, 0.0}); }

Unitary rotation(const Ket& from, const Ket& to, double complement_phase) {
    if (from.dim() != 2 || to.dim() != 2) {
        throw InvalidArgument("rotation acts on single-qubit kets");
    }
    const Ket from_c = complement(from);
    const Ket to_c = complement(to).scaled(std::polar(1.0, complement_phase));
    // U = |to><from| + |to_c><from_c|
    std::array<Complex, 4> m{};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            m[r * 2 + c] = to[r] * std::conj(from[c]) + to_c[r] * std::conj(from_c[c]);
    return Unitary::from_rows(2, m);
}

Unitary lift(const Unitary& single, int qubit, int num_qubits) {
    if (single.dim() != 2) throw InvalidArgument("lift expects a single-qubit unitary");
    if (num_qubits < 1 || num_qubits > 3) throw UnsupportedDimension("register must hold 1-3 qubits");
    if (qubit < 0 || qubit >= num_qubits) throw InvalidArgument("lift: qubit index out of range");
    const std::size_t d = std::size_t{1} << num_qubits;
    const std::size_t shift = static_cast<std::size_t>(num_qubits - 1 - qubit);
    std::array<Complex, kMaxDim * kMaxDim> m{};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const std::size_t others = ~(std::size_t{1} << shift);
            if ((r & others) != (c & others)) continue;
            m[r * d + c] = single((r >> shift) & 1U, (c >> shift) & 1U);
        }
    return Unitary::from_rows(d, std::span<const Complex>(m.data(), d * d));
}

Unitary controlled(int control, int target, const Unitary& when0, const Unitary& when1, int num_qubits) {
    if (control == target) throw InvalidArgument("controlled: control and target must differ");
    if (control < 0 || control >= num_qubits) throw InvalidArgument("controlled: control index out of range");
    const Unitary u0 = lift(when0, target, num_qubits);
    const Unitary u1 = lift(when1, target, num_qubits);
    const std::size_t d = u0.dim();
    const std::size_t cshift = static_cast<std::size_t>(num_qubits - 1 - control);
    std::array<Complex, kMaxDim * kMaxDim> m{};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const bool on = (c >> cshift) & 1U;
            m[r * d + c] = on ? u1(r, c) : u0(r, c);
        }
    return Unitary::from_rows(d, std::span<const Complex>(m.data(), d * d));
}

Unitary cnot(int control, int target, int num_qubits) {
    return controlled(control, target, Unitary::identity(2), pauli_x(), num_qubits);
}

}  // namespace tempo
