#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tempo/history.hpp"
#include "tempo/qstate.hpp"

namespace tempo {

inline constexpr double kClassicalBound = 2.0;
inline constexpr double kTsirelsonBound = 2.8284271247461903;  // 2*sqrt(2)
inline constexpr double kBoundTolerance = 1e-9;

/// The four measurement settings of a CHSH combination: a1, a3 on the first
/// party (or time), a2, a4 on the second.
struct AngleQuad {
    BlochAngles a1, a2, a3, a4;

    std::array<double, 8> flatten() const;
    static AngleQuad from_flat(std::span<const double, 8> v);

    friend bool operator==(const AngleQuad&, const AngleQuad&) = default;
};

/// Settings (0, pi/8, pi/4, 3pi/8) with all phases zero, which reach 2*sqrt(2)
/// on the Bell state.
AngleQuad tsirelson_quad();

/// Normalized two-qubit state, first factor the more significant qubit.
class TwoQubitKet {
public:
    explicit TwoQubitKet(Ket k);
    const Ket& ket() const { return ket_; }

private:
    Ket ket_;
};

TwoQubitKet bell_phi_plus();
TwoQubitKet product_zz();

double correlator_spatial(const TwoQubitKet& psi, BlochAngles a, BlochAngles b);
double s_spatial(const TwoQubitKet& psi, const AngleQuad& q);

/// Signed sum of the four squared Proj amplitudes, + for chi/chi and
/// perp/perp, - for the mixed outcomes.
double correlator_temporal(const Scenario& s, BlochAngles a, BlochAngles b);
double s_temporal(const Scenario& s, const AngleQuad& q);

/// |value| <= 2 within kBoundTolerance.
bool within_classical_bound(double value);

struct ViolationSearch {
    AngleQuad best;
    double value;                       // achieved |S~|
    std::vector<double> restart_values; // per-restart optimum, in restart order
};

/// Multi-start coordinate ascent on |s_temporal| over all eight angles.
/// Starting quads are drawn uniformly from [0, 2pi)^8 by a generator seeded
/// with `seed`. Restarts run concurrently on up to `workers` threads
/// (0 = default worker count); the result does not depend on the worker
/// count. Ties are broken toward the lexicographically smallest angle tuple.
ViolationSearch maximize_violation(const Scenario& s, int restarts, double tol, std::uint64_t seed = 0,
                                   unsigned workers = 0);

}  // namespace tempo
