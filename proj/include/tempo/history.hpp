#pragma once

#include <variant>
#include <vector>

#include "tempo/qstate.hpp"

namespace tempo {

/// One summand weight * [ket_t2] (.) [ket_t1] of a two-time history.
struct HistoryTerm {
    Complex weight;
    Ket ket_t1;
    Ket ket_t2;
};

/// Complex-weighted sum of two-time projector chains on a single qubit.
/// Weights are taken as given; no normalization is imposed on multi-term
/// states.
class HistoryState {
public:
    /// Throws InvalidArgument if `terms` is empty, all weights vanish, or a
    /// term's kets are not normalized qubit states.
    explicit HistoryState(std::vector<HistoryTerm> terms);

    const std::vector<HistoryTerm>& terms() const { return terms_; }

private:
    std::vector<HistoryTerm> terms_;
};

/// A single qubit prepared in `psi_t1` and carried to t2 by `bridging`.
struct EvolvedInitial {
    Ket psi_t1;
    Unitary bridging;

    /// Validates a normalized qubit state and a 2x2 bridging unitary.
    EvolvedInitial(Ket psi, Unitary bridge);
    explicit EvolvedInitial(Ket psi) : EvolvedInitial(psi, Unitary::identity(2)) {}
};

using Scenario = std::variant<EvolvedInitial, HistoryState>;

/// Normalized product history [psi_t2] (.) [psi_t1] with weight
/// 1/|<psi_t2|psi_t1>|. Throws NullHistory when the pair is (numerically)
/// orthogonal.
HistoryState product_history(const Ket& psi_t1, const Ket& psi_t2);

/// (1/sqrt2) ([z+] (.) [z+] + [z-] (.) [z-]).
HistoryState entangled_zz_history();

/// Amplitude for the scenario to pass projections onto c1 at t1 and c2 at
/// t2.
///
/// EvolvedInitial: <c2|T|c1><c1|psi(t1)>.
/// History: sum_i w_i <c1|a_i> <b_i|a_i> <c2|b_i> for terms w_i [b_i] (.) [a_i].
/// The middle factor is the trivial bridge between the two projectors of a
/// chain; it is 1 for every term whose t1 and t2 kets coincide.
Complex proj_amplitude(const Scenario& s, const Ket& c1, const Ket& c2);
Complex proj_amplitude(const Scenario& s, BlochAngles at_t1, BlochAngles at_t2, bool perp_t1 = false,
                       bool perp_t2 = false);

}  // namespace tempo
