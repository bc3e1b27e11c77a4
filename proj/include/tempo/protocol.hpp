#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tempo/qstate.hpp"

namespace tempo {

// Register positions used by the auxiliary-qubit circuits.
inline constexpr int kSystem = 0;
inline constexpr int kAux1 = 1;
inline constexpr int kAux2 = 2;

struct CnotGate {
    int control;
    int target;
};

/// Applies rotation(from0 -> to0) to `target` when `control` is 0 and
/// rotation(from1 -> to1) when it is 1. Only the action on from0/from1 is
/// physically prescribed; phase0/phase1 pick the completion on the
/// orthogonal complement (see `rotation`).
struct ControlledRotateGate {
    int control;
    int target;
    Ket from0, to0, from1, to1;
    double phase0 = 0.0;
    double phase1 = 0.0;
};

struct SingleRotateGate {
    int target;
    Ket from, to;
    double phase = 0.0;
};

struct ProjectFactorGate {
    int target;
    Ket onto;
};

struct ProjectPairGate {
    std::array<int, 2> targets;
    Ket onto;
};

using Gate = std::variant<CnotGate, ControlledRotateGate, SingleRotateGate, ProjectFactorGate, ProjectPairGate>;

std::string describe(const Gate& g);

/// Full register matrix of a unitary gate; nullopt for projections.
std::optional<Unitary> gate_unitary(const Gate& g, int num_qubits);

struct StepRecord {
    Gate gate;
    double outcome_probability;  // conditional on the preceding steps; 1 for unitaries
};

struct CircuitRun {
    Ket state;  // un-normalized final residual; squared norm = joint_probability
    double joint_probability;
    std::vector<StepRecord> step_log;
};

/// Applies `gates` in order to a normalized initial register state. A
/// projection whose input is already the zero vector logs probability 0.
CircuitRun run_circuit(const Ket& initial, std::span<const Gate> gates);

struct RunRecord {
    Ket final_state;  // normalized; the zero residual when joint_probability == 0
    double joint_probability;
    Complex raw_amplitude;           // overlap of the final residual with the post-selected outcome
    Complex renormalized_amplitude;  // raw_amplitude times the post-selection factor
    std::vector<StepRecord> step_log;

    /// Product of logged outcome probabilities up to and including the
    /// first pair projection (1 if there is none).
    double postselection_probability() const;
};

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellLabel, 4> kBellOrder{BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus,
                                                     BellLabel::PsiMinus};

std::string to_string(BellLabel label);
Ket bell_state(BellLabel label);

/// |x+>|00> followed by CNOT(system -> aux1).
Ket prepare_first_record();

/// |x+>|00> followed by CNOT(system -> aux1) and CNOT(system -> aux2):
/// (|z+>|00> + |z->|11>)/sqrt2.
Ket prepare_entangled_history();

struct BellOutcome {
    BellLabel label;
    double probability;
    Ket system_state;  // normalized conditional state; zero residual if probability is 0
};

/// Measures the auxiliary pair of a normalized 3-qubit state in the Bell
/// basis, in kBellOrder.
std::vector<BellOutcome> erase_in_bell_basis(const Ket& psi);

/// |z+> -> project c1 -> rotate c1 to |z+> -> project c2.
RunRecord run_undo_protocol(BlochAngles a, BlochAngles b, bool perp_t1 = false, bool perp_t2 = false);

struct PostselectionOptions {
    BellLabel postselect = BellLabel::PhiPlus;
    /// Extra phase on the controlled rotation's complement completion, in
    /// both branches. Physically irrelevant; exposed for testing.
    double completion_phase = 0.0;
};

inline constexpr double kPostselectionRenormalization = 1.4142135623730951;  // sqrt(2)

/// |x+>|00> -> CNOT(sys->aux1) -> project system onto c1 ->
/// controlled rotation (aux1 = 0: c1 -> z+, aux1 = 1: c1 -> z-) ->
/// CNOT(sys->aux2) -> project aux pair onto the chosen Bell state ->
/// project system onto c2. The renormalized amplitude is sqrt2 times the
/// raw amplitude, for every Bell outcome.
RunRecord run_postselected_protocol(BlochAngles a, BlochAngles b, bool perp_t1 = false, bool perp_t2 = false,
                                    const PostselectionOptions& options = {});

/// Signed sum of renormalized probabilities over the four chi/chi_perp
/// outcomes of run_postselected_protocol.
double temporal_correlator_via_circuit(BlochAngles a, BlochAngles b);

}  // namespace tempo
