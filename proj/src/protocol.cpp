#include "tempo/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tempo/errors.hpp"

namespace tempo {
namespace {

constexpr int kRegister = 3;

std::string ket_text(const Ket& k) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (std::size_t i = 0; i < k.dim(); ++i) {
        if (i) os << ", ";
        const Complex c = k[i] + Complex(0.0, 0.0);
        os << c.real();
        if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
    }
    os << ')';
    return os.str();
}

int register_size(const Ket& k) { return k.qubits(); }

}  // namespace

std::string describe(const Gate& g) {
    struct Visitor {
        std::string operator()(const CnotGate& c) const {
            return "CNOT(" + std::to_string(c.control) + "->" + std::to_string(c.target) + ")";
        }
        std::string operator()(const ControlledRotateGate& c) const {
            return "ControlledRotate(" + std::to_string(c.control) + "->" + std::to_string(c.target) + ": " +
                   ket_text(c.from0) + "->" + ket_text(c.to0) + " | " + ket_text(c.from1) + "->" + ket_text(c.to1) +
                   ")";
        }
        std::string operator()(const SingleRotateGate& r) const {
            return "Rotate(" + std::to_string(r.target) + ": " + ket_text(r.from) + "->" + ket_text(r.to) + ")";
        }
        std::string operator()(const ProjectFactorGate& p) const {
            return "Project(" + std::to_string(p.target) + " onto " + ket_text(p.onto) + ")";
        }
        std::string operator()(const ProjectPairGate& p) const {
            return "ProjectPair(" + std::to_string(p.targets[0]) + "," + std::to_string(p.targets[1]) + " onto " +
                   ket_text(p.onto) + ")";
        }
    };
    return std::visit(Visitor{}, g);
}

std::optional<Unitary> gate_unitary(const Gate& g, int num_qubits) {
    struct Visitor {
        int n;
        std::optional<Unitary> operator()(const CnotGate& c) const { return cnot(c.control, c.target, n); }
        std::optional<Unitary> operator()(const ControlledRotateGate& c) const {
            return controlled(c.control, c.target, rotation(c.from0, c.to0, c.phase0), rotation(c.from1, c.to1, c.phase1),
                              n);
        }
        std::optional<Unitary> operator()(const SingleRotateGate& r) const {
            return lift(rotation(r.from, r.to, r.phase), r.target, n);
        }
        std::optional<Unitary> operator()(const ProjectFactorGate&) const { return std::nullopt; }
        std::optional<Unitary> operator()(const ProjectPairGate&) const { return std::nullopt; }
    };
    return std::visit(Visitor{num_qubits}, g);
}

CircuitRun run_circuit(const Ket& initial, std::span<const Gate> gates) {
    if (!initial.is_normalized()) {
        throw InvalidArgument("run_circuit: initial state must be normalized");
    }
    const int n = register_size(initial);
    Ket state = initial;
    double joint = 1.0;
    std::vector<StepRecord> log;
    log.reserve(gates.size());
    for (const Gate& g : gates) {
        double p = 1.0;
        if (auto u = gate_unitary(g, n)) {
            state = apply(*u, state);
        } else {
            const double before = state.norm_squared();
            if (const auto* pf = std::get_if<ProjectFactorGate>(&g)) {
                // On a one-qubit register the factor is the whole register.
                state = n == 1 ? project(state, pf->onto).residual : project_factor(state, pf->target, pf->onto).residual;
            } else {
                const auto& pp = std::get<ProjectPairGate>(g);
                state = project_factor(state, pp.targets, pp.onto).residual;
            }
            p = before > 0.0 ? state.norm_squared() / before : 0.0;
        }
        joint *= p;
        log.push_back({g, p});
    }
    return {state, joint, std::move(log)};
}

double RunRecord::postselection_probability() const {
    double p = 1.0;
    for (const auto& step : step_log) {
        p *= step.outcome_probability;
        if (std::holds_alternative<ProjectPairGate>(step.gate)) break;
    }
    return p;
}

std::string to_string(BellLabel label) {
    switch (label) {
        case BellLabel::PhiPlus: return "phi+";
        case BellLabel::PhiMinus: return "phi-";
        case BellLabel::PsiPlus: return "psi+";
        case BellLabel::PsiMinus: return "psi-";
    }
    throw InvalidArgument("unknown Bell label");
}

Ket bell_state(BellLabel label) {
    const double h = kInvSqrt2;
    switch (label) {
        case BellLabel::PhiPlus: return Ket::normalized({h, 0.0, 0.0, h});
        case BellLabel::PhiMinus: return Ket::normalized({h, 0.0, 0.0, -h});
        case BellLabel::PsiPlus: return Ket::normalized({0.0, h, h, 0.0});
        case BellLabel::PsiMinus: return Ket::normalized({0.0, h, -h, 0.0});
    }
    throw InvalidArgument("unknown Bell label");
}

Ket prepare_first_record() {
    const Ket start = tensor({x_plus(), Ket::basis(2, 0), Ket::basis(2, 0)});
    return apply(cnot(kSystem, kAux1, kRegister), start);
}

Ket prepare_entangled_history() { return apply(cnot(kSystem, kAux2, kRegister), prepare_first_record()); }

std::vector<BellOutcome> erase_in_bell_basis(const Ket& psi) {
    if (psi.dim() != 8 || !psi.is_normalized()) {
        throw InvalidArgument("erase_in_bell_basis needs a normalized 3-qubit state");
    }
    const std::array<int, 2> aux{kAux1, kAux2};
    std::vector<BellOutcome> out;
    for (BellLabel label : kBellOrder) {
        const FactorProjection p = project_factor(psi, aux, bell_state(label));
        const double prob = p.probability();
        out.push_back({label, prob, prob > 0.0 ? p.remainder.renormalized() : Ket::zero(2)});
    }
    return out;
}

RunRecord run_undo_protocol(BlochAngles a, BlochAngles b, bool perp_t1, bool perp_t2) {
    const Ket c1 = measurement_ket(a, perp_t1);
    const Ket c2 = measurement_ket(b, perp_t2);
    const std::array<Gate, 3> gates{
        ProjectFactorGate{kSystem, c1},
        SingleRotateGate{kSystem, c1, z_plus()},
        ProjectFactorGate{kSystem, c2},
    };
    CircuitRun run = run_circuit(z_plus(), gates);
    const Complex raw = inner(c2, run.state);
    const Ket final_state = run.joint_probability > 0.0 ? run.state.renormalized() : Ket::zero(2);
    return {final_state, run.joint_probability, raw, raw, std::move(run.step_log)};
}

RunRecord run_postselected_protocol(BlochAngles a, BlochAngles b, bool perp_t1, bool perp_t2,
                                    const PostselectionOptions& options) {
    const Ket c1 = measurement_ket(a, perp_t1);
    const Ket c2 = measurement_ket(b, perp_t2);
    const Ket bell = bell_state(options.postselect);
    // phase1 = pi makes the aux1 = 1 branch |z-><c1| + |z+><c1_perp|.
    const std::array<Gate, 6> gates{
        CnotGate{kSystem, kAux1},
        ProjectFactorGate{kSystem, c1},
        ControlledRotateGate{kAux1, kSystem, c1, z_plus(), c1, z_minus(), options.completion_phase,
                             std::numbers::pi + options.completion_phase},
        CnotGate{kSystem, kAux2},
        ProjectPairGate{{kAux1, kAux2}, bell},
        ProjectFactorGate{kSystem, c2},
    };
    const Ket start = tensor({x_plus(), Ket::basis(2, 0), Ket::basis(2, 0)});
    CircuitRun run = run_circuit(start, gates);
    const Complex raw = inner(tensor(c2, bell), run.state);
    const Ket final_state = run.joint_probability > 0.0 ? run.state.renormalized() : Ket::zero(8);
    return {final_state, run.joint_probability, raw, kPostselectionRenormalization * raw, std::move(run.step_log)};
}

double temporal_correlator_via_circuit(BlochAngles a, BlochAngles b) {
    double e = 0.0;
    for (bool pa : {false, true})
        for (bool pb : {false, true}) {
            const RunRecord r = run_postselected_protocol(a, b, pa, pb);
            e += (pa == pb ? 1.0 : -1.0) * std::norm(r.renormalized_amplitude);
        }
    return e;
}

}  // namespace tempo
