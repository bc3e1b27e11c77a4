#include "tempo/history.hpp"

#include <cmath>
#include <numbers>

#include "tempo/errors.hpp"

namespace tempo {
namespace {

void require_qubit_state(const Ket& k, const char* what) {
    if (k.dim() != 2 || !k.is_normalized()) {
        throw InvalidArgument(std::string(what) + " must be a normalized single-qubit ket");
    }
}

constexpr double kNullOverlap = 1e-9;

}  // namespace

HistoryState::HistoryState(std::vector<HistoryTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw InvalidArgument("history state needs at least one term");
    }
    bool any_weight = false;
    for (const auto& t : terms_) {
        require_qubit_state(t.ket_t1, "history ket at t1");
        require_qubit_state(t.ket_t2, "history ket at t2");
        if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag())) {
            throw InvalidArgument("history weight must be finite");
        }
        any_weight = any_weight || t.weight != Complex{0.0};
    }
    if (!any_weight) {
        throw InvalidArgument("history state has all-zero weights");
    }
}

EvolvedInitial::EvolvedInitial(Ket psi, Unitary bridge) : psi_t1(psi), bridging(bridge) {
    require_qubit_state(psi_t1, "initial state");
    if (bridging.dim() != 2) {
        throw InvalidArgument("bridging operator must act on a single qubit");
    }
}

HistoryState product_history(const Ket& psi_t1, const Ket& psi_t2) {
    require_qubit_state(psi_t1, "psi_t1");
    require_qubit_state(psi_t2, "psi_t2");
    const double overlap = std::abs(inner(psi_t2, psi_t1));
    if (overlap <= kNullOverlap) {
        throw NullHistory("product history of orthogonal states has zero norm");
    }
    return HistoryState({{1.0 / overlap, psi_t1, psi_t2}});
}

HistoryState entangled_zz_history() {
    const double w = kInvSqrt2;
    return HistoryState({{w, z_plus(), z_plus()}, {w, z_minus(), z_minus()}});
}

Complex proj_amplitude(const Scenario& s, const Ket& c1, const Ket& c2) {
    struct Visitor {
        const Ket& c1;
        const Ket& c2;
        Complex operator()(const EvolvedInitial& e) const {
            return inner(c2, apply(e.bridging, c1)) * inner(c1, e.psi_t1);
        }
        Complex operator()(const HistoryState& h) const {
            Complex sum = 0.0;
            for (const auto& t : h.terms()) {
                sum += t.weight * inner(c1, t.ket_t1) * inner(t.ket_t2, t.ket_t1) * inner(c2, t.ket_t2);
            }
            return sum;
        }
    };
    return std::visit(Visitor{c1, c2}, s);
}

Complex proj_amplitude(const Scenario& s, BlochAngles at_t1, BlochAngles at_t2, bool perp_t1, bool perp_t2) {
    return proj_amplitude(s, measurement_ket(at_t1, perp_t1), measurement_ket(at_t2, perp_t2));
}

}  // namespace tempo
