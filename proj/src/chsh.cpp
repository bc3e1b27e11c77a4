#include "tempo/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tempo/errors.hpp"
#include "tempo/optimize.hpp"
#include "tempo/parallel.hpp"

namespace tempo {
namespace {

double sign_of(bool perp_a, bool perp_b) { return perp_a == perp_b ? 1.0 : -1.0; }

template <typename Correlator>
double chsh_combination(const AngleQuad& q, Correlator&& e) {
    return e(q.a1, q.a2) - e(q.a1, q.a4) + e(q.a3, q.a2) + e(q.a3, q.a4);
}

}  // namespace

std::array<double, 8> AngleQuad::flatten() const {
    return {a1.theta, a1.phi, a2.theta, a2.phi, a3.theta, a3.phi, a4.theta, a4.phi};
}

AngleQuad AngleQuad::from_flat(std::span<const double, 8> v) {
    return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

AngleQuad tsirelson_quad() {
    const double pi = std::numbers::pi;
    return {{0.0, 0.0}, {pi / 8, 0.0}, {pi / 4, 0.0}, {3 * pi / 8, 0.0}};
}

TwoQubitKet::TwoQubitKet(Ket k) : ket_(k) {
    if (ket_.dim() != 4 || !ket_.is_normalized()) {
        throw InvalidArgument("two-qubit state must be a normalized 4-dimensional ket");
    }
}

TwoQubitKet bell_phi_plus() {
    const double h = kInvSqrt2;
    return TwoQubitKet(Ket::normalized({h, 0.0, 0.0, h}));
}

TwoQubitKet product_zz() { return TwoQubitKet(tensor(z_plus(), z_plus())); }

double correlator_spatial(const TwoQubitKet& psi, BlochAngles a, BlochAngles b) {
    double e = 0.0;
    for (bool pa : {false, true})
        for (bool pb : {false, true}) {
            const Ket bra = tensor(measurement_ket(a, pa), measurement_ket(b, pb));
            e += sign_of(pa, pb) * std::norm(inner(bra, psi.ket()));
        }
    return e;
}

double s_spatial(const TwoQubitKet& psi, const AngleQuad& q) {
    return chsh_combination(q, [&](BlochAngles a, BlochAngles b) { return correlator_spatial(psi, a, b); });
}

double correlator_temporal(const Scenario& s, BlochAngles a, BlochAngles b) {
    double e = 0.0;
    for (bool pa : {false, true})
        for (bool pb : {false, true}) e += sign_of(pa, pb) * std::norm(proj_amplitude(s, a, b, pa, pb));
    return e;
}

double s_temporal(const Scenario& s, const AngleQuad& q) {
    return chsh_combination(q, [&](BlochAngles a, BlochAngles b) { return correlator_temporal(s, a, b); });
}

bool within_classical_bound(double value) { return std::abs(value) <= kClassicalBound + kBoundTolerance; }

ViolationSearch maximize_violation(const Scenario& s, int restarts, double tol, std::uint64_t seed,
                                   unsigned workers) {
    if (restarts < 1) throw InvalidArgument("maximize_violation: restarts must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("maximize_violation: tol must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(restarts));
    for (auto& st : starts) {
        st.resize(8);
        for (auto& v : st) v = angle(rng);
    }

    auto objective = [&s](std::span<const double> x) {
        return std::abs(s_temporal(s, AngleQuad::from_flat(std::span<const double, 8>(x.data(), 8))));
    };

    std::vector<VectorOptimum> results(starts.size());
    parallel_for(starts.size(), workers, [&](std::size_t i) {
        results[i] = periodic_coordinate_ascent(objective, starts[i], tol);
    });

    ViolationSearch out{{}, -1.0, {}};
    std::array<double, 8> best_flat{};
    for (const auto& r : results) {
        out.restart_values.push_back(r.value);
        std::array<double, 8> flat{};
        std::copy_n(r.x.begin(), 8, flat.begin());
        if (r.value > out.value || (r.value == out.value && flat < best_flat)) {
            out.value = r.value;
            best_flat = flat;
        }
    }
    out.best = AngleQuad::from_flat(best_flat);
    return out;
}

}  // namespace tempo
