#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "tempo/chsh.hpp"

using namespace tempo;

namespace {

const double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

std::array<double, 8> random_quad(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    std::array<double, 8> q{};
    for (auto& v : q) v = u(rng);
    return q;
}

std::array<oracle::C, 4> to_raw(const TwoQubitKet& k) {
    return {k.ket()[0], k.ket()[1], k.ket()[2], k.ket()[3]};
}

}  // namespace

TEST_CASE("spatial correlator: frozen oracle values") {
    const auto bell = oracle::phi_plus();
    const auto zz = std::array<oracle::C, 4>{1, 0, 0, 0};
    // Oracle values frozen here: E = cos 2(ta - tb) on Phi+ with zero phases,
    // E = cos 2ta cos 2tb on |z+z+>.
    REQUIRE(oracle::spatial_correlator(bell, 0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(oracle::spatial_correlator(bell, 0, 0, kPi / 8, 0) == doctest::Approx(kSqrt2 / 2).epsilon(1e-14));
    REQUIRE(std::abs(oracle::spatial_correlator(zz, 0, 0, kPi / 4, 0)) < 1e-15);

    CHECK(std::abs(correlator_spatial(bell_phi_plus(), {0, 0}, {0, 0}) - 1.0) < 1e-12);
    CHECK(std::abs(correlator_spatial(bell_phi_plus(), {0, 0}, {kPi / 8, 0}) - kSqrt2 / 2) < 1e-12);
    CHECK(std::abs(correlator_spatial(product_zz(), {0, 0}, {kPi / 4, 0})) < 1e-12);
}

TEST_CASE("spatial S") {
    CHECK(std::abs(s_spatial(bell_phi_plus(), tsirelson_quad()) - 2 * kSqrt2) < 1e-12);

    // |z+z+> on the same quad: cos0 (cos pi/4 - cos 3pi/4) + cos(pi/2)(...) = sqrt2.
    const double zz = s_spatial(product_zz(), tsirelson_quad());
    CHECK(std::abs(zz - kSqrt2) < 1e-12);
    CHECK(within_classical_bound(zz));
    CHECK_FALSE(within_classical_bound(s_spatial(bell_phi_plus(), tsirelson_quad())));

    // a2 == a4 collapses S to 2 E(a3, a2)
    std::mt19937_64 rng(2);
    for (int n = 0; n < 100; ++n) {
        auto f = random_quad(rng);
        f[6] = f[2];
        f[7] = f[3];
        const AngleQuad q = AngleQuad::from_flat(f);
        CHECK(std::abs(s_spatial(bell_phi_plus(), q) - 2 * correlator_spatial(bell_phi_plus(), q.a3, q.a2)) < 1e-12);
    }
}

TEST_CASE("spatial correlator agrees with the Bloch-vector oracle for random states") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int n = 0; n < 1000; ++n) {
        std::array<Complex, 4> amps{};
        for (auto& a : amps) a = {g(rng), g(rng)};
        const TwoQubitKet psi(Ket::residual(amps).renormalized());
        const auto q = random_quad(rng);
        const double want = oracle::spatial_correlator(to_raw(psi), q[0], q[1], q[2], q[3]);
        REQUIRE(std::abs(correlator_spatial(psi, {q[0], q[1]}, {q[2], q[3]}) - want) < 1e-12);
    }
}

TEST_CASE("temporal correlator examples") {
    const Scenario init = EvolvedInitial(z_plus());
    CHECK(std::abs(correlator_temporal(init, {0, 0}, {0, 0}) - 1.0) < 1e-12);

    const Scenario zz = product_history(z_plus(), z_plus());
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (int n = 0; n < 200; ++n) {
        const double t1 = u(rng), t2 = u(rng);
        CHECK(std::abs(correlator_temporal(zz, {t1, 0}, {t2, 0}) - std::cos(2 * t1) * std::cos(2 * t2)) < 1e-12);
    }

    CHECK(std::abs(correlator_temporal(entangled_zz_history(), {0, 0}, {kPi / 8, 0}) - kSqrt2 / 2) < 1e-12);
}

TEST_CASE("temporal S examples") {
    const AngleQuad q = tsirelson_quad();
    CHECK(std::abs(s_temporal(EvolvedInitial(z_plus()), q) - 2 * kSqrt2) < 1e-12);
    CHECK(std::abs(s_temporal(entangled_zz_history(), q) - 2 * kSqrt2) < 1e-12);

    const Scenario zz = product_history(z_plus(), z_plus());
    std::mt19937_64 rng(8);
    for (int n = 0; n < 500; ++n) {
        const auto f = random_quad(rng);
        CHECK(std::abs(s_temporal(zz, AngleQuad::from_flat(f)) - oracle::zz_product_s(f[0], f[2], f[4], f[6])) <
              1e-12);
    }
}

TEST_CASE("evolved temporal S matches the sequential-projection oracle with random bridging") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (int n = 0; n < 300; ++n) {
        const oracle::Mat2 t = oracle::random_unitary(rng);
        const double pt = u(rng), pp = u(rng);
        const Scenario s = EvolvedInitial(chi({pt, pp}), Unitary::from_rows(2, {t[0][0], t[0][1], t[1][0], t[1][1]}));
        const auto q = random_quad(rng);
        const double want = oracle::chsh(q, [&](double t1, double p1, double t2, double p2) {
            double e = 0;
            for (int k = 0; k < 4; ++k) {
                const bool pa = k & 1, pb = k & 2;
                const auto c1 = pa ? oracle::chi_perp(t1, p1) : oracle::chi(t1, p1);
                const auto c2 = pb ? oracle::chi_perp(t2, p2) : oracle::chi(t2, p2);
                e += (pa == pb ? 1 : -1) * std::norm(oracle::evolved_amplitude(oracle::chi(pt, pp), t, c1, c2));
            }
            return e;
        });
        REQUIRE(std::abs(s_temporal(s, AngleQuad::from_flat(q)) - want) < 1e-12);
    }
}

TEST_CASE("properties: ranges, bounds and equalities over random inputs") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    const Scenario ent = entangled_zz_history();
    for (int n = 0; n < 10000; ++n) {
        const auto f = random_quad(rng);
        const AngleQuad q = AngleQuad::from_flat(f);
        const Ket k1 = chi({u(rng), u(rng)}), k2 = chi({u(rng), u(rng)});
        const Scenario init = EvolvedInitial(k1);
        REQUIRE(std::abs(correlator_temporal(init, q.a1, q.a2)) <= 1.0 + 1e-12);
        REQUIRE(std::abs(correlator_temporal(ent, q.a1, q.a2)) <= 1.0 + 1e-12);
        REQUIRE(std::abs(s_temporal(init, q)) <= kTsirelsonBound + kBoundTolerance);
        REQUIRE(std::abs(s_temporal(ent, q)) <= kTsirelsonBound + kBoundTolerance);
        if (std::abs(inner(k2, k1)) > 1e-6) {
            const Scenario prod = product_history(k1, k2);
            REQUIRE(std::abs(correlator_temporal(prod, q.a1, q.a2)) <= 1.0 + 1e-12);
            REQUIRE(within_classical_bound(s_temporal(prod, q)));
        }
        if (n < 1000) {
            REQUIRE(std::abs(s_temporal(ent, q) - s_spatial(bell_phi_plus(), q)) < 1e-10);
        }
    }
}

TEST_CASE("property: z-basis histories ignore the phases") {
    std::mt19937_64 rng(14);
    const Scenario zz = product_history(z_plus(), z_plus());
    for (int n = 0; n < 1000; ++n) {
        auto f = random_quad(rng);
        const double with = s_temporal(zz, AngleQuad::from_flat(f));
        for (int k = 1; k < 8; k += 2) f[k] = 0.0;
        REQUIRE(std::abs(with - s_temporal(zz, AngleQuad::from_flat(f))) < 1e-12);
    }
}

TEST_CASE("maximize_violation finds the known optima") {
    const auto init = maximize_violation(EvolvedInitial(z_plus()), 32, 1e-12, 0);
    CHECK(std::abs(init.value - 2 * kSqrt2) < 1e-6);
    CHECK(init.value <= kTsirelsonBound + kBoundTolerance);
    CHECK(init.restart_values.size() == 32);
    CHECK(std::abs(std::abs(s_temporal(EvolvedInitial(z_plus()), init.best)) - init.value) < 1e-12);

    const auto zz = maximize_violation(product_history(z_plus(), z_plus()), 32, 1e-12, 0);
    CHECK(std::abs(zz.value - 2.0) < 1e-6);

    const auto ent = maximize_violation(entangled_zz_history(), 32, 1e-12, 0);
    CHECK(std::abs(ent.value - 2 * kSqrt2) < 1e-6);
}

TEST_CASE("maximize_violation is deterministic and worker-count independent") {
    const Scenario ent = entangled_zz_history();
    const auto a = maximize_violation(ent, 6, 1e-10, 99, 1);
    const auto b = maximize_violation(ent, 6, 1e-10, 99, 4);
    CHECK(a.value == b.value);
    CHECK(a.best == b.best);
    CHECK(a.restart_values == b.restart_values);
    CHECK_THROWS(maximize_violation(ent, 0, 1e-9));
    CHECK_THROWS(maximize_violation(ent, 1, 0.0));
}
