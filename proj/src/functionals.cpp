#include "tempo/functionals.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tempo/errors.hpp"
#include "tempo/parallel.hpp"

namespace tempo {

std::string to_string(Family f) {
    switch (f) {
        case Family::EvolvedInitial: return "evolved-initial";
        case Family::ProductHistory: return "product-history";
        case Family::EntangledZz: return "entangled-zz";
    }
    throw InvalidArgument("unknown family");
}

Scenario evolved_initial_scenario(double theta, double phi) { return EvolvedInitial(chi({theta, phi})); }

Scenario product_history_scenario(double theta, double phi, double theta_prime, double phi_prime) {
    return product_history(chi({theta, phi}), chi({theta_prime, phi_prime}));
}

QuadratureGrid::QuadratureGrid(int points_per_dim) : n_(points_per_dim) {
    if (n_ < 4) throw InvalidArgument("quadrature grid needs at least 4 points per dimension");
}

double QuadratureGrid::node(int k) const { return 2.0 * std::numbers::pi * k / n_; }

std::size_t QuadratureGrid::evaluations() const {
    const auto n = static_cast<std::size_t>(n_);
    return n * n * n * n;
}

namespace {

// Per-node factors of the Proj amplitude so a grid point costs a few
// complex multiplies. Same algebra as proj_amplitude.
class AmplitudeTable {
public:
    AmplitudeTable(const Scenario& s, const std::vector<Ket>& nodes) {
        if (const auto* e = std::get_if<EvolvedInitial>(&s)) {
            // <c2|T c1> <c1|psi>
            evolved_ = true;
            for (const Ket& c : nodes) {
                const Ket tc = apply(e->bridging, c);
                bra_.push_back({std::conj(c[0]), std::conj(c[1])});
                left_.push_back({tc[0] * inner(c, e->psi_t1), tc[1] * inner(c, e->psi_t1)});
            }
        } else {
            // sum_i w_i <b_i|a_i> <c1|a_i> <c2|b_i>, at most two terms packed per slot
            const auto& terms = std::get<HistoryState>(s).terms();
            for (std::size_t first = 0; first < terms.size(); first += 2) {
                blocks_.push_back(pack(terms, first, nodes));
            }
        }
    }

    Complex amplitude(std::size_t t1, std::size_t t2) const {
        if (evolved_) {
            return bra_[t2][0] * left_[t1][0] + bra_[t2][1] * left_[t1][1];
        }
        Complex sum = 0.0;
        for (const auto& b : blocks_) sum += b.left[t1][0] * b.right[t2][0] + b.left[t1][1] * b.right[t2][1];
        return sum;
    }

private:
    using Pair = std::array<Complex, 2>;
    struct Block {
        std::vector<Pair> left;   // weighted <c1|a_i>
        std::vector<Pair> right;  // <c2|b_i>
    };

    static Block pack(const std::vector<HistoryTerm>& terms, std::size_t first, const std::vector<Ket>& nodes) {
        Block b;
        for (const Ket& c : nodes) {
            Pair l{}, r{};
            for (std::size_t k = 0; k < 2 && first + k < terms.size(); ++k) {
                const HistoryTerm& t = terms[first + k];
                l[k] = t.weight * inner(t.ket_t2, t.ket_t1) * inner(c, t.ket_t1);
                r[k] = inner(c, t.ket_t2);
            }
            b.left.push_back(l);
            b.right.push_back(r);
        }
        return b;
    }

    bool evolved_ = false;
    std::vector<Pair> bra_, left_;
    std::vector<Block> blocks_;
};

}  // namespace

FunctionalValues grid_functionals(const Scenario& s, const QuadratureGrid& grid, unsigned workers) {
    const int n = grid.points_per_dim();
    const std::size_t n2 = static_cast<std::size_t>(n) * n;

    // chi at every (theta, phi) node; index theta_k * n + phi_j.
    std::vector<Ket> kets;
    kets.reserve(n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) kets.push_back(chi({grid.node(i), grid.node(j)}));
    const AmplitudeTable table(s, kets);

    std::vector<double> prob(n2 * n2);
    std::vector<double> dev(n2 * n2);
    parallel_for(n2, workers, [&](std::size_t t1) {
        for (std::size_t t2 = 0; t2 < n2; ++t2) {
            const double p = std::norm(table.amplitude(t1, t2));
            prob[t1 * n2 + t2] = p;
            dev[t1 * n2 + t2] = (p - kVCenter) * (p - kVCenter);
        }
    });
    const double count = static_cast<double>(prob.size());
    return {pairwise_sum(prob) / count, pairwise_sum(dev) / count};
}

double m_functional(const Scenario& s, const QuadratureGrid& grid, unsigned workers) {
    return grid_functionals(s, grid, workers).m;
}

double v_functional(const Scenario& s, const QuadratureGrid& grid, unsigned workers) {
    return grid_functionals(s, grid, workers).v;
}

MonteCarloEstimate monte_carlo_functionals(const Scenario& s, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw InvalidArgument("Monte Carlo mode needs at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    // Welford accumulators
    double m_mean = 0.0, m_m2 = 0.0, v_mean = 0.0, v_m2 = 0.0;
    for (std::uint64_t k = 1; k <= samples; ++k) {
        const double th1 = angle(rng), ph1 = angle(rng), th2 = angle(rng), ph2 = angle(rng);
        const double p = std::norm(proj_amplitude(s, chi({th1, ph1}), chi({th2, ph2})));
        const double d = (p - kVCenter) * (p - kVCenter);
        const double dk = static_cast<double>(k);
        const double dm = p - m_mean;
        m_mean += dm / dk;
        m_m2 += dm * (p - m_mean);
        const double dv = d - v_mean;
        v_mean += dv / dk;
        v_m2 += dv * (d - v_mean);
    }
    const double ns = static_cast<double>(samples);
    return {m_mean, std::sqrt(m_m2 / (ns - 1.0) / ns), v_mean, std::sqrt(v_m2 / (ns - 1.0) / ns), samples};
}

double analytic_v_oracle(Family family, double theta, std::optional<double> theta_prime) {
    switch (family) {
        case Family::EvolvedInitial: return (115.0 + 25.0 * std::cos(4.0 * theta)) / 2048.0;
        case Family::ProductHistory: {
            if (!theta_prime) throw InvalidArgument("product-history oracle needs theta_prime");
            const double a = std::cos(4.0 * theta);
            const double b = std::cos(4.0 * *theta_prime);
            return (57.0 + 11.0 * (a + b) + a * b) / 1024.0;
        }
        case Family::EntangledZz: return 3.0 / 128.0;
    }
    throw InvalidArgument("unknown family");
}

std::pair<double, double> v_bounds(Family family) {
    switch (family) {
        case Family::EvolvedInitial: return {45.0 / 1024.0, 35.0 / 512.0};
        case Family::ProductHistory: return {9.0 / 256.0, 5.0 / 64.0};
        default: throw InvalidArgument("V bounds exist only for evolved-initial and product-history");
    }
}

VClassification classify(double v, double tol) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("classify: V must be a finite non-negative value");
    if (!(tol >= 0.0)) throw InvalidArgument("classify: tolerance must be non-negative");
    const auto [lo, hi] = v_bounds(Family::ProductHistory);
    if (v < lo - tol) return NecessarilyEntangled{NecessarilyEntangled::Side::Below};
    if (v > hi + tol) return NecessarilyEntangled{NecessarilyEntangled::Side::Above};
    return NotFlagged{};
}

std::string to_string(const VClassification& c) {
    if (const auto* e = std::get_if<NecessarilyEntangled>(&c)) {
        return e->side == NecessarilyEntangled::Side::Below ? "necessarily entangled (below)"
                                                            : "necessarily entangled (above)";
    }
    return "not flagged";
}

}  // namespace tempo
