#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "tempo/history.hpp"

namespace tempo {

/// The three scenario families compared by the mean/variance functionals.
enum class Family { EvolvedInitial, ProductHistory, EntangledZz };

std::string to_string(Family f);

/// EvolvedInitial(chi(theta, phi)) with trivial evolution.
Scenario evolved_initial_scenario(double theta, double phi);
/// product_history(chi(theta, phi) at t1, chi(theta', phi') at t2).
Scenario product_history_scenario(double theta, double phi, double theta_prime, double phi_prime);

/// Uniform periodic grid 2*pi*k/N on each of (theta1, phi1, theta2, phi2),
/// equal weights. Integrates trigonometric polynomials of degree < N in
/// each angle exactly.
class QuadratureGrid {
public:
    static constexpr int kDefaultPoints = 16;

    /// Throws InvalidArgument for N < 4.
    explicit QuadratureGrid(int points_per_dim = kDefaultPoints);

    int points_per_dim() const { return n_; }
    double node(int k) const;
    std::size_t evaluations() const;

private:
    int n_;
};

inline constexpr double kVCenter = 0.25;

struct FunctionalValues {
    double m;  // mean of |Proj|^2
    double v;  // mean of (|Proj|^2 - 1/4)^2
};

/// Both functionals from one pass over the grid. The sum is a fixed-shape
/// pairwise reduction, so results do not depend on `workers`
/// (0 = default worker count).
FunctionalValues grid_functionals(const Scenario& s, const QuadratureGrid& grid, unsigned workers = 0);

double m_functional(const Scenario& s, const QuadratureGrid& grid = QuadratureGrid{}, unsigned workers = 0);
double v_functional(const Scenario& s, const QuadratureGrid& grid = QuadratureGrid{}, unsigned workers = 0);

struct MonteCarloEstimate {
    double m, m_stderr;
    double v, v_stderr;
    std::uint64_t samples;
};

/// Uniform sampling of [0, 2pi)^4 for cross-checking the grid values.
MonteCarloEstimate monte_carlo_functionals(const Scenario& s, std::uint64_t samples, std::uint64_t seed);

/// Closed-form V:
///   evolved-initial   (115 + 25 cos 4t) / 2048
///   product-history   (57 + 11 (cos 4t + cos 4t') + cos 4t cos 4t') / 1024
///   entangled-zz      3 / 128
/// Throws InvalidArgument if `theta_prime` is missing for product-history.
double analytic_v_oracle(Family family, double theta = 0.0, std::optional<double> theta_prime = std::nullopt);

/// Range of V over each non-entangled family. Throws InvalidArgument for
/// any other family.
std::pair<double, double> v_bounds(Family family);

struct NecessarilyEntangled {
    enum class Side { Below, Above };
    Side side;
    friend bool operator==(const NecessarilyEntangled&, const NecessarilyEntangled&) = default;
};

/// Inside both non-entangled ranges. Not a certificate of non-entanglement.
struct NotFlagged {
    friend bool operator==(const NotFlagged&, const NotFlagged&) = default;
};

using VClassification = std::variant<NecessarilyEntangled, NotFlagged>;

inline constexpr double kClassifyTolerance = 1e-9;

/// Below if v < 9/256 - tol, above if v > 5/64 + tol.
VClassification classify(double v, double tol = kClassifyTolerance);

std::string to_string(const VClassification& c);

}  // namespace tempo
