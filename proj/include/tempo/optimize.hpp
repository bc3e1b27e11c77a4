#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tempo {

struct ScalarOptimum {
    double x;
    double value;
};

/// Golden-section search for a maximum of `f` on [lo, hi]. Assumes `f` is
/// unimodal on the bracket; stops once the bracket is narrower than `xtol`.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double xtol = 1e-10);

struct VectorOptimum {
    std::vector<double> x;
    double value;
    int sweeps;
};

/// Coordinate-wise maximization of a function that is 2*pi periodic in
/// every coordinate. Each coordinate step scans a coarse grid over one full
/// period, then golden-section refines around the best grid point; a step
/// is kept only if it improves the value. Stops when a full sweep improves
/// by less than `tol`, or after `max_sweeps`.
VectorOptimum periodic_coordinate_ascent(const std::function<double(std::span<const double>)>& f,
                                         std::vector<double> start, double tol, int max_sweeps = 10000);

}  // namespace tempo
