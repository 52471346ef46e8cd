#pragma once

#include "scars/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace scars {

/// Regular (theta, phi) chart grid. Theta spans [0, pi] including both poles,
/// phi spans [0, 2 pi) with periodic wrap.
struct PhaseSpaceGrid {
    int n_theta = 101;
    int n_phi = 201;

    PhaseSpaceGrid() = default;
    PhaseSpaceGrid(int n_theta, int n_phi);

    double theta(int i) const;
    double phi(int k) const;
    double theta_step() const;
    double phi_step() const;
    std::size_t size() const { return static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi); }
};

/// Scalar field Q(theta, phi) on a manifold chart, stored theta-major.
struct ProjectionMap {
    PhaseSpaceGrid grid;
    Manifold manifold = Manifold::IS;
    std::vector<double> values;

    ProjectionMap() = default;
    ProjectionMap(PhaseSpaceGrid grid, Manifold manifold);

    double& at(int i_theta, int i_phi) { return values[index(i_theta, i_phi)]; }
    double at(int i_theta, int i_phi) const { return values[index(i_theta, i_phi)]; }
    std::size_t index(int i_theta, int i_phi) const {
        return static_cast<std::size_t>(i_theta) * static_cast<std::size_t>(grid.n_phi) +
               static_cast<std::size_t>(i_phi);
    }

    double max() const;
    /// Grid indices (i_theta, i_phi) of the first maximum.
    std::pair<int, int> argmax() const;
    /// Bilinear interpolation with periodic wrap in phi; theta is clamped to [0, pi].
    double interpolate(double theta, double phi) const;

    void write_csv(std::ostream& out) const;
    void write_csv(const std::string& path) const;
};

} // namespace scars
