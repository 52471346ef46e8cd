#include "scars/projection_map.hpp"
#include "scars/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace scars {

PhaseSpaceGrid::PhaseSpaceGrid(int n_theta_, int n_phi_) : n_theta(n_theta_), n_phi(n_phi_) {
    if (n_theta < 2 || n_phi < 1) throw std::invalid_argument("grid needs n_theta >= 2 and n_phi >= 1");
}

double PhaseSpaceGrid::theta(int i) const { return std::numbers::pi * i / (n_theta - 1); }
double PhaseSpaceGrid::phi(int k) const { return 2.0 * std::numbers::pi * k / n_phi; }
double PhaseSpaceGrid::theta_step() const { return std::numbers::pi / (n_theta - 1); }
double PhaseSpaceGrid::phi_step() const { return 2.0 * std::numbers::pi / n_phi; }

ProjectionMap::ProjectionMap(PhaseSpaceGrid g, Manifold m) : grid(g), manifold(m), values(g.size(), 0.0) {}

double ProjectionMap::max() const {
    if (values.empty()) throw std::logic_error("empty projection map");
    return *std::max_element(values.begin(), values.end());
}

std::pair<int, int> ProjectionMap::argmax() const {
    if (values.empty()) throw std::logic_error("empty projection map");
    const auto idx = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    return {static_cast<int>(idx / static_cast<std::size_t>(grid.n_phi)),
            static_cast<int>(idx % static_cast<std::size_t>(grid.n_phi))};
}

double ProjectionMap::interpolate(double theta, double phi) const {
    const double t = std::clamp(theta, 0.0, std::numbers::pi) / grid.theta_step();
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, grid.n_theta - 2);
    const double ft = t - i0;

    const double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phi, two_pi);
    if (p < 0.0) p += two_pi;
    const double u = p / grid.phi_step();
    int k0 = static_cast<int>(std::floor(u));
    const double fp = u - k0;
    k0 %= grid.n_phi;
    const int k1 = (k0 + 1) % grid.n_phi;

    return (1.0 - ft) * ((1.0 - fp) * at(i0, k0) + fp * at(i0, k1)) +
           ft * ((1.0 - fp) * at(i0 + 1, k0) + fp * at(i0 + 1, k1));
}

void ProjectionMap::write_csv(std::ostream& out) const {
    out << "theta,phi,Q\n";
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int k = 0; k < grid.n_phi; ++k) {
            out << format_double(grid.theta(i)) << ',' << format_double(grid.phi(k)) << ','
                << format_double(at(i, k)) << '\n';
        }
    }
}

void ProjectionMap::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(out);
}

} // namespace scars
