#pragma once

#include "scars/eigensystem.hpp"
#include "scars/sector.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scars {

enum class Observable { SigmaX1, SigmaZ1 };

std::string to_string(Observable o);
Observable observable_from_string(const std::string& s);

/// Von Neumann entropy (natural log) of sites [0, cut) for a full-space
/// state with bit j encoding site j.
double entanglement_entropy(const Eigen::VectorXcd& full_state, int n_sites, int cut);

/// <psi| O |psi> for a single-site Pauli observable on the first site.
double site_expectation(const Eigen::VectorXcd& full_state, Observable observable);

struct EthPoint {
    std::size_t n = 0;
    double energy = 0.0;
    double expectation = 0.0;
    double entropy = 0.0;
};

/// Per-eigenstate observable and half-chain entropy. `cut` defaults to N/2;
/// `range` restricts to eigenstate indices [first, second).
std::vector<EthPoint> eth_scatter(const EigenSystem& eigen, const SymmetrySector& sector, Observable observable,
                                  std::optional<int> cut = std::nullopt,
                                  std::optional<std::pair<std::size_t, std::size_t>> range = std::nullopt);

/// Rows `n,E_n,sx_expectation,entropy`.
void write_spectrum_csv(const std::vector<EthPoint>& points, const std::string& path);

} // namespace scars
