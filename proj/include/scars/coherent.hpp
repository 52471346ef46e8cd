#pragma once

#include "scars/eigensystem.hpp"
#include "scars/model.hpp"
#include "scars/sector.hpp"

#include <array>

namespace scars {

/// Spin-1/2 coherent state cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
/// At the poles phi is set to 0.
std::array<cplx, 2> single_spin_coherent(const Vec3& direction);

/// Product state in the full 2^N computational basis (bit j = site j, 1 = down).
Eigen::VectorXcd product_state_full(const SpinConfiguration& config);

struct CoherentProjection {
    /// Projection onto the sector, renormalized.
    SectorState state;
    /// Squared norm of the projection before renormalization; equals 1 for
    /// symmetry-invariant configurations such as TI and IS states.
    double weight = 0.0;
};

CoherentProjection coherent_product_state(const SpinConfiguration& config, const SymmetrySector& sector);

/// Full-space amplitudes of a sector state: a_r / sqrt(|orbit|) on every orbit member.
Eigen::VectorXcd expand_to_full_space(const SectorState& psi, const SymmetrySector& sector);

/// Isometry V (2^N x dim) whose columns are the sector basis vectors.
SparseMatrixC sector_isometry(const SymmetrySector& sector);

/// Raw overlap <{s_i}|psi> with the unsymmetrized product state, via full-space expansion.
cplx product_state_overlap(const SpinConfiguration& config, const SectorState& psi, const SymmetrySector& sector);

} // namespace scars
