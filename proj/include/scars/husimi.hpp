#pragma once

#include "scars/eigensystem.hpp"
#include "scars/projection_map.hpp"
#include "scars/sector.hpp"

namespace scars {

/**
 * Overlaps of sector states with the product states of a TI or IS manifold.
 *
 * Manifold product states are invariant under the sector group, so their
 * amplitude is constant on every orbit and depends only on how many spins
 * point up on each sublattice (nu = +1 sites and nu = -1 sites). A sector
 * vector therefore collapses to a handful of "class weights"
 *
 *   W[uA, uB] = sum_{r in class} sqrt(|orbit r|) a_r,
 *
 * and <{s(theta, phi)}|psi> is a short polynomial in cos/sin(theta/2) and e^{-i phi}.
 */
class ManifoldOverlap {
  public:
    ManifoldOverlap(const SymmetrySector& sector, Manifold manifold);

    Manifold manifold() const { return manifold_; }
    int n_classes() const { return (n_a_ + 1) * (n_b_ + 1); }

    /// One column of class weights per column of sector amplitudes.
    Eigen::MatrixXcd class_weights(const Eigen::MatrixXcd& amplitudes) const;
    Eigen::MatrixXd class_weights(const Eigen::MatrixXd& amplitudes) const;

    /// <{s(theta, phi)}|psi> given the class weights of psi.
    cplx overlap(const Eigen::Ref<const Eigen::VectorXcd>& weights, double theta, double phi) const;

    /// sum_k |<{s}|w_k>|^2 over the columns of `weights`, on every grid point.
    ProjectionMap incoherent_map(const Eigen::MatrixXcd& weights, const PhaseSpaceGrid& grid) const;

  private:
    /// f_D(theta) = coefficient of e^{-i phi D} for each column.
    Eigen::MatrixXcd phase_coefficients(const Eigen::MatrixXcd& weights, double theta) const;

    Manifold manifold_;
    int n_sites_;
    int n_a_ = 0;
    int n_b_ = 0;
    std::vector<int> class_of_;  // per sector index
    std::vector<double> scale_;  // sqrt(|orbit|)
};

/// Q(theta, phi) = |<{s(theta, phi)}|psi>|^2 against the raw product state.
ProjectionMap husimi_projection(const SectorState& psi, const SymmetrySector& sector, Manifold manifold,
                                const PhaseSpaceGrid& grid);

/// Same quantity computed by expanding psi and every product state in the
/// full 2^N space. Slow; serves as the reference route.
ProjectionMap husimi_projection_full_space(const SectorState& psi, const SymmetrySector& sector, Manifold manifold,
                                           const PhaseSpaceGrid& grid);

struct DiagonalEnsembleOptions {
    /// Eigenvalues closer than this are merged into one block.
    double degeneracy_tolerance = 1e-10;
};

struct DiagonalEnsembleResult {
    ProjectionMap map;
    /// Number of blocks holding more than one eigenvalue.
    int degenerate_blocks = 0;
};

/// Infinite-time average of Q(psi(t)): sum over energy blocks b of |<{s}|P_b psi0>|^2.
DiagonalEnsembleResult diagonal_ensemble_projection(const SectorState& psi0, const EigenSystem& eigen,
                                                    const SymmetrySector& sector, Manifold manifold,
                                                    const PhaseSpaceGrid& grid,
                                                    const DiagonalEnsembleOptions& options = {});

} // namespace scars
