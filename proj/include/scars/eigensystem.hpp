#pragma once

#include "scars/hamiltonian.hpp"

#include <Eigen/Dense>

#include <string>

namespace scars {

/// Amplitudes in the sector basis.
struct SectorState {
    int n_sites = 0;
    Eigen::VectorXcd amplitudes;

    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
};

/// Complete eigensystem with ascending energies. Eigenvectors are stored as
/// real columns when the operator is real, complex columns otherwise.
class EigenSystem {
  public:
    EigenSystem(int n_sites, Eigen::VectorXd energies, Eigen::MatrixXd states);
    EigenSystem(int n_sites, Eigen::VectorXd energies, Eigen::MatrixXcd states);

    int n_sites() const { return n_sites_; }
    std::size_t dimension() const { return static_cast<std::size_t>(energies_.size()); }
    bool is_real() const { return is_real_; }
    const Eigen::VectorXd& energies() const { return energies_; }
    const Eigen::MatrixXd& real_states() const { return real_states_; }
    const Eigen::MatrixXcd& complex_states() const { return complex_states_; }

    Eigen::VectorXcd state(std::size_t n) const;
    SectorState eigenstate(std::size_t n) const;
    /// c_n = <E_n | psi>
    Eigen::VectorXcd coefficients(const SectorState& psi) const;
    /// sum_n c_n |E_n>
    Eigen::VectorXcd synthesize(const Eigen::VectorXcd& coefficients) const;

    /// max |<E_m|E_n> - delta_mn|
    double orthonormality_defect() const;
    /// max_n || H|E_n> - E_n |E_n> ||
    double max_residual(const SectorOperator& h) const;

    void require_compatible(const SectorState& psi) const;

  private:
    int n_sites_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd real_states_;
    Eigen::MatrixXcd complex_states_;
    bool is_real_;
};

/// Dense diagonalization through LAPACK (dsyevd / zheevd). Operators on
/// chains longer than `max_dense_sites` are refused with BudgetError.
EigenSystem diagonalize(const SectorOperator& h, int max_dense_sites = 16);

/// sum_n exp(-i E_n t) <E_n|psi> |E_n>
SectorState evolve(const SectorState& psi, const EigenSystem& eigen, double t);

struct KrylovOptions {
    int max_dimension = 40;
    double tolerance = 1e-12;
};

/// Lanczos propagation of exp(-i H t) psi with adaptive sub-steps; needs only
/// sparse matrix-vector products, so it also serves sectors beyond the dense budget.
SectorState krylov_evolve(const SectorOperator& h, const SectorState& psi, double t, const KrylovOptions& options = {});

/// Binary cache: "SCARSEIG", u32 version, u32 flags (bit 0: complex), u64 N,
/// u64 dimension, energies, then the state matrix row-major; little-endian
/// 64-bit floats (complex entries as re, im pairs).
void save_eigensystem(const EigenSystem& eigen, const std::string& path);
EigenSystem load_eigensystem(const std::string& path);

} // namespace scars
