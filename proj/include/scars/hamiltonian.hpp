#pragma once

#include "scars/model.hpp"
#include "scars/sector.hpp"

#include <Eigen/Sparse>

#include <complex>

namespace scars {

using cplx = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;

/// Hermitian operator on a symmetry sector, stored sparse.
class SectorOperator {
  public:
    SectorOperator(int n_sites, SparseMatrixC matrix);

    int n_sites() const { return n_sites_; }
    std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
    const SparseMatrixC& matrix() const { return matrix_; }
    /// True when every matrix element has a vanishing imaginary part.
    bool is_real() const { return is_real_; }

    Eigen::MatrixXcd dense() const;
    /// Throws unless is_real().
    Eigen::MatrixXd dense_real() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return matrix_ * x; }
    /// max |H - H^dagger|
    double hermiticity_defect() const;
    /// Max absolute row sum; bounds the spectral radius.
    double norm_bound() const;

  private:
    int n_sites_;
    SparseMatrixC matrix_;
    bool is_real_ = true;
};

/// Spin-1/2 chain Hamiltonian (S = sigma/2) restricted to the sector:
/// H = 1/2 sum_j [ mu . sigma_j + sigma_j J sigma_{j+1} ].
/// Requires spin 1/2 and a symmetric coupling matrix (mirror invariance).
SectorOperator build_hamiltonian(const SpinChainModel& model, const SymmetrySector& sector);

} // namespace scars
