#include "scars/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace scars {

namespace {

struct PauliAction {
    std::uint32_t flip; // 0 or 1
    cplx coefficient;
};

// sigma^a |b>, a in {x, y, z}, b = 0 (up) or 1 (down)
PauliAction pauli(int a, std::uint32_t b) {
    switch (a) {
    case 0: return {1u, {1.0, 0.0}};
    case 1: return {1u, b == 0 ? cplx{0.0, 1.0} : cplx{0.0, -1.0}};
    default: return {0u, {b == 0 ? 1.0 : -1.0, 0.0}};
    }
}

} // namespace

SectorOperator::SectorOperator(int n_sites, SparseMatrixC matrix) : n_sites_(n_sites), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("sector operator must be square");
    matrix_.makeCompressed();
    double scale = 0.0;
    double imag = 0.0;
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
            imag = std::max(imag, std::abs(it.value().imag()));
        }
    }
    is_real_ = imag <= 1e-14 * std::max(scale, 1.0);
}

Eigen::MatrixXcd SectorOperator::dense() const { return Eigen::MatrixXcd(matrix_); }

Eigen::MatrixXd SectorOperator::dense_real() const {
    if (!is_real_) throw std::logic_error("operator has complex matrix elements");
    const auto n = matrix_.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) out(it.row(), it.col()) = it.value().real();
    }
    return out;
}

double SectorOperator::hermiticity_defect() const {
    const SparseMatrixC diff = matrix_ - SparseMatrixC(matrix_.adjoint());
    double d = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(diff, k); it; ++it) d = std::max(d, std::abs(it.value()));
    }
    return d;
}

double SectorOperator::norm_bound() const {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(matrix_.rows());
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) sums[it.row()] += std::abs(it.value());
    }
    return sums.size() ? sums.maxCoeff() : 0.0;
}

SectorOperator build_hamiltonian(const SpinChainModel& model, const SymmetrySector& sector) {
    if (!model.spin().is_half()) throw std::invalid_argument("quantum Hamiltonian supports spin 1/2 only");
    if (model.n_sites() != sector.n_sites()) throw std::invalid_argument("model and sector chain lengths differ");
    if (!model.coupling_is_symmetric(1e-12)) {
        throw std::invalid_argument("mirror-symmetric sector requires a symmetric coupling matrix");
    }

    const int n = sector.n_sites();
    const Vec3& mu = model.mu();
    const Mat3& jm = model.coupling();

    std::vector<std::array<int, 2>> bond_terms;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (jm(a, b) != 0.0) bond_terms.push_back({a, b});
        }
    }

    std::vector<Eigen::Triplet<cplx>> triplets;
    const std::size_t dim = sector.dimension();
    triplets.reserve(dim * static_cast<std::size_t>(1 + 2 * n));

    std::vector<std::pair<std::uint32_t, cplx>> terms;
    for (std::size_t col = 0; col < dim; ++col) {
        const std::uint32_t x = sector.representatives()[col];
        terms.clear();
        for (int j = 0; j < n; ++j) {
            const std::uint32_t bj = (x >> j) & 1u;
            for (int a = 0; a < 3; ++a) {
                if (mu[a] == 0.0) continue;
                const PauliAction p = pauli(a, bj);
                terms.emplace_back(x ^ (p.flip << j), 0.5 * mu[a] * p.coefficient);
            }
            const int k = (j + 1) % n;
            const std::uint32_t bk = (x >> k) & 1u;
            for (const auto& [a, b] : bond_terms) {
                const PauliAction pa = pauli(a, bj);
                const PauliAction pb = pauli(b, bk);
                terms.emplace_back(x ^ (pa.flip << j) ^ (pb.flip << k), 0.5 * jm(a, b) * pa.coefficient * pb.coefficient);
            }
        }
        const double norm_col = sector.norm(col);
        for (const auto& [target, amp] : terms) {
            const std::size_t row = sector.index_of(target);
            triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col),
                                  amp * (norm_col / sector.norm(row)));
        }
    }

    SparseMatrixC h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    h.setFromTriplets(triplets.begin(), triplets.end());
    h.prune(cplx{0.0, 0.0});
    return SectorOperator(n, std::move(h));
}

} // namespace scars
