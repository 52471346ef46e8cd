#include "scars/husimi.hpp"

#include "scars/coherent.hpp"

#include <cmath>

namespace scars {

ManifoldOverlap::ManifoldOverlap(const SymmetrySector& sector, Manifold manifold)
    : manifold_(manifold), n_sites_(sector.n_sites()) {
    for (int j = 0; j < n_sites_; ++j) (sublattice_sign(manifold, j) > 0 ? n_a_ : n_b_)++;
    class_of_.resize(sector.dimension());
    scale_.resize(sector.dimension());
    for (std::size_t r = 0; r < sector.dimension(); ++r) {
        const std::uint32_t x = sector.representatives()[r];
        int up_a = 0;
        int up_b = 0;
        for (int j = 0; j < n_sites_; ++j) {
            if ((x >> j) & 1u) continue;
            (sublattice_sign(manifold, j) > 0 ? up_a : up_b)++;
        }
        class_of_[r] = up_a * (n_b_ + 1) + up_b;
        scale_[r] = sector.norm(r);
    }
}

Eigen::MatrixXcd ManifoldOverlap::class_weights(const Eigen::MatrixXcd& amplitudes) const {
    if (static_cast<std::size_t>(amplitudes.rows()) != class_of_.size()) {
        throw std::invalid_argument("amplitudes do not match the sector dimension");
    }
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n_classes(), amplitudes.cols());
    for (Eigen::Index k = 0; k < amplitudes.cols(); ++k) {
        for (std::size_t r = 0; r < class_of_.size(); ++r) {
            w(class_of_[r], k) += scale_[r] * amplitudes(static_cast<Eigen::Index>(r), k);
        }
    }
    return w;
}

Eigen::MatrixXd ManifoldOverlap::class_weights(const Eigen::MatrixXd& amplitudes) const {
    if (static_cast<std::size_t>(amplitudes.rows()) != class_of_.size()) {
        throw std::invalid_argument("amplitudes do not match the sector dimension");
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_classes(), amplitudes.cols());
    for (Eigen::Index k = 0; k < amplitudes.cols(); ++k) {
        for (std::size_t r = 0; r < class_of_.size(); ++r) {
            w(class_of_[r], k) += scale_[r] * amplitudes(static_cast<Eigen::Index>(r), k);
        }
    }
    return w;
}

Eigen::MatrixXcd ManifoldOverlap::phase_coefficients(const Eigen::MatrixXcd& weights, double theta) const {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const int n_max = std::max(n_a_, n_b_);
    std::vector<double> cp(static_cast<std::size_t>(n_max) + 1, 1.0);
    std::vector<double> sp(static_cast<std::size_t>(n_max) + 1, 1.0);
    for (int k = 1; k <= n_max; ++k) {
        cp[static_cast<std::size_t>(k)] = cp[static_cast<std::size_t>(k - 1)] * c;
        sp[static_cast<std::size_t>(k)] = sp[static_cast<std::size_t>(k - 1)] * s;
    }
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n_sites_ + 1, weights.cols());
    for (int up_a = 0; up_a <= n_a_; ++up_a) {
        const int down_a = n_a_ - up_a;
        for (int up_b = 0; up_b <= n_b_; ++up_b) {
            const int down_b = n_b_ - up_b;
            // A sites sit along +n: <up|n> = c, <down|n> = e^{i phi} s.
            // B sites sit along -n: <up|-n> = s, <down|-n> = -e^{i phi} c.
            double coef = cp[static_cast<std::size_t>(up_a)] * sp[static_cast<std::size_t>(down_a)] *
                          sp[static_cast<std::size_t>(up_b)] * cp[static_cast<std::size_t>(down_b)];
            if (down_b % 2 == 1) coef = -coef;
            if (coef == 0.0) continue;
            f.row(down_a + down_b) += coef * weights.row(up_a * (n_b_ + 1) + up_b);
        }
    }
    return f;
}

cplx ManifoldOverlap::overlap(const Eigen::Ref<const Eigen::VectorXcd>& weights, double theta, double phi) const {
    const Eigen::MatrixXcd f = phase_coefficients(Eigen::MatrixXcd(weights), theta);
    cplx out{0.0, 0.0};
    for (int d = 0; d <= n_sites_; ++d) out += f(d, 0) * std::polar(1.0, -phi * d);
    return out;
}

ProjectionMap ManifoldOverlap::incoherent_map(const Eigen::MatrixXcd& weights, const PhaseSpaceGrid& grid) const {
    ProjectionMap map(grid, manifold_);
    const int n = n_sites_;
    // e^{-i phi_k Delta}
    Eigen::MatrixXcd phases(grid.n_phi, n + 1);
    for (int k = 0; k < grid.n_phi; ++k) {
        for (int d = 0; d <= n; ++d) phases(k, d) = std::polar(1.0, -grid.phi(k) * d);
    }
    Eigen::VectorXcd g(n + 1);
    for (int i = 0; i < grid.n_theta; ++i) {
        const Eigen::MatrixXcd f = phase_coefficients(weights, grid.theta(i));
        const Eigen::MatrixXcd gram = f * f.adjoint();
        g.setZero();
        for (int d = 0; d <= n; ++d) {
            for (int dp = 0; dp <= d; ++dp) g[d - dp] += gram(d, dp);
        }
        for (int k = 0; k < grid.n_phi; ++k) {
            double q = g[0].real();
            for (int delta = 1; delta <= n; ++delta) q += 2.0 * (phases(k, delta) * g[delta]).real();
            map.at(i, k) = std::max(q, 0.0);
        }
    }
    return map;
}

ProjectionMap husimi_projection(const SectorState& psi, const SymmetrySector& sector, Manifold manifold,
                                const PhaseSpaceGrid& grid) {
    if (psi.n_sites != sector.n_sites() || psi.dimension() != sector.dimension()) {
        throw std::invalid_argument("state does not belong to this sector");
    }
    const ManifoldOverlap overlap(sector, manifold);
    return overlap.incoherent_map(overlap.class_weights(Eigen::MatrixXcd(psi.amplitudes)), grid);
}

ProjectionMap husimi_projection_full_space(const SectorState& psi, const SymmetrySector& sector, Manifold manifold,
                                           const PhaseSpaceGrid& grid) {
    const Eigen::VectorXcd full = expand_to_full_space(psi, sector);
    ProjectionMap map(grid, manifold);
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int k = 0; k < grid.n_phi; ++k) {
            const ManifoldPoint p{grid.theta(i), grid.phi(k), manifold};
            map.at(i, k) = std::norm(product_state_full(make_manifold_state(p, sector.n_sites())).dot(full));
        }
    }
    return map;
}

DiagonalEnsembleResult diagonal_ensemble_projection(const SectorState& psi0, const EigenSystem& eigen,
                                                    const SymmetrySector& sector, Manifold manifold,
                                                    const PhaseSpaceGrid& grid,
                                                    const DiagonalEnsembleOptions& options) {
    if (eigen.n_sites() != sector.n_sites() || eigen.dimension() != sector.dimension()) {
        throw std::invalid_argument("eigensystem does not belong to this sector");
    }
    const Eigen::VectorXcd c = eigen.coefficients(psi0);
    const ManifoldOverlap overlap(sector, manifold);
    const Eigen::MatrixXcd cw = eigen.is_real() ? Eigen::MatrixXcd(overlap.class_weights(eigen.real_states()).cast<cplx>())
                                                : overlap.class_weights(eigen.complex_states());

    const auto dim = static_cast<Eigen::Index>(eigen.dimension());
    std::vector<Eigen::Index> block_start{0};
    for (Eigen::Index n = 1; n < dim; ++n) {
        if (eigen.energies()[n] - eigen.energies()[n - 1] >= options.degeneracy_tolerance) block_start.push_back(n);
    }
    block_start.push_back(dim);

    DiagonalEnsembleResult result;
    const auto n_blocks = static_cast<Eigen::Index>(block_start.size() - 1);
    Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(cw.rows(), n_blocks);
    for (Eigen::Index b = 0; b < n_blocks; ++b) {
        const auto begin = block_start[static_cast<std::size_t>(b)];
        const auto end = block_start[static_cast<std::size_t>(b) + 1];
        if (end - begin > 1) ++result.degenerate_blocks;
        for (Eigen::Index n = begin; n < end; ++n) blocks.col(b) += c[n] * cw.col(n);
    }
    result.map = overlap.incoherent_map(blocks, grid);
    return result;
}

} // namespace scars
