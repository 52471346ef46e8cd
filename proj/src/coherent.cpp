#include "scars/coherent.hpp"

#include <algorithm>
#include <cmath>

namespace scars {

std::array<cplx, 2> single_spin_coherent(const Vec3& direction) {
    const Vec3 n = direction.normalized();
    const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
    const double rho = std::hypot(n.x(), n.y());
    const double phi = rho < 1e-15 ? 0.0 : std::atan2(n.y(), n.x());
    return {cplx{std::cos(0.5 * theta), 0.0}, std::polar(std::sin(0.5 * theta), phi)};
}

Eigen::VectorXcd product_state_full(const SpinConfiguration& config) {
    const std::size_t n = config.size();
    if (n > 30) throw BudgetError("full-space product state limited to N <= 30");
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    v[0] = 1.0;
    Eigen::Index filled = 1;
    for (std::size_t j = 0; j < n; ++j) {
        const auto amp = single_spin_coherent(config[j]);
        for (Eigen::Index c = 0; c < filled; ++c) {
            v[c + filled] = v[c] * amp[1];
            v[c] *= amp[0];
        }
        filled *= 2;
    }
    return v;
}

CoherentProjection coherent_product_state(const SpinConfiguration& config, const SymmetrySector& sector) {
    if (static_cast<int>(config.size()) != sector.n_sites()) {
        throw std::invalid_argument("configuration size does not match the sector");
    }
    const Eigen::VectorXcd full = product_state_full(config);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector.dimension()));
    for (Eigen::Index c = 0; c < full.size(); ++c) a[static_cast<Eigen::Index>(sector.index_of(static_cast<std::uint32_t>(c)))] += full[c];
    for (Eigen::Index r = 0; r < a.size(); ++r) a[r] /= sector.norm(static_cast<std::size_t>(r));
    CoherentProjection out;
    out.weight = a.squaredNorm();
    if (out.weight == 0.0) throw std::invalid_argument("configuration has no weight in the sector");
    out.state = {sector.n_sites(), a / std::sqrt(out.weight)};
    return out;
}

Eigen::VectorXcd expand_to_full_space(const SectorState& psi, const SymmetrySector& sector) {
    if (psi.n_sites != sector.n_sites() || psi.dimension() != sector.dimension()) {
        throw std::invalid_argument("state does not belong to this sector");
    }
    const Eigen::Index full = Eigen::Index{1} << sector.n_sites();
    Eigen::VectorXcd v(full);
    for (Eigen::Index c = 0; c < full; ++c) {
        const std::size_t r = sector.index_of(static_cast<std::uint32_t>(c));
        v[c] = psi.amplitudes[static_cast<Eigen::Index>(r)] / sector.norm(r);
    }
    return v;
}

SparseMatrixC sector_isometry(const SymmetrySector& sector) {
    const Eigen::Index full = Eigen::Index{1} << sector.n_sites();
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(full));
    for (Eigen::Index c = 0; c < full; ++c) {
        const std::size_t r = sector.index_of(static_cast<std::uint32_t>(c));
        t.emplace_back(c, static_cast<Eigen::Index>(r), cplx{1.0 / sector.norm(r), 0.0});
    }
    SparseMatrixC v(full, static_cast<Eigen::Index>(sector.dimension()));
    v.setFromTriplets(t.begin(), t.end());
    return v;
}

cplx product_state_overlap(const SpinConfiguration& config, const SectorState& psi, const SymmetrySector& sector) {
    return product_state_full(config).dot(expand_to_full_space(psi, sector));
}

} // namespace scars
