#include "scars/eth.hpp"

#include "scars/coherent.hpp"
#include "scars/io.hpp"
#include "scars/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace scars {

std::string to_string(Observable o) { return o == Observable::SigmaX1 ? "sigma_x_site1" : "sigma_z_site1"; }

Observable observable_from_string(const std::string& s) {
    if (s == "sigma_x_site1") return Observable::SigmaX1;
    if (s == "sigma_z_site1") return Observable::SigmaZ1;
    throw std::invalid_argument("unsupported observable: " + s);
}

double entanglement_entropy(const Eigen::VectorXcd& full_state, int n_sites, int cut) {
    if (cut < 0 || cut > n_sites) throw std::invalid_argument("entanglement cut out of range");
    if (full_state.size() != (Eigen::Index{1} << n_sites)) throw std::invalid_argument("state size does not match N");
    const Eigen::Index left = Eigen::Index{1} << cut;
    const Eigen::Index right = full_state.size() / left;
    // column-major map: row index = low `cut` bits = sites [0, cut)
    const Eigen::Map<const Eigen::MatrixXcd> m(full_state.data(), left, right);
    const bool is_real = full_state.imag().cwiseAbs().maxCoeff() == 0.0;
    Eigen::VectorXd p;
    if (is_real) {
        const Eigen::MatrixXd mr = m.real();
        const Eigen::MatrixXd rho = left <= right ? Eigen::MatrixXd(mr * mr.transpose()) : Eigen::MatrixXd(mr.transpose() * mr);
        p = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rho, Eigen::EigenvaluesOnly).eigenvalues();
    } else {
        const Eigen::MatrixXcd rho = left <= right ? Eigen::MatrixXcd(m * m.adjoint()) : Eigen::MatrixXcd(m.adjoint() * m);
        p = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho, Eigen::EigenvaluesOnly).eigenvalues();
    }
    const double total = p.sum();
    double s = 0.0;
    for (const double x : p) {
        const double q = x / total;
        if (q > 1e-300) s -= q * std::log(q);
    }
    return s;
}

double site_expectation(const Eigen::VectorXcd& full_state, Observable observable) {
    double out = 0.0;
    const Eigen::Index size = full_state.size();
    if (observable == Observable::SigmaZ1) {
        for (Eigen::Index c = 0; c < size; ++c) out += ((c & 1) ? -1.0 : 1.0) * std::norm(full_state[c]);
    } else {
        for (Eigen::Index c = 0; c < size; ++c) out += (std::conj(full_state[c ^ 1]) * full_state[c]).real();
    }
    return out / full_state.squaredNorm();
}

std::vector<EthPoint> eth_scatter(const EigenSystem& eigen, const SymmetrySector& sector, Observable observable,
                                  std::optional<int> cut, std::optional<std::pair<std::size_t, std::size_t>> range) {
    if (eigen.n_sites() != sector.n_sites() || eigen.dimension() != sector.dimension()) {
        throw std::invalid_argument("eigensystem does not belong to this sector");
    }
    const int n = sector.n_sites();
    const int c = cut.value_or(n / 2);
    const auto [first, last] = range.value_or(std::pair<std::size_t, std::size_t>{0, eigen.dimension()});
    if (first > last || last > eigen.dimension()) throw std::invalid_argument("eigenstate range out of bounds");
    std::vector<EthPoint> points(last - first);
    parallel_for(points.size(), [&](std::size_t k) {
        const std::size_t idx = first + k;
        const Eigen::VectorXcd full = expand_to_full_space(eigen.eigenstate(idx), sector);
        points[k] = {idx, eigen.energies()[static_cast<Eigen::Index>(idx)], site_expectation(full, observable),
                     entanglement_entropy(full, n, c)};
    });
    return points;
}

void write_spectrum_csv(const std::vector<EthPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "n,E_n,sx_expectation,entropy\n";
    for (const auto& p : points) {
        out << p.n << ',' << format_double(p.energy) << ',' << format_double(p.expectation) << ','
            << format_double(p.entropy) << '\n';
    }
}

} // namespace scars
