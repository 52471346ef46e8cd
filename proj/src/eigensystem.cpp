#include "scars/eigensystem.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstring>
#include <fstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace scars {

EigenSystem::EigenSystem(int n_sites, Eigen::VectorXd energies, Eigen::MatrixXd states)
    : n_sites_(n_sites), energies_(std::move(energies)), real_states_(std::move(states)), is_real_(true) {
    if (real_states_.rows() != energies_.size() || real_states_.cols() != energies_.size()) {
        throw std::invalid_argument("eigensystem shape mismatch");
    }
}

EigenSystem::EigenSystem(int n_sites, Eigen::VectorXd energies, Eigen::MatrixXcd states)
    : n_sites_(n_sites), energies_(std::move(energies)), complex_states_(std::move(states)), is_real_(false) {
    if (complex_states_.rows() != energies_.size() || complex_states_.cols() != energies_.size()) {
        throw std::invalid_argument("eigensystem shape mismatch");
    }
}

Eigen::VectorXcd EigenSystem::state(std::size_t n) const {
    const auto col = static_cast<Eigen::Index>(n);
    if (is_real_) return real_states_.col(col).cast<cplx>();
    return complex_states_.col(col);
}

SectorState EigenSystem::eigenstate(std::size_t n) const { return {n_sites_, state(n)}; }

void EigenSystem::require_compatible(const SectorState& psi) const {
    if (psi.n_sites != n_sites_ || psi.dimension() != dimension()) {
        throw std::invalid_argument("state and eigensystem belong to different sectors");
    }
}

Eigen::VectorXcd EigenSystem::coefficients(const SectorState& psi) const {
    require_compatible(psi);
    if (is_real_) {
        const Eigen::VectorXd re = real_states_.transpose() * psi.amplitudes.real();
        const Eigen::VectorXd im = real_states_.transpose() * psi.amplitudes.imag();
        Eigen::VectorXcd c(re.size());
        c.real() = re;
        c.imag() = im;
        return c;
    }
    return complex_states_.adjoint() * psi.amplitudes;
}

Eigen::VectorXcd EigenSystem::synthesize(const Eigen::VectorXcd& c) const {
    if (is_real_) {
        Eigen::VectorXcd out(c.size());
        out.real() = real_states_ * c.real();
        out.imag() = real_states_ * c.imag();
        return out;
    }
    return complex_states_ * c;
}

double EigenSystem::orthonormality_defect() const {
    const auto n = energies_.size();
    if (is_real_) {
        Eigen::MatrixXd g = real_states_.transpose() * real_states_;
        g -= Eigen::MatrixXd::Identity(n, n);
        return g.cwiseAbs().maxCoeff();
    }
    Eigen::MatrixXcd g = complex_states_.adjoint() * complex_states_;
    g -= Eigen::MatrixXcd::Identity(n, n);
    return g.cwiseAbs().maxCoeff();
}

double EigenSystem::max_residual(const SectorOperator& h) const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < energies_.size(); ++k) {
        const Eigen::VectorXcd v = state(static_cast<std::size_t>(k));
        worst = std::max(worst, (h.apply(v) - energies_[k] * v).norm());
    }
    return worst;
}

EigenSystem diagonalize(const SectorOperator& h, int max_dense_sites) {
    if (h.n_sites() > max_dense_sites) {
        throw BudgetError("dense diagonalization is limited to N <= " + std::to_string(max_dense_sites) +
                          " (requested N = " + std::to_string(h.n_sites()) + "); use Krylov evolution instead");
    }
    const auto n = static_cast<lapack_int>(h.dimension());
    Eigen::VectorXd w(n);
    if (h.is_real()) {
        Eigen::MatrixXd a = h.dense_real();
        const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
        if (info != 0) throw std::runtime_error("dsyevd failed with info = " + std::to_string(info));
        return EigenSystem(h.n_sites(), std::move(w), std::move(a));
    }
    Eigen::MatrixXcd a = h.dense();
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    if (info != 0) throw std::runtime_error("zheevd failed with info = " + std::to_string(info));
    return EigenSystem(h.n_sites(), std::move(w), std::move(a));
}

SectorState evolve(const SectorState& psi, const EigenSystem& eigen, double t) {
    Eigen::VectorXcd c = eigen.coefficients(psi);
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx{0.0, -eigen.energies()[k] * t});
    return {psi.n_sites, eigen.synthesize(c)};
}

SectorState krylov_evolve(const SectorOperator& h, const SectorState& psi, double t, const KrylovOptions& options) {
    if (psi.dimension() != h.dimension() || psi.n_sites != h.n_sites()) {
        throw std::invalid_argument("state and operator belong to different sectors");
    }
    if (options.max_dimension < 2) throw std::invalid_argument("Krylov dimension must be at least 2");

    Eigen::VectorXcd v = psi.amplitudes;
    double remaining = t;
    const double direction = t < 0.0 ? -1.0 : 1.0;
    remaining = std::abs(remaining);

    while (remaining > 0.0) {
        const double beta0 = v.norm();
        if (beta0 == 0.0) break;
        const int m_max = std::min<int>(options.max_dimension, static_cast<int>(h.dimension()));
        Eigen::MatrixXcd basis(v.size(), m_max);
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.col(0) = v / beta0;
        int m = 0;
        double beta_last = 0.0;
        for (int k = 0; k < m_max; ++k) {
            Eigen::VectorXcd w = h.apply(basis.col(k));
            const double a = basis.col(k).dot(w).real();
            alpha.push_back(a);
            // full reorthogonalization
            for (int r = 0; r < 2; ++r) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
            m = k + 1;
            beta_last = w.norm();
            if (beta_last < 1e-13 * std::max(1.0, std::abs(a))) {
                beta_last = 0.0;
                break;
            }
            if (k + 1 < m_max) {
                beta.push_back(beta_last);
                basis.col(k + 1) = w / beta_last;
            }
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) tri(k, k) = alpha[static_cast<std::size_t>(k)];
        for (int k = 0; k + 1 < m; ++k) tri(k, k + 1) = tri(k + 1, k) = beta[static_cast<std::size_t>(k)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);

        auto small_exp = [&](double tau) {
            Eigen::VectorXcd coeff(m);
            for (int k = 0; k < m; ++k) {
                coeff[k] = std::exp(cplx{0.0, -direction * es.eigenvalues()[k] * tau}) * es.eigenvectors()(0, k);
            }
            Eigen::VectorXcd y = es.eigenvectors().cast<cplx>() * coeff;
            return y;
        };

        double tau = remaining;
        Eigen::VectorXcd y = small_exp(tau);
        while (beta_last > 0.0 && beta_last * std::abs(y[m - 1]) > options.tolerance) {
            tau *= 0.5;
            y = small_exp(tau);
        }
        v = beta0 * (basis.leftCols(m) * y);
        remaining -= tau;
        if (remaining < 1e-15 * std::abs(t)) remaining = 0.0;
    }
    return {psi.n_sites, v};
}

namespace {

constexpr std::array<char, 8> cache_magic = {'S', 'C', 'A', 'R', 'S', 'E', 'I', 'G'};
constexpr std::uint32_t cache_version = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
T read_le(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw std::runtime_error("eigensystem cache is truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void save_eigensystem(const EigenSystem& eigen, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(cache_magic.data(), cache_magic.size());
    write_le<std::uint32_t>(out, cache_version);
    write_le<std::uint32_t>(out, eigen.is_real() ? 0u : 1u);
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(eigen.n_sites()));
    write_le<std::uint64_t>(out, eigen.dimension());
    const auto n = static_cast<Eigen::Index>(eigen.dimension());
    for (Eigen::Index k = 0; k < n; ++k) write_le<double>(out, eigen.energies()[k]);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            if (eigen.is_real()) {
                write_le<double>(out, eigen.real_states()(r, c));
            } else {
                write_le<double>(out, eigen.complex_states()(r, c).real());
                write_le<double>(out, eigen.complex_states()(r, c).imag());
            }
        }
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

EigenSystem load_eigensystem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != cache_magic) throw std::runtime_error("'" + path + "' is not an eigensystem cache");
    const auto version = read_le<std::uint32_t>(in);
    if (version != cache_version) throw std::runtime_error("unsupported eigensystem cache version");
    const auto flags = read_le<std::uint32_t>(in);
    const auto n_sites = static_cast<int>(read_le<std::uint64_t>(in));
    const auto dim = static_cast<Eigen::Index>(read_le<std::uint64_t>(in));
    Eigen::VectorXd energies(dim);
    for (Eigen::Index k = 0; k < dim; ++k) energies[k] = read_le<double>(in);
    if ((flags & 1u) == 0u) {
        Eigen::MatrixXd states(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) states(r, c) = read_le<double>(in);
        }
        return EigenSystem(n_sites, std::move(energies), std::move(states));
    }
    Eigen::MatrixXcd states(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double re = read_le<double>(in);
            const double im = read_le<double>(in);
            states(r, c) = {re, im};
        }
    }
    return EigenSystem(n_sites, std::move(energies), std::move(states));
}

} // namespace scars
