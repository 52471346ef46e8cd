#include "scars/classical.hpp"
#include "scars/io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace scars {

namespace {

Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

} // namespace

std::string to_string(LyapunovMethod m) { return m == LyapunovMethod::Monodromy ? "monodromy" : "analytical_is"; }

Mat3 FloquetCoupling::adjugate() const {
    const double ujj = lambda1;
    return 0.25 * (ujj - trace_j) * (u * u.transpose() * (3.0 * ujj - trace_j) - 2.0 * ujj * Mat3::Identity());
}

FloquetCoupling floquet_averaged_coupling(const SpinChainModel& model) {
    if (model.mu().norm() == 0.0) throw std::invalid_argument("rotating-frame average needs a nonzero field");
    if (!model.coupling_is_symmetric(1e-12)) {
        throw std::invalid_argument("rotating-frame closed form requires a symmetric coupling matrix");
    }
    FloquetCoupling fc;
    fc.u = model.field_direction();
    const Mat3& j = model.coupling();
    fc.trace_j = j.trace();
    fc.lambda1 = fc.u.dot(j * fc.u);
    fc.lambda23 = -0.5 * (fc.lambda1 - fc.trace_j);
    fc.jbar = fc.u * fc.u.transpose() * 0.5 * (3.0 * fc.lambda1 - fc.trace_j) -
              Mat3::Identity() * 0.5 * (fc.lambda1 - fc.trace_j);
    return fc;
}

LyapunovResult lyapunov_analytical_is(const SpinChainModel& model, const Vec3& anchor) {
    const FloquetCoupling fc = floquet_averaged_coupling(model);
    const Vec3 s = anchor.normalized();
    LyapunovResult r;
    r.method = LyapunovMethod::AnalyticalIS;
    r.alpha = -s.dot(fc.adjugate() * s);
    r.lambda = std::sqrt(std::abs(r.alpha));
    r.omega = model.mu().norm();
    r.ratio = r.lambda / r.omega;
    return r;
}

Eigen::MatrixXd is_rotating_frame_linearization(const SpinChainModel& model, const Vec3& anchor) {
    model.require_is_compatible();
    const FloquetCoupling fc = floquet_averaged_coupling(model);
    const Mat3 m = -cross_matrix(anchor.normalized()) * fc.jbar;
    const int n = model.n_sites();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
        const double nu = sublattice_sign(Manifold::IS, i);
        const int left = (i + n - 1) % n;
        const int right = (i + 1) % n;
        l.block<3, 3>(3 * i, 3 * left) += nu * m;
        l.block<3, 3>(3 * i, 3 * right) += nu * m;
    }
    return l;
}

namespace {

/// Base orbit plus tangent matrix X, integrated together with RK4.
class TangentStepper {
  public:
    TangentStepper(const SpinChainModel& model, std::vector<Vec3> spins)
        : model_(model), n_(spins.size()), spins_(std::move(spins)), fields_(n_), tmp_(n_), k_(4) {
        for (auto& k : k_) k.resize(n_);
        jt_ = model.coupling().transpose();
    }

    const std::vector<Vec3>& spins() const { return spins_; }

    void step(double dt, Eigen::MatrixXd& x) {
        const std::size_t dim = 3 * n_;
        if (kx_.size() != 4 || kx_[0].cols() != x.cols()) {
            kx_.assign(4, Eigen::MatrixXd(dim, x.cols()));
            xtmp_.resize(dim, x.cols());
        }
        stage(spins_, x, k_[0], kx_[0]);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = spins_[i] + 0.5 * dt * k_[0][i];
        xtmp_ = x + 0.5 * dt * kx_[0];
        stage(tmp_, xtmp_, k_[1], kx_[1]);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = spins_[i] + 0.5 * dt * k_[1][i];
        xtmp_ = x + 0.5 * dt * kx_[1];
        stage(tmp_, xtmp_, k_[2], kx_[2]);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = spins_[i] + dt * k_[2][i];
        xtmp_ = x + dt * kx_[2];
        stage(tmp_, xtmp_, k_[3], kx_[3]);
        for (std::size_t i = 0; i < n_; ++i) {
            spins_[i] += (dt / 6.0) * (k_[0][i] + 2.0 * k_[1][i] + 2.0 * k_[2][i] + k_[3][i]);
            spins_[i].normalize();
        }
        x += (dt / 6.0) * (kx_[0] + 2.0 * kx_[1] + 2.0 * kx_[2] + kx_[3]);
    }

  private:
    void stage(const std::vector<Vec3>& s, const Eigen::MatrixXd& x, std::vector<Vec3>& ks, Eigen::MatrixXd& kx) {
        local_fields(model_, s, fields_);
        const Mat3& j = model_.coupling();
        for (std::size_t i = 0; i < n_; ++i) {
            ks[i] = fields_[i].cross(s[i]);
            const std::size_t left = (i + n_ - 1) % n_;
            const std::size_t right = (i + 1) % n_;
            const Mat3 sx = cross_matrix(s[i]);
            const Mat3 d = cross_matrix(fields_[i]);
            const Mat3 lm = -sx * jt_;
            const Mat3 rm = -sx * j;
            const auto ii = static_cast<Eigen::Index>(3 * i);
            kx.middleRows<3>(ii).noalias() = d * x.middleRows<3>(ii);
            kx.middleRows<3>(ii).noalias() += lm * x.middleRows<3>(static_cast<Eigen::Index>(3 * left));
            kx.middleRows<3>(ii).noalias() += rm * x.middleRows<3>(static_cast<Eigen::Index>(3 * right));
        }
    }

    const SpinChainModel& model_;
    std::size_t n_;
    std::vector<Vec3> spins_, fields_, tmp_;
    std::vector<std::vector<Vec3>> k_;
    std::vector<Eigen::MatrixXd> kx_;
    Eigen::MatrixXd xtmp_;
    Mat3 jt_;
};

} // namespace

Eigen::VectorXd MonodromyResult::log_moduli() const {
    Eigen::VectorXd out(scaled_eigenvalues.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = std::log(std::abs(scaled_eigenvalues[i])) + log_scale;
    return out;
}

double MonodromyResult::log_abs_determinant() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < scaled_eigenvalues.size(); ++i) s += std::log(std::abs(scaled_eigenvalues[i]));
    return s + static_cast<double>(scaled_eigenvalues.size()) * log_scale;
}

MonodromyResult monodromy(const UpoDescriptor& upo, const SpinConfiguration& initial, const SpinChainModel& model,
                          const MonodromyOptions& options) {
    if (static_cast<int>(initial.size()) != model.n_sites()) {
        throw std::invalid_argument("configuration size does not match the chain length");
    }
    if (!(upo.period > 0.0)) throw std::invalid_argument("UPO period must be positive");
    if (options.segments < 1 || options.steps_per_period < options.segments) {
        throw std::invalid_argument("invalid monodromy step configuration");
    }
    const auto dim = static_cast<Eigen::Index>(3 * initial.size());
    const double dt = upo.period / options.steps_per_period;

    TangentStepper stepper(model, std::vector<Vec3>(initial.orientations().begin(), initial.orientations().end()));
    MonodromyResult result;
    result.scaled = Eigen::MatrixXd::Identity(dim, dim);

    int done = 0;
    for (int seg = 0; seg < options.segments; ++seg) {
        const int steps = (options.steps_per_period * (seg + 1)) / options.segments - done;
        Eigen::MatrixXd x = Eigen::MatrixXd::Identity(dim, dim);
        for (int k = 0; k < steps; ++k) stepper.step(dt, x);
        done += steps;
        if (!x.allFinite()) throw IntegrationError("tangent propagation overflowed");
        result.scaled = x * result.scaled;
        const double norm = result.scaled.norm();
        result.scaled /= norm;
        result.log_scale += std::log(norm);
    }

    double closure = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        closure = std::max(closure, (stepper.spins()[i] - initial[i]).norm());
    }
    result.closure_error = closure;
    if (closure > options.closure_tolerance) {
        throw IntegrationError("period mismatch: orbit misses its start by " + format_double(closure));
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(result.scaled, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("monodromy eigensolver failed");
    result.scaled_eigenvalues = solver.eigenvalues();
    return result;
}

LyapunovResult lyapunov_monodromy(const UpoDescriptor& upo, const SpinConfiguration& initial,
                                  const SpinChainModel& model, const MonodromyOptions& options) {
    const MonodromyResult m = monodromy(upo, initial, model, options);
    const double log_max = m.log_moduli().maxCoeff();
    LyapunovResult r;
    r.method = LyapunovMethod::Monodromy;
    r.omega = 2.0 * std::numbers::pi / upo.period;
    r.lambda = log_max < options.zero_threshold ? 0.0 : log_max / upo.period;
    r.ratio = r.lambda / r.omega;
    return r;
}

} // namespace scars
