#pragma once

#include "scars/model.hpp"
#include "scars/projection_map.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace scars {

/// Raised when an integration cannot meet its accuracy contract.
class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rotor chain  ds_j/dt = [mu + J^T s_{j-1} + J s_{j+1}] x s_j
// ---------------------------------------------------------------------------

/// Local field felt by every spin of the chain.
void local_fields(const SpinChainModel& model, std::span<const Vec3> spins, std::span<Vec3> fields);
void chain_velocity(const SpinChainModel& model, std::span<const Vec3> spins, std::span<Vec3> out);

/// Period of the fastest single-spin precession, 2 pi / (|mu| + 2 ||J||).
double characteristic_period(const SpinChainModel& model);

/// Fixed-step RK4 for the rotor chain. Each spin is renormalized after every step.
class ChainStepper {
  public:
    ChainStepper(const SpinChainModel& model, std::vector<Vec3> spins);

    void step(double dt);

    const std::vector<Vec3>& spins() const { return spins_; }
    /// max_j | |s_j| - 1 | just before the renormalization of the last step.
    double last_norm_defect() const { return last_norm_defect_; }

  private:
    const SpinChainModel* model_;
    std::vector<Vec3> spins_;
    std::vector<Vec3> k1_, k2_, k3_, k4_, tmp_;
    double last_norm_defect_ = 0.0;
};

struct IntegratorOptions {
    /// 0 selects characteristic_period(model) / steps_per_period.
    double dt = 0.0;
    int steps_per_period = 1000;
    int store_every = 1;
    /// Allowed |E(t) - E(0)| / max(|E(0)|, 1) over the whole span.
    double energy_tolerance = 1e-6;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpinConfiguration> states;
    double max_energy_drift = 0.0;
    double max_norm_defect = 0.0;
};

/// Throws IntegrationError on step underflow or when the energy drift exceeds the tolerance.
Trajectory integrate_chain(const SpinConfiguration& initial, const SpinChainModel& model, double t_final,
                           const IntegratorOptions& options = {});

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

// ---------------------------------------------------------------------------
// Single-spin dynamics on the TI / IS manifolds
// ---------------------------------------------------------------------------

/// TI: (mu + (J + J^T) s) x s.  IS: mu x s.
Vec3 upo_velocity(Manifold manifold, const SpinChainModel& model, const Vec3& s);

struct OrbitSample {
    double t = 0.0;
    Vec3 s = Vec3::Zero();
};

/// RK4 with n_steps equal steps over [0, t_final]; returns n_steps + 1 samples.
std::vector<OrbitSample> integrate_upo(const ManifoldPoint& anchor, const SpinChainModel& model, double t_final,
                                       int n_steps = 1000);

/// IS: 2 pi / |mu| exactly. TI: first positive-velocity return through the
/// plane normal to the initial velocity, refined by bisection. Throws for
/// fixed points or when no return is found within the search horizon.
double orbit_period(const ManifoldPoint& anchor, const SpinChainModel& model);

UpoDescriptor make_upo(const ManifoldPoint& anchor, const SpinChainModel& model);

// ---------------------------------------------------------------------------
// Rotating-frame average and Lyapunov exponents
// ---------------------------------------------------------------------------

/// Coupling averaged over one precession about u = mu/|mu|.
struct FloquetCoupling {
    Mat3 jbar;
    Vec3 u;
    /// u J u (eigenvalue along u).
    double lambda1 = 0.0;
    /// -(u J u - Tr J) / 2 (doubly degenerate, transverse to u).
    double lambda23 = 0.0;
    double trace_j = 0.0;

    Mat3 adjugate() const;
};

/// Requires a symmetric coupling and nonzero field.
FloquetCoupling floquet_averaged_coupling(const SpinChainModel& model);

enum class LyapunovMethod { Monodromy, AnalyticalIS };
std::string to_string(LyapunovMethod m);

struct LyapunovResult {
    double lambda = 0.0;
    double omega = 0.0;
    double ratio = 0.0;
    LyapunovMethod method = LyapunovMethod::Monodromy;
    /// -s Adj(Jbar) s; only set by the analytical method.
    double alpha = 0.0;
};

/// Small-|J| closed form for the IS orbit tagged by `anchor`:
/// lambda^2 = |alpha|, alpha = -s Adj(Jbar) s.
LyapunovResult lyapunov_analytical_is(const SpinChainModel& model, const Vec3& anchor);

/// 3N x 3N linearization about the IS fixed point in the precessing frame,
/// d eps_i / dt = nu_i M (eps_{i-1} + eps_{i+1}),  M = -[s]_x Jbar.
Eigen::MatrixXd is_rotating_frame_linearization(const SpinChainModel& model, const Vec3& anchor);

struct MonodromyOptions {
    int steps_per_period = 1000;
    /// The period is split into segments, each propagated from the identity and
    /// multiplied with rescaling, so large exponents cannot overflow.
    int segments = 4;
    /// Max |s_j(T) - s_j(0)| accepted as a closed orbit.
    double closure_tolerance = 1e-6;
    /// ln max|eig| below this counts as a stable orbit (lambda = 0).
    double zero_threshold = 1e-4;
};

struct MonodromyResult {
    /// M = exp(log_scale) * scaled
    Eigen::MatrixXd scaled;
    double log_scale = 0.0;
    Eigen::VectorXcd scaled_eigenvalues;
    double closure_error = 0.0;

    /// ln |eig_i(M)| for every eigenvalue.
    Eigen::VectorXd log_moduli() const;
    double log_abs_determinant() const;
};

MonodromyResult monodromy(const UpoDescriptor& upo, const SpinConfiguration& initial, const SpinChainModel& model,
                          const MonodromyOptions& options = {});

LyapunovResult lyapunov_monodromy(const UpoDescriptor& upo, const SpinConfiguration& initial,
                                  const SpinChainModel& model, const MonodromyOptions& options = {});

// ---------------------------------------------------------------------------
// Classical phase-space projection baseline
// ---------------------------------------------------------------------------

struct ClassicalFidelityOptions {
    int samples = 256;
    /// Standard deviation of the Gaussian rotation angle (radians).
    double delta = 0.05;
    double horizon_periods = 200.0;
    double transient_periods = 20.0;
    int steps_per_period = 1000;
    /// Overlaps are accumulated every `sample_stride` integration steps.
    int sample_stride = 50;
    std::uint64_t seed = 1;
    /// Max relative change of the map maximum between R/2 and R samples.
    double convergence_threshold = 0.2;
};

struct ClassicalFidelityResult {
    ProjectionMap map;
    double max_change_on_doubling = 0.0;
    bool converged = false;
};

/// Ensemble- and time-averaged classical overlap prod_j ((1 + s_j . s_j^(r)(t)) / 2)^{2s}
/// of trajectories started near the IS configuration at `anchor`, evaluated on
/// the IS manifold grid.
ClassicalFidelityResult classical_fidelity_map(const SpinChainModel& model, const ManifoldPoint& anchor,
                                               const PhaseSpaceGrid& grid,
                                               const ClassicalFidelityOptions& options = {});

/// Rotates every spin about a uniformly random transverse axis by a N(0, delta) angle.
std::vector<Vec3> perturb_configuration(std::span<const Vec3> spins, double delta, std::uint64_t seed,
                                        std::uint64_t member);

} // namespace scars
