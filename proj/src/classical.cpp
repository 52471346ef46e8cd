#include "scars/classical.hpp"
#include "scars/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace scars {

namespace {

double energy_of(const SpinChainModel& model, std::span<const Vec3> s) {
    const std::size_t n = s.size();
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e += model.mu().dot(s[j]) + s[j].dot(model.coupling() * s[(j + 1) % n]);
    return model.spin().value() * e;
}

void require_size(const SpinChainModel& model, std::size_t n) {
    if (static_cast<int>(n) != model.n_sites()) {
        throw std::invalid_argument("configuration size does not match the chain length");
    }
}

} // namespace

void local_fields(const SpinChainModel& model, std::span<const Vec3> s, std::span<Vec3> fields) {
    const std::size_t n = s.size();
    const Mat3& j = model.coupling();
    const Mat3 jt = j.transpose();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& left = s[(i + n - 1) % n];
        const Vec3& right = s[(i + 1) % n];
        fields[i] = model.mu() + jt * left + j * right;
    }
}

void chain_velocity(const SpinChainModel& model, std::span<const Vec3> s, std::span<Vec3> out) {
    local_fields(model, s, out);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = out[i].cross(s[i]);
}

double characteristic_period(const SpinChainModel& model) {
    const double scale = model.mu().norm() + 2.0 * model.coupling().norm();
    if (scale == 0.0) return 2.0 * std::numbers::pi;
    return 2.0 * std::numbers::pi / scale;
}

ChainStepper::ChainStepper(const SpinChainModel& model, std::vector<Vec3> spins)
    : model_(&model), spins_(std::move(spins)) {
    require_size(model, spins_.size());
    const std::size_t n = spins_.size();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
}

void ChainStepper::step(double dt) {
    const std::size_t n = spins_.size();
    chain_velocity(*model_, spins_, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = spins_[i] + 0.5 * dt * k1_[i];
    chain_velocity(*model_, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = spins_[i] + 0.5 * dt * k2_[i];
    chain_velocity(*model_, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = spins_[i] + dt * k3_[i];
    chain_velocity(*model_, tmp_, k4_);
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spins_[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        const double norm = spins_[i].norm();
        defect = std::max(defect, std::abs(norm - 1.0));
        spins_[i] /= norm;
    }
    last_norm_defect_ = defect;
}

Trajectory integrate_chain(const SpinConfiguration& initial, const SpinChainModel& model, double t_final,
                           const IntegratorOptions& options) {
    require_size(model, initial.size());
    if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be positive");
    if (options.store_every < 1) throw std::invalid_argument("store_every must be >= 1");

    double dt = options.dt > 0.0 ? options.dt : characteristic_period(model) / options.steps_per_period;
    const double n_steps_real = std::ceil(t_final / dt);
    if (!(dt > 0.0) || n_steps_real > 1e9 || dt < 1e-14 * t_final) {
        throw IntegrationError("step size underflow: dt = " + format_double(dt));
    }
    const auto n_steps = static_cast<long long>(n_steps_real);
    dt = t_final / static_cast<double>(n_steps);

    ChainStepper stepper(model, std::vector<Vec3>(initial.orientations().begin(), initial.orientations().end()));
    const double e0 = energy_of(model, stepper.spins());
    const double e_scale = std::max(std::abs(e0), 1.0);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    for (long long k = 1; k <= n_steps; ++k) {
        stepper.step(dt);
        traj.max_norm_defect = std::max(traj.max_norm_defect, stepper.last_norm_defect());
        const double drift = std::abs(energy_of(model, stepper.spins()) - e0) / e_scale;
        traj.max_energy_drift = std::max(traj.max_energy_drift, drift);
        if (drift > options.energy_tolerance) {
            throw IntegrationError("energy drift " + format_double(drift) + " exceeds tolerance " +
                                   format_double(options.energy_tolerance) + " at t = " +
                                   format_double(static_cast<double>(k) * dt));
        }
        if (k % options.store_every == 0 || k == n_steps) {
            traj.times.push_back(static_cast<double>(k) * dt);
            traj.states.emplace_back(stepper.spins());
        }
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "t,j,sx,sy,sz\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const auto& state = trajectory.states[k];
        for (std::size_t j = 0; j < state.size(); ++j) {
            out << format_double(trajectory.times[k]) << ',' << j << ',' << format_double(state[j].x()) << ','
                << format_double(state[j].y()) << ',' << format_double(state[j].z()) << '\n';
        }
    }
}

Vec3 upo_velocity(Manifold manifold, const SpinChainModel& model, const Vec3& s) {
    if (manifold == Manifold::IS) return model.mu().cross(s);
    const Vec3 field = model.mu() + (model.coupling() + model.coupling().transpose()) * s;
    return field.cross(s);
}

namespace {

Vec3 rk4_single(Manifold manifold, const SpinChainModel& model, const Vec3& s, double dt) {
    const Vec3 k1 = upo_velocity(manifold, model, s);
    const Vec3 k2 = upo_velocity(manifold, model, s + 0.5 * dt * k1);
    const Vec3 k3 = upo_velocity(manifold, model, s + 0.5 * dt * k2);
    const Vec3 k4 = upo_velocity(manifold, model, s + dt * k3);
    return (s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
}

} // namespace

std::vector<OrbitSample> integrate_upo(const ManifoldPoint& anchor, const SpinChainModel& model, double t_final,
                                       int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be positive");
    if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be non-negative");
    if (anchor.manifold == Manifold::IS && model.mu().norm() == 0.0) {
        throw std::invalid_argument("IS dynamics need a nonzero field");
    }
    const double dt = t_final / n_steps;
    std::vector<OrbitSample> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    Vec3 s = anchor.unit_vector();
    out.push_back({0.0, s});
    for (int k = 1; k <= n_steps; ++k) {
        s = rk4_single(anchor.manifold, model, s, dt);
        out.push_back({k * dt, s});
    }
    return out;
}

double orbit_period(const ManifoldPoint& anchor, const SpinChainModel& model) {
    const Vec3 s0 = anchor.unit_vector();
    if (anchor.manifold == Manifold::IS) {
        const double w = model.mu().norm();
        if (w == 0.0) throw std::invalid_argument("IS period undefined for zero field");
        if (model.mu().cross(s0).norm() < 1e-12 * w) {
            throw std::invalid_argument("anchor is a fixed point of the IS dynamics");
        }
        return 2.0 * std::numbers::pi / w;
    }

    const Vec3 v0 = upo_velocity(Manifold::TI, model, s0);
    if (v0.norm() < 1e-12) throw std::invalid_argument("anchor is a fixed point of the TI dynamics");

    const double scale = model.mu().norm() + 2.0 * model.coupling().norm();
    const double dt = 2.0 * std::numbers::pi / scale / 4000.0;
    const double horizon = 2000.0 * 2.0 * std::numbers::pi / v0.norm();
    const auto section = [&](const Vec3& s) { return (s - s0).dot(v0); };

    Vec3 s = rk4_single(Manifold::TI, model, s0, dt);
    double t = dt;
    double g_prev = section(s);
    while (t < horizon) {
        const Vec3 next = rk4_single(Manifold::TI, model, s, dt);
        const double g = section(next);
        if (g_prev < 0.0 && g >= 0.0 && (next - s0).norm() < 1e-2) {
            // bisection on the sub-step length
            double lo = 0.0;
            double hi = dt;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (section(rk4_single(Manifold::TI, model, s, mid)) < 0.0) lo = mid;
                else hi = mid;
            }
            const double period = t + 0.5 * (lo + hi);
            const double miss = (rk4_single(Manifold::TI, model, s, 0.5 * (lo + hi)) - s0).norm();
            if (miss > 1e-8) {
                throw IntegrationError("orbit does not close: return distance " + format_double(miss));
            }
            return period;
        }
        s = next;
        g_prev = g;
        t += dt;
    }
    throw IntegrationError("no return to the anchor within the search horizon");
}

UpoDescriptor make_upo(const ManifoldPoint& anchor, const SpinChainModel& model) {
    return {anchor, orbit_period(anchor, model)};
}

} // namespace scars
