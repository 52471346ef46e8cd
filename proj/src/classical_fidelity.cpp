#include "scars/classical.hpp"

#include "scars/parallel.hpp"
#include "scars/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace scars {

namespace {

Vec3 any_perpendicular(const Vec3& s) {
    const Vec3 trial = std::abs(s.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return s.cross(trial).normalized();
}

constexpr int members_per_chunk = 16;

} // namespace

std::vector<Vec3> perturb_configuration(std::span<const Vec3> spins, double delta, std::uint64_t seed,
                                        std::uint64_t member) {
    auto rng = make_engine(seed, member);
    std::uniform_real_distribution<double> uniform_angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> out(spins.begin(), spins.end());
    for (auto& s : out) {
        const Vec3 e1 = any_perpendicular(s);
        const Vec3 e2 = s.cross(e1);
        const double psi = uniform_angle(rng);
        const double angle = delta * gauss(rng);
        const Vec3 axis = std::cos(psi) * e1 + std::sin(psi) * e2;
        // Rodrigues; axis is perpendicular to s
        s = (std::cos(angle) * s + std::sin(angle) * axis.cross(s)).normalized();
    }
    return out;
}

ClassicalFidelityResult classical_fidelity_map(const SpinChainModel& model, const ManifoldPoint& anchor,
                                               const PhaseSpaceGrid& grid, const ClassicalFidelityOptions& opt) {
    model.require_is_compatible();
    if (opt.samples < 1) throw std::invalid_argument("classical fidelity needs at least one sample");
    if (opt.delta < 0.0) throw std::invalid_argument("perturbation width must be non-negative");
    if (opt.steps_per_period < 1 || opt.sample_stride < 1) throw std::invalid_argument("invalid step settings");
    if (!(opt.horizon_periods > 0.0) || opt.transient_periods < 0.0) {
        throw std::invalid_argument("invalid averaging horizon");
    }

    const int n = model.n_sites();
    const double period = 2.0 * std::numbers::pi / model.mu().norm();
    const double dt = period / opt.steps_per_period;
    const auto transient_steps = static_cast<long long>(std::llround(opt.transient_periods * opt.steps_per_period));
    const auto horizon_steps = static_cast<long long>(std::llround(opt.horizon_periods * opt.steps_per_period));
    const int twice_s = model.spin().twice();

    std::vector<Vec3> grid_dirs(grid.size());
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int k = 0; k < grid.n_phi; ++k) {
            grid_dirs[static_cast<std::size_t>(i) * grid.n_phi + k] = spherical_to_vector(grid.theta(i), grid.phi(k));
        }
    }

    const SpinConfiguration reference = make_is_state(anchor, n);
    const std::size_t n_chunks = (static_cast<std::size_t>(opt.samples) + members_per_chunk - 1) / members_per_chunk;
    // per-chunk time-averaged sums; the first and second halves of the
    // ensemble are summed separately for the convergence diagnostic
    std::vector<std::vector<double>> chunk_sums(n_chunks, std::vector<double>(grid.size(), 0.0));

    parallel_for(n_chunks, [&](std::size_t chunk) {
        auto& acc = chunk_sums[chunk];
        std::vector<Vec3> w(static_cast<std::size_t>(n));
        const std::size_t begin = chunk * members_per_chunk;
        const std::size_t end = std::min<std::size_t>(begin + members_per_chunk, static_cast<std::size_t>(opt.samples));
        for (std::size_t r = begin; r < end; ++r) {
            ChainStepper stepper(model, perturb_configuration(reference.orientations(), opt.delta, opt.seed, r));
            for (long long k = 0; k < transient_steps; ++k) stepper.step(dt);
            long long n_samples = 0;
            std::vector<double> member(grid.size(), 0.0);
            for (long long k = 0; k <= horizon_steps; ++k) {
                if (k > 0) stepper.step(dt);
                if (k % opt.sample_stride != 0) continue;
                ++n_samples;
                for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = sublattice_sign(Manifold::IS, j) * stepper.spins()[static_cast<std::size_t>(j)];
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    double q = 1.0;
                    for (const auto& wj : w) q *= 0.5 * (1.0 + grid_dirs[g].dot(wj));
                    if (twice_s != 1) q = std::pow(q, twice_s);
                    member[g] += q;
                }
            }
            for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += member[g] / static_cast<double>(n_samples);
        }
    });

    ClassicalFidelityResult result;
    result.map = ProjectionMap(grid, Manifold::IS);
    std::vector<double> half(grid.size(), 0.0);
    const std::size_t half_chunks = std::max<std::size_t>(1, n_chunks / 2);
    std::size_t half_members = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t g = 0; g < grid.size(); ++g) result.map.values[g] += chunk_sums[c][g];
        if (c < half_chunks) {
            for (std::size_t g = 0; g < grid.size(); ++g) half[g] += chunk_sums[c][g];
            half_members += std::min<std::size_t>(members_per_chunk, static_cast<std::size_t>(opt.samples) - c * members_per_chunk);
        }
    }
    for (auto& v : result.map.values) v /= opt.samples;
    for (auto& v : half) v /= static_cast<double>(half_members);

    const double full_max = result.map.max();
    const double half_max = *std::max_element(half.begin(), half.end());
    result.max_change_on_doubling = full_max > 0.0 ? std::abs(full_max - half_max) / full_max : 0.0;
    result.converged = result.max_change_on_doubling <= opt.convergence_threshold;
    return result;
}

} // namespace scars
