#include "scars/scar_stats.hpp"

#include "scars/classical.hpp"
#include "scars/husimi.hpp"
#include "scars/io.hpp"
#include "scars/parallel.hpp"
#include "scars/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scars {

namespace {

Vec3 any_perpendicular(const Vec3& u) {
    const Vec3 trial = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return u.cross(trial).normalized();
}

ChartPoint chart_point(const Vec3& s) {
    const auto [theta, phi] = vector_to_spherical(s);
    return {theta, phi};
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

} // namespace

UpoTrace upo_trace(const ManifoldPoint& anchor, const SpinChainModel& model, int n_points) {
    if (n_points < 1) throw std::invalid_argument("trace needs at least one point");
    UpoTrace trace;
    trace.manifold = anchor.manifold;
    const Vec3 s0 = anchor.unit_vector();
    const Vec3 v0 = upo_velocity(anchor.manifold, model, s0);
    const double scale = model.mu().norm() + model.coupling().norm();
    if (v0.norm() < 1e-12 * scale) {
        trace.fixed_point = true;
        trace.points.push_back(chart_point(s0));
        return trace;
    }
    trace.period = orbit_period(anchor, model);
    trace.points.reserve(static_cast<std::size_t>(n_points));
    if (anchor.manifold == Manifold::IS) {
        // exact precession about u at angular frequency |mu|
        const Vec3 u = model.field_direction();
        const double along = u.dot(s0);
        const Vec3 cross = u.cross(s0);
        for (int k = 0; k < n_points; ++k) {
            const double a = 2.0 * std::numbers::pi * k / n_points;
            const Vec3 s = std::cos(a) * s0 + std::sin(a) * cross + (1.0 - std::cos(a)) * along * u;
            trace.points.push_back(chart_point(s.normalized()));
        }
        return trace;
    }
    constexpr int substeps = 10;
    const auto samples = integrate_upo(anchor, model, trace.period, n_points * substeps);
    for (int k = 0; k < n_points; ++k) {
        trace.points.push_back(chart_point(samples[static_cast<std::size_t>(k) * substeps].s));
    }
    return trace;
}

std::vector<double> is_family_angles(int n_orbits) {
    if (n_orbits < 1) throw std::invalid_argument("family needs at least one orbit");
    std::vector<double> beta(static_cast<std::size_t>(n_orbits));
    for (int k = 0; k < n_orbits; ++k) beta[static_cast<std::size_t>(k)] = (k + 1) * std::numbers::pi / (n_orbits + 1);
    return beta;
}

std::vector<UpoTrace> is_upo_family(const SpinChainModel& model, int n_orbits, int n_points) {
    const Vec3 u = model.field_direction();
    const Vec3 e1 = any_perpendicular(u);
    std::vector<UpoTrace> family;
    family.reserve(static_cast<std::size_t>(n_orbits));
    for (const double beta : is_family_angles(n_orbits)) {
        const Vec3 s = (std::cos(beta) * u + std::sin(beta) * e1).normalized();
        family.push_back(upo_trace(ManifoldPoint::from_vector(s, Manifold::IS), model, n_points));
    }
    return family;
}

void write_trace_csv(const UpoTrace& trace, const std::string& path) {
    auto out = open_csv(path);
    out << "k,theta,phi\n";
    for (std::size_t k = 0; k < trace.points.size(); ++k) {
        out << k << ',' << format_double(trace.points[k].theta) << ',' << format_double(trace.points[k].phi) << '\n';
    }
}

void write_family_csv(const std::vector<UpoTrace>& family, const std::string& path) {
    auto out = open_csv(path);
    out << "orbit,k,theta,phi\n";
    for (std::size_t o = 0; o < family.size(); ++o) {
        const auto& pts = family[o].points;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            out << o << ',' << k << ',' << format_double(pts[k].theta) << ',' << format_double(pts[k].phi) << '\n';
        }
    }
}

double loop_average(const ProjectionMap& map, const UpoTrace& trace) {
    if (trace.points.empty()) throw std::invalid_argument("empty orbit trace");
    const double q_max = map.max();
    if (!(q_max > 0.0)) throw std::invalid_argument("projection map vanishes everywhere");
    double sum = 0.0;
    for (const auto& p : trace.points) sum += map.interpolate(p.theta, p.phi);
    return sum / (q_max * static_cast<double>(trace.points.size()));
}

double scar_score(const ProjectionMap& map, const std::vector<UpoTrace>& family) {
    if (family.empty()) throw std::invalid_argument("empty orbit family");
    double best = 0.0;
    for (const auto& trace : family) best = std::max(best, loop_average(map, trace));
    return best;
}

SectorState random_sector_state(const SymmetrySector& sector, std::uint64_t seed, std::uint64_t member) {
    auto rng = make_engine(seed, member);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const auto dim = static_cast<Eigen::Index>(sector.dimension());
    Eigen::VectorXd a(dim);
    for (Eigen::Index r = 0; r < dim; ++r) a[r] = uniform(rng);
    a /= a.norm();
    SectorState psi{sector.n_sites(), Eigen::VectorXcd(dim)};
    for (Eigen::Index r = 0; r < dim; ++r) psi.amplitudes[r] = std::polar(a[r], angle(rng));
    return psi;
}

ScarStats scar_statistics_from_scores(std::vector<double> eigen_scores, std::vector<double> random_scores) {
    if (eigen_scores.empty() || random_scores.empty()) throw std::invalid_argument("score lists must be non-empty");
    ScarStats stats;
    std::vector<double> sorted = random_scores;
    std::sort(sorted.begin(), sorted.end());
    const double mean_random = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    double exceed = 0.0;
    for (const double e : eigen_scores) {
        exceed += static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
        if (e > mean_random) ++stats.n_scarred;
    }
    stats.chi = exceed / (static_cast<double>(eigen_scores.size()) * static_cast<double>(sorted.size()));
    stats.s_scores_eigen = std::move(eigen_scores);
    stats.s_scores_random = std::move(random_scores);
    return stats;
}

ScarStats scar_statistics(const EigenSystem& eigen, const SymmetrySector& sector, const std::vector<UpoTrace>& family,
                          const ScarStatisticsOptions& options) {
    if (eigen.n_sites() != sector.n_sites() || eigen.dimension() != sector.dimension()) {
        throw std::invalid_argument("eigensystem does not belong to this sector");
    }
    if (options.n_random < 1) throw std::invalid_argument("n_random must be positive");
    const ManifoldOverlap overlap(sector, Manifold::IS);
    const Eigen::MatrixXcd cw = eigen.is_real() ? Eigen::MatrixXcd(overlap.class_weights(eigen.real_states()).cast<cplx>())
                                                : overlap.class_weights(eigen.complex_states());

    std::vector<double> eigen_scores(eigen.dimension());
    parallel_for(eigen.dimension(), [&](std::size_t n) {
        const auto map = overlap.incoherent_map(cw.col(static_cast<Eigen::Index>(n)), options.grid);
        eigen_scores[n] = scar_score(map, family);
    });

    std::vector<double> random_scores(static_cast<std::size_t>(options.n_random));
    parallel_for(random_scores.size(), [&](std::size_t r) {
        const SectorState psi = random_sector_state(sector, options.seed, r);
        const auto map = overlap.incoherent_map(overlap.class_weights(Eigen::MatrixXcd(psi.amplitudes)), options.grid);
        random_scores[r] = scar_score(map, family);
    });
    return scar_statistics_from_scores(std::move(eigen_scores), std::move(random_scores));
}

std::string scar_stats_json(const ScarStats& stats, std::uint64_t seed, int bins) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    auto histogram = [bins](const std::vector<double>& scores) {
        std::vector<int> counts(static_cast<std::size_t>(bins), 0);
        for (const double s : scores) {
            const int b = std::clamp(static_cast<int>(std::floor(s * bins)), 0, bins - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
        return counts;
    };
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) edges[static_cast<std::size_t>(b)] = static_cast<double>(b) / bins;

    nlohmann::ordered_json j;
    j["chi"] = stats.chi;
    j["n_scarred"] = stats.n_scarred;
    j["n_eigen"] = stats.s_scores_eigen.size();
    j["n_random"] = stats.s_scores_random.size();
    j["seed"] = seed;
    j["score_histograms"] = {{"edges", edges},
                             {"eigen", histogram(stats.s_scores_eigen)},
                             {"random", histogram(stats.s_scores_random)}};
    return j.dump(2);
}

} // namespace scars
