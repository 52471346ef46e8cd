#pragma once

#include "scars/eigensystem.hpp"
#include "scars/projection_map.hpp"
#include "scars/sector.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scars {

struct ChartPoint {
    double theta = 0.0;
    double phi = 0.0;
};

/// One classical orbit on a manifold chart, sampled over a period.
struct UpoTrace {
    Manifold manifold = Manifold::IS;
    std::vector<ChartPoint> points;
    /// The anchor is a fixed point; `points` then holds just the anchor.
    bool fixed_point = false;
    double period = 0.0;
};

/// Single-spin orbit through `anchor`, sampled at n_points over one period.
/// IS orbits use the exact precession about mu; TI orbits are integrated.
UpoTrace upo_trace(const ManifoldPoint& anchor, const SpinChainModel& model, int n_points = 400);

/// IS orbits labelled by the conserved angle beta = arccos(u . s), u = mu/|mu|,
/// with beta_k = k pi / (n_orbits + 1), k = 1..n_orbits.
std::vector<UpoTrace> is_upo_family(const SpinChainModel& model, int n_orbits = 60, int n_points = 400);
/// Conserved angle of each member of is_upo_family.
std::vector<double> is_family_angles(int n_orbits = 60);

/// Rows `k,theta,phi`.
void write_trace_csv(const UpoTrace& trace, const std::string& path);
/// Rows `orbit,k,theta,phi`.
void write_family_csv(const std::vector<UpoTrace>& family, const std::string& path);

/// Average of Q/Q_max along a trace (bilinear interpolation).
double loop_average(const ProjectionMap& map, const UpoTrace& trace);

/// max over the family of the loop average of Q/Q_max.
double scar_score(const ProjectionMap& map, const std::vector<UpoTrace>& family);

/// Amplitudes uniform in [0, 1] per sector basis vector, normalized, then
/// multiplied by independent uniform phases. `member` selects an
/// independent stream for ensemble index `member`.
SectorState random_sector_state(const SymmetrySector& sector, std::uint64_t seed, std::uint64_t member = 0);

struct ScarStats {
    std::vector<double> s_scores_eigen;
    std::vector<double> s_scores_random;
    double chi = 0.0;
    int n_scarred = 0;
};

/// chi = P(S_eigen > S_random) over all pairs; n_scarred = #{S_eigen > mean S_random}.
ScarStats scar_statistics_from_scores(std::vector<double> eigen_scores, std::vector<double> random_scores);

struct ScarStatisticsOptions {
    PhaseSpaceGrid grid{101, 201};
    int n_random = 1000;
    std::uint64_t seed = 1;
};

/// IS-manifold scores of every eigenstate and of n_random random sector states.
ScarStats scar_statistics(const EigenSystem& eigen, const SymmetrySector& sector,
                          const std::vector<UpoTrace>& family, const ScarStatisticsOptions& options = {});

/// {chi, n_scarred, n_eigen, n_random, seed, score_histograms}
std::string scar_stats_json(const ScarStats& stats, std::uint64_t seed, int bins = 50);

} // namespace scars
