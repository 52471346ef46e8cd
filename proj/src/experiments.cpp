#include "scars/experiments.hpp"

#include "scars/classical.hpp"
#include "scars/coherent.hpp"
#include "scars/eigensystem.hpp"
#include "scars/eth.hpp"
#include "scars/hamiltonian.hpp"
#include "scars/husimi.hpp"
#include "scars/io.hpp"
#include "scars/parallel.hpp"
#include "scars/scar_stats.hpp"
#include "scars/sector.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace scars {

namespace {

using json = nlohmann::ordered_json;

int parse_int_in(const std::string& key, const std::string& value, long long lo, long long hi) {
    const long long v = parse_integer(key, value);
    if (v < lo || v > hi) {
        throw std::invalid_argument(key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
}

double parse_positive(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw std::invalid_argument(key + " must be positive");
    return v;
}

double parse_non_negative(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (!(v >= 0.0)) throw std::invalid_argument(key + " must be non-negative");
    return v;
}

std::string join(const std::string& dir, const std::string& name) { return (std::filesystem::path(dir) / name).string(); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

/// Output files of one run, written into the output directory.
class Artifacts {
  public:
    explicit Artifacts(std::string dir) : dir_(std::move(dir)) { ensure_directory(dir_); }

    std::string path(const std::string& name) {
        names_.push_back(name);
        return join(dir_, name);
    }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& dir() const { return dir_; }

  private:
    std::string dir_;
    std::vector<std::string> names_;
};

struct QuantumSetup {
    SpinChainModel model;
    SymmetrySector sector;
    SectorOperator hamiltonian;
};

QuantumSetup quantum_setup(const ExperimentConfig& cfg) {
    const SpinChainModel model = cfg.model();
    model.require_is_compatible();
    SymmetrySector sector(model.n_sites());
    SectorOperator h = build_hamiltonian(model, sector);
    return {model, std::move(sector), std::move(h)};
}

/// Dense eigensystem, reusing the cache file when it holds a valid eigensystem of this operator.
EigenSystem eigensystem_for(const ExperimentConfig& cfg, const SectorOperator& h) {
    if (!cfg.cache.empty() && std::filesystem::exists(cfg.cache)) {
        try {
            EigenSystem cached = load_eigensystem(cfg.cache);
            if (cached.dimension() == static_cast<std::size_t>(h.dimension()) &&
                cached.max_residual(h) < 1e-8 * h.norm_bound()) {
                return cached;
            }
        } catch (const std::exception&) {
            // unreadable or stale cache: recompute below
        }
        std::cerr << "note: eigensystem cache " << cfg.cache << " does not match; recomputing\n";
    }
    EigenSystem eigen = diagonalize(h);
    if (!cfg.cache.empty()) save_eigensystem(eigen, cfg.cache);
    return eigen;
}

std::vector<std::size_t> central_indices(std::size_t dim, int count) {
    const std::size_t k = std::min<std::size_t>(dim, static_cast<std::size_t>(count));
    const std::size_t first = dim / 2 - std::min(dim / 2, k / 2);
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = first + i;
    return out;
}

// ---------------------------------------------------------------------------

void run_lyapunov(const ExperimentConfig& cfg, Artifacts& art) {
    const SpinChainModel base = cfg.model().with_sites(cfg.classical_n);
    base.require_is_compatible();
    const double j_norm = base.coupling().norm();
    if (!(j_norm > 0.0)) throw std::invalid_argument("lyapunov scan needs a nonzero coupling");
    const double mu = base.mu().norm();

    std::vector<double> ratios(static_cast<std::size_t>(cfg.scan_points));
    for (int k = 0; k < cfg.scan_points; ++k) {
        const double f = cfg.scan_points == 1 ? 0.0 : static_cast<double>(k) / (cfg.scan_points - 1);
        ratios[static_cast<std::size_t>(k)] = cfg.ratio_min * std::pow(cfg.ratio_max / cfg.ratio_min, f);
    }

    struct Row {
        LyapunovResult is_mono, is_analytic, ti_mono;
        bool ti_ok = false;
    };
    std::vector<Row> rows(ratios.size());
    MonodromyOptions mopt;
    mopt.steps_per_period = cfg.steps_per_period;
    const ManifoldPoint is_anchor = cfg.anchor_point(Manifold::IS);
    const ManifoldPoint ti_anchor = cfg.anchor_point(Manifold::TI);

    parallel_for(ratios.size(), [&](std::size_t k) {
        const SpinChainModel m = base.with_scaled_coupling(ratios[k] * mu / j_norm);
        Row& row = rows[k];
        row.is_analytic = lyapunov_analytical_is(m, is_anchor.unit_vector());
        const UpoDescriptor is_upo = make_upo(is_anchor, m);
        row.is_mono = lyapunov_monodromy(is_upo, make_is_state(is_anchor, m.n_sites()), m, mopt);
        try {
            const UpoDescriptor ti_upo = make_upo(ti_anchor, m);
            row.ti_mono = lyapunov_monodromy(ti_upo, make_ti_state(ti_anchor, m.n_sites()), m, mopt);
            row.ti_ok = true;
        } catch (const IntegrationError&) {
            row.ti_ok = false;
        } catch (const std::invalid_argument&) {
            // TI anchor is a fixed point for this coupling
            row.ti_ok = false;
        }
    });

    auto emit = [](std::ostream& out, double ratio, const LyapunovResult& r) {
        out << format_double(ratio) << ',' << format_double(r.lambda) << ',' << format_double(r.omega) << ','
            << format_double(r.ratio) << ',' << to_string(r.method) << '\n';
    };
    {
        std::ofstream out(art.path("lyapunov_is.csv"));
        out << "J_over_mu,lambda,omega,ratio,method\n";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            emit(out, ratios[k], rows[k].is_mono);
            emit(out, ratios[k], rows[k].is_analytic);
        }
    }
    {
        std::ofstream out(art.path("lyapunov_ti.csv"));
        out << "J_over_mu,lambda,omega,ratio,method\n";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].ti_ok) {
                emit(out, ratios[k], rows[k].ti_mono);
            } else {
                out << format_double(ratios[k]) << ",nan,nan,nan,monodromy\n";
            }
        }
    }
}

void run_spectrum(const ExperimentConfig& cfg, Artifacts& art) {
    const QuantumSetup q = quantum_setup(cfg);
    write_text(art.path("sector.json"), q.sector.metadata_json());
    const EigenSystem eigen = eigensystem_for(cfg, q.hamiltonian);
    write_spectrum_csv(eth_scatter(eigen, q.sector, Observable::SigmaX1), art.path("spectrum.csv"));
}

void run_project(const ExperimentConfig& cfg, Artifacts& art) {
    const QuantumSetup q = quantum_setup(cfg);
    const EigenSystem eigen = eigensystem_for(cfg, q.hamiltonian);
    const auto family = is_upo_family(q.model, cfg.upo_orbits, cfg.upo_points);
    write_family_csv(family, art.path("upo_family_is.csv"));
    write_trace_csv(upo_trace(cfg.anchor_point(Manifold::IS), q.model, cfg.upo_points), art.path("upo_trace_is.csv"));
    write_trace_csv(upo_trace(cfg.anchor_point(Manifold::TI), q.model, cfg.upo_points), art.path("upo_trace_ti.csv"));

    const ManifoldOverlap is_overlap(q.sector, Manifold::IS);
    const ManifoldOverlap ti_overlap(q.sector, Manifold::TI);
    std::ofstream summary(art.path("projection_summary.csv"));
    summary << "n,E_n,Q_max_is,Q_max_ti,S_scar\n";
    for (const std::size_t n : central_indices(eigen.dimension(), cfg.n_eigenstates)) {
        const Eigen::MatrixXcd psi(eigen.state(n));
        const ProjectionMap is_map = is_overlap.incoherent_map(is_overlap.class_weights(psi), cfg.grid);
        const ProjectionMap ti_map = ti_overlap.incoherent_map(ti_overlap.class_weights(psi), cfg.grid);
        is_map.write_csv(art.path("projection_is_n" + std::to_string(n) + ".csv"));
        ti_map.write_csv(art.path("projection_ti_n" + std::to_string(n) + ".csv"));
        summary << n << ',' << format_double(eigen.energies()[static_cast<Eigen::Index>(n)]) << ','
                << format_double(is_map.max()) << ',' << format_double(ti_map.max()) << ','
                << format_double(scar_score(is_map, family)) << '\n';
    }
}

void run_time_average(const ExperimentConfig& cfg, Artifacts& art) {
    if (cfg.method == "diagonal" && cfg.model().n_sites() > 16) {
        throw BudgetError("diagonal-ensemble averaging needs dense diagonalization, limited to N <= 16; "
                          "use method=explicit");
    }
    const QuantumSetup q = quantum_setup(cfg);
    const ManifoldPoint anchor = cfg.anchor_point(cfg.manifold);
    const SectorState psi0 = coherent_product_state(make_manifold_state(anchor, q.model.n_sites()), q.sector).state;
    const UpoTrace trace = upo_trace(anchor, q.model, cfg.upo_points);
    write_trace_csv(trace, art.path("upo_trace.csv"));

    ProjectionMap map;
    json info;
    info["method"] = cfg.method;
    if (cfg.method == "diagonal") {
        const EigenSystem eigen = eigensystem_for(cfg, q.hamiltonian);
        DiagonalEnsembleResult de = diagonal_ensemble_projection(psi0, eigen, q.sector, cfg.manifold, cfg.grid);
        map = std::move(de.map);
        info["degenerate_blocks"] = de.degenerate_blocks;
    } else {
        const auto n_samples = static_cast<long long>(std::llround(cfg.horizon / cfg.dt));
        if (n_samples < 1) throw std::invalid_argument("horizon must hold at least one step");
        map = ProjectionMap(cfg.grid, cfg.manifold);
        const ManifoldOverlap overlap(q.sector, cfg.manifold);
        auto accumulate = [&](const SectorState& psi) {
            const ProjectionMap m = overlap.incoherent_map(overlap.class_weights(Eigen::MatrixXcd(psi.amplitudes)), cfg.grid);
            for (std::size_t g = 0; g < map.values.size(); ++g) map.values[g] += m.values[g];
        };
        // midpoint samples t = (k + 1/2) dt; sampling from t = 0 overweights the initial peak
        if (q.model.n_sites() <= 16) {
            const EigenSystem eigen = eigensystem_for(cfg, q.hamiltonian);
            for (long long k = 0; k < n_samples; ++k) accumulate(evolve(psi0, eigen, (static_cast<double>(k) + 0.5) * cfg.dt));
        } else {
            SectorState psi = psi0;
            for (long long k = 0; k < n_samples; ++k) {
                psi = krylov_evolve(q.hamiltonian, psi, k == 0 ? 0.5 * cfg.dt : cfg.dt);
                accumulate(psi);
            }
        }
        for (auto& v : map.values) v /= static_cast<double>(n_samples);
        info["samples"] = n_samples;
    }
    map.write_csv(art.path("time_average.csv"));

    const auto [i, k] = map.argmax();
    info["manifold"] = to_string(cfg.manifold);
    info["q_max"] = map.max();
    info["argmax"] = {{"theta", cfg.grid.theta(i)}, {"phi", cfg.grid.phi(k)}};
    info["initial_trace_fixed_point"] = trace.fixed_point;
    info["loop_average_initial_trace"] = loop_average(map, trace);
    write_text(art.path("time_average.json"), info.dump(2));
}

void run_classical_fidelity(const ExperimentConfig& cfg, Artifacts& art) {
    const SpinChainModel model = cfg.model();
    ClassicalFidelityOptions opt;
    opt.samples = cfg.samples;
    opt.delta = cfg.delta;
    opt.horizon_periods = cfg.horizon_periods;
    opt.transient_periods = cfg.transient_periods;
    opt.steps_per_period = cfg.steps_per_period;
    opt.sample_stride = cfg.sample_stride;
    opt.seed = cfg.seed;
    const ClassicalFidelityResult res =
        classical_fidelity_map(model, cfg.anchor_point(Manifold::IS), cfg.classical_grid, opt);
    res.map.write_csv(art.path("classical_fidelity.csv"));

    const auto family = is_upo_family(model, cfg.upo_orbits, cfg.upo_points);
    std::vector<double> loops;
    for (const auto& trace : family) loops.push_back(loop_average(res.map, trace));
    double mean = 0.0;
    for (const double l : loops) mean += l;
    mean /= static_cast<double>(loops.size());
    double dev = 0.0;
    for (const double l : loops) dev = std::max(dev, std::abs(l - mean));

    json info;
    info["q_max"] = res.map.max();
    info["max_change_on_doubling"] = res.max_change_on_doubling;
    info["converged"] = res.converged;
    info["family_loop_averages"] = loops;
    info["family_relative_variation"] = mean > 0.0 ? dev / mean : 0.0;
    write_text(art.path("classical_fidelity.json"), info.dump(2));
}

void run_scar_stats(const ExperimentConfig& cfg, Artifacts& art) {
    const QuantumSetup q = quantum_setup(cfg);
    const EigenSystem eigen = eigensystem_for(cfg, q.hamiltonian);
    const auto family = is_upo_family(q.model, cfg.upo_orbits, cfg.upo_points);
    write_family_csv(family, art.path("upo_family_is.csv"));

    ScarStatisticsOptions opt;
    opt.grid = cfg.grid;
    opt.n_random = cfg.n_random;
    opt.seed = cfg.seed;
    const ScarStats stats = scar_statistics(eigen, q.sector, family, opt);
    write_text(art.path("scar_stats.json"), scar_stats_json(stats, cfg.seed));
    {
        std::ofstream out(art.path("scar_scores_eigen.csv"));
        out << "n,E_n,S_scar\n";
        for (std::size_t n = 0; n < stats.s_scores_eigen.size(); ++n) {
            out << n << ',' << format_double(eigen.energies()[static_cast<Eigen::Index>(n)]) << ','
                << format_double(stats.s_scores_eigen[n]) << '\n';
        }
    }
    {
        std::ofstream out(art.path("scar_scores_random.csv"));
        out << "r,S_scar\n";
        for (std::size_t r = 0; r < stats.s_scores_random.size(); ++r) {
            out << r << ',' << format_double(stats.s_scores_random[r]) << '\n';
        }
    }
}

} // namespace

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::Lyapunov: return "lyapunov";
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Project: return "project";
    case Experiment::TimeAverage: return "time-average";
    case Experiment::ClassicalFidelity: return "classical-fidelity";
    case Experiment::ScarStats: return "scar-stats";
    }
    throw std::logic_error("unknown experiment");
}

Experiment experiment_from_string(const std::string& s) {
    for (const Experiment e : {Experiment::Lyapunov, Experiment::Spectrum, Experiment::Project, Experiment::TimeAverage,
                               Experiment::ClassicalFidelity, Experiment::ScarStats}) {
        if (to_string(e) == s) return e;
    }
    throw std::invalid_argument("unknown experiment '" + s + "'");
}

SpinChainModel ExperimentConfig::model() const { return model_from_key_values(model_keys); }

ManifoldPoint ExperimentConfig::anchor_point(Manifold m) const {
    if (anchor == "y") return {std::numbers::pi / 2, std::numbers::pi / 2, m};
    if (anchor == "mu") return ManifoldPoint::from_vector(model().field_direction(), m);
    return {anchor_theta, anchor_phi, m};
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = to_string(experiment);
    json model_json = json::object();
    for (const auto& [k, v] : model_keys) model_json[k] = v;
    j["model_keys"] = model_json;
    const SpinChainModel m = model();
    j["model"] = {{"mu", {m.mu().x(), m.mu().y(), m.mu().z()}},
                  {"J",
                   {{m.coupling()(0, 0), m.coupling()(0, 1), m.coupling()(0, 2)},
                    {m.coupling()(1, 0), m.coupling()(1, 1), m.coupling()(1, 2)},
                    {m.coupling()(2, 0), m.coupling()(2, 1), m.coupling()(2, 2)}}},
                  {"N", m.n_sites()},
                  {"spin", m.spin().value()}};
    j["seed"] = seed;
    j["grid"] = {grid.n_theta, grid.n_phi};
    j["anchor"] = anchor;
    if (anchor == "custom") j["anchor_angles"] = {anchor_theta, anchor_phi};
    switch (experiment) {
    case Experiment::Lyapunov:
        j["scan_points"] = scan_points;
        j["ratio_range"] = {ratio_min, ratio_max};
        j["classical_N"] = classical_n;
        j["steps_per_period"] = steps_per_period;
        break;
    case Experiment::Spectrum: break;
    case Experiment::Project:
        j["n_eigenstates"] = n_eigenstates;
        j["upo_family"] = {upo_orbits, upo_points};
        break;
    case Experiment::TimeAverage:
        j["manifold"] = to_string(manifold);
        j["method"] = method;
        if (method == "explicit") j["horizon"] = {horizon, dt};
        break;
    case Experiment::ClassicalFidelity:
        j["samples"] = samples;
        j["delta"] = delta;
        j["periods"] = {transient_periods, horizon_periods};
        j["steps_per_period"] = steps_per_period;
        j["sample_stride"] = sample_stride;
        j["classical_grid"] = {classical_grid.n_theta, classical_grid.n_phi};
        j["upo_family"] = {upo_orbits, upo_points};
        break;
    case Experiment::ScarStats:
        j["n_random"] = n_random;
        j["upo_family"] = {upo_orbits, upo_points};
        break;
    }
    return j.dump(2);
}

ExperimentConfig make_experiment_config(Experiment experiment, const KeyValues& kv) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    int grid_theta = cfg.grid.n_theta;
    int grid_phi = cfg.grid.n_phi;
    int cgrid_theta = cfg.classical_grid.n_theta;
    int cgrid_phi = cfg.classical_grid.n_phi;

    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"out", [&](const auto&, const auto& v) { cfg.out_dir = v; }},
        {"seed", [&](const auto& k, const auto& v) {
             const long long s = parse_integer(k, v);
             if (s < 0) throw std::invalid_argument("seed must be non-negative");
             cfg.seed = static_cast<std::uint64_t>(s);
         }},
        {"threads", [&](const auto& k, const auto& v) { cfg.threads = static_cast<unsigned>(parse_int_in(k, v, 0, 4096)); }},
        {"grid_theta", [&](const auto& k, const auto& v) { grid_theta = parse_int_in(k, v, 2, 100000); }},
        {"grid_phi", [&](const auto& k, const auto& v) { grid_phi = parse_int_in(k, v, 1, 100000); }},
        {"anchor", [&](const auto&, const auto& v) {
             if (v != "y" && v != "mu" && v != "custom") throw std::invalid_argument("anchor must be y, mu or custom");
             cfg.anchor = v;
         }},
        {"anchor_theta", [&](const auto& k, const auto& v) { cfg.anchor_theta = parse_double(k, v); }},
        {"anchor_phi", [&](const auto& k, const auto& v) { cfg.anchor_phi = parse_double(k, v); }},
        {"manifold", [&](const auto&, const auto& v) { cfg.manifold = manifold_from_string(v); }},
        {"scan_points", [&](const auto& k, const auto& v) { cfg.scan_points = parse_int_in(k, v, 1, 10000); }},
        {"ratio_min", [&](const auto& k, const auto& v) { cfg.ratio_min = parse_positive(k, v); }},
        {"ratio_max", [&](const auto& k, const auto& v) { cfg.ratio_max = parse_positive(k, v); }},
        {"classical_N", [&](const auto& k, const auto& v) { cfg.classical_n = parse_int_in(k, v, 4, 100000); }},
        {"steps_per_period", [&](const auto& k, const auto& v) { cfg.steps_per_period = parse_int_in(k, v, 1, 100000000); }},
        {"n_eigenstates", [&](const auto& k, const auto& v) { cfg.n_eigenstates = parse_int_in(k, v, 1, 100000000); }},
        {"method", [&](const auto&, const auto& v) {
             if (v != "diagonal" && v != "explicit") throw std::invalid_argument("method must be diagonal or explicit");
             cfg.method = v;
         }},
        {"horizon", [&](const auto& k, const auto& v) { cfg.horizon = parse_positive(k, v); }},
        {"dt", [&](const auto& k, const auto& v) { cfg.dt = parse_positive(k, v); }},
        {"samples", [&](const auto& k, const auto& v) { cfg.samples = parse_int_in(k, v, 1, 100000000); }},
        {"delta", [&](const auto& k, const auto& v) { cfg.delta = parse_non_negative(k, v); }},
        {"horizon_periods", [&](const auto& k, const auto& v) { cfg.horizon_periods = parse_positive(k, v); }},
        {"transient_periods", [&](const auto& k, const auto& v) { cfg.transient_periods = parse_non_negative(k, v); }},
        {"sample_stride", [&](const auto& k, const auto& v) { cfg.sample_stride = parse_int_in(k, v, 1, 100000000); }},
        {"classical_grid_theta", [&](const auto& k, const auto& v) { cgrid_theta = parse_int_in(k, v, 2, 100000); }},
        {"classical_grid_phi", [&](const auto& k, const auto& v) { cgrid_phi = parse_int_in(k, v, 1, 100000); }},
        {"n_random", [&](const auto& k, const auto& v) {
             const long long n = parse_integer(k, v);
             if (n < 100) throw std::invalid_argument("n_random must be at least 100 for stable estimates");
             if (n > 100000000) throw std::invalid_argument("n_random too large");
             cfg.n_random = static_cast<int>(n);
         }},
        {"upo_orbits", [&](const auto& k, const auto& v) { cfg.upo_orbits = parse_int_in(k, v, 1, 100000); }},
        {"upo_points", [&](const auto& k, const auto& v) { cfg.upo_points = parse_int_in(k, v, 1, 10000000); }},
        {"cache", [&](const auto&, const auto& v) { cfg.cache = v; }},
    };

    for (const auto& [key, value] : kv) {
        if (is_model_key(key)) {
            cfg.model_keys[key] = value;
            continue;
        }
        const auto it = setters.find(key);
        if (it == setters.end()) throw std::invalid_argument("unknown config key '" + key + "'");
        it->second(key, value);
    }
    cfg.grid = PhaseSpaceGrid(grid_theta, grid_phi);
    cfg.classical_grid = PhaseSpaceGrid(cgrid_theta, cgrid_phi);
    if (cfg.ratio_min > cfg.ratio_max) throw std::invalid_argument("ratio_min exceeds ratio_max");
    if (cfg.out_dir.empty()) throw std::invalid_argument("output directory must be non-empty");
    // validate the model block eagerly
    (void)cfg.model();
    return cfg;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

RunResult run(const ExperimentConfig& config) {
    if (config.threads > 0) set_thread_count(config.threads);
    Artifacts art(config.out_dir);
    switch (config.experiment) {
    case Experiment::Lyapunov: run_lyapunov(config, art); break;
    case Experiment::Spectrum: run_spectrum(config, art); break;
    case Experiment::Project: run_project(config, art); break;
    case Experiment::TimeAverage: run_time_average(config, art); break;
    case Experiment::ClassicalFidelity: run_classical_fidelity(config, art); break;
    case Experiment::ScarStats: run_scar_stats(config, art); break;
    }

    json manifest;
    manifest["experiment"] = to_string(config.experiment);
    manifest["version"] = SCARS_VERSION;
    manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION);
    manifest["seed"] = config.seed;
    manifest["config"] = json::parse(config.to_json());
    json outputs = json::array();
    for (const auto& name : art.names()) {
        outputs.push_back({{"file", name}, {"sha256", sha256_file(join(art.dir(), name))}});
    }
    manifest["outputs"] = outputs;

    RunResult result;
    result.outputs = art.names();
    result.manifest_path = join(art.dir(), "manifest.json");
    write_text(result.manifest_path, manifest.dump(2));
    return result;
}

} // namespace scars
