#include "scars/model.hpp"
#include "scars/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scars {

std::string to_string(Manifold m) { return m == Manifold::TI ? "TI" : "IS"; }

std::string to_string(Preset p) {
    switch (p) {
    case Preset::Ising: return "Ising";
    case Preset::XX: return "XX";
    case Preset::XXZ: return "XXZ";
    case Preset::Custom: return "Custom";
    }
    return "Custom";
}

Manifold manifold_from_string(const std::string& s) {
    if (s == "TI" || s == "ti") return Manifold::TI;
    if (s == "IS" || s == "is") return Manifold::IS;
    throw std::invalid_argument("unknown manifold '" + s + "' (expected TI or IS)");
}

Preset preset_from_string(const std::string& s) {
    if (s == "Ising" || s == "ising") return Preset::Ising;
    if (s == "XX" || s == "xx") return Preset::XX;
    if (s == "XXZ" || s == "xxz") return Preset::XXZ;
    if (s == "Custom" || s == "custom") return Preset::Custom;
    throw std::invalid_argument("unknown preset '" + s + "' (expected Ising, XX, XXZ or Custom)");
}

SpinMagnitude::SpinMagnitude(int twice_spin) : twice_(twice_spin) {
    if (twice_spin < 1) throw std::invalid_argument("spin magnitude must be at least 1/2");
}

SpinMagnitude SpinMagnitude::from_double(double s) {
    const double twice = 2.0 * s;
    const double rounded = std::round(twice);
    if (!std::isfinite(s) || std::abs(twice - rounded) > 1e-12 || rounded < 1.0) {
        throw std::invalid_argument("spin must be a positive half-integer");
    }
    return SpinMagnitude(static_cast<int>(rounded));
}

SpinChainModel::SpinChainModel(Vec3 mu, Mat3 coupling, int n_sites, SpinMagnitude spin)
    : mu_(std::move(mu)), coupling_(std::move(coupling)), n_sites_(n_sites), spin_(spin) {
    if (!mu_.allFinite()) throw std::invalid_argument("field must be finite");
    if (!coupling_.allFinite()) throw std::invalid_argument("coupling entries must be finite");
    if (n_sites_ < 2) throw std::invalid_argument("chain needs at least 2 sites");
}

Vec3 SpinChainModel::field_direction() const {
    const double norm = mu_.norm();
    if (norm == 0.0) throw std::invalid_argument("field direction undefined for zero field");
    return mu_ / norm;
}

bool SpinChainModel::coupling_is_symmetric(double tol) const {
    return (coupling_ - coupling_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

void SpinChainModel::require_is_compatible() const {
    if (n_sites_ < 4 || n_sites_ % 4 != 0) {
        throw std::invalid_argument("IS states need N to be a positive multiple of 4, got N = " +
                                    std::to_string(n_sites_));
    }
    if (mu_.norm() == 0.0) throw std::invalid_argument("IS states need a nonzero field");
}

SpinChainModel SpinChainModel::with_scaled_coupling(double factor) const {
    return SpinChainModel(mu_, coupling_ * factor, n_sites_, spin_);
}

SpinChainModel SpinChainModel::with_sites(int n_sites) const {
    return SpinChainModel(mu_, coupling_, n_sites, spin_);
}

SpinChainModel make_model(Preset preset, const PresetParams& p) {
    Mat3 j = Mat3::Zero();
    switch (preset) {
    case Preset::Ising:
        j(2, 2) = p.jzz;
        break;
    case Preset::XX:
        if (p.jxx != p.jyy) throw std::invalid_argument("XX preset requires Jxx == Jyy");
        j(0, 0) = j(1, 1) = p.jxx;
        break;
    case Preset::XXZ:
        if (p.jxx != p.jyy) throw std::invalid_argument("XXZ preset requires Jxx == Jyy");
        j(0, 0) = j(1, 1) = p.jxx;
        j(2, 2) = p.jzz;
        break;
    case Preset::Custom:
        j = p.custom_coupling;
        break;
    }
    return SpinChainModel(p.mu, j, p.n_sites, p.spin);
}

SpinChainModel reference_ising(int n_sites) {
    PresetParams p;
    p.jzz = -1.8;
    p.n_sites = n_sites;
    return make_model(Preset::Ising, p);
}

SpinChainModel reference_xxz(int n_sites) {
    PresetParams p;
    p.jxx = p.jyy = -0.4;
    p.jzz = -1.8;
    p.n_sites = n_sites;
    return make_model(Preset::XXZ, p);
}

SpinChainModel reference_xx(int n_sites) {
    PresetParams p;
    p.jxx = p.jyy = -1.4;
    p.n_sites = n_sites;
    return make_model(Preset::XX, p);
}

Vec3 spherical_to_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::pair<double, double> vector_to_spherical(const Vec3& v) {
    const Vec3 n = v.normalized();
    const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
    double phi = std::atan2(n.y(), n.x());
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    return {theta, phi};
}

Vec3 ManifoldPoint::unit_vector() const { return spherical_to_vector(theta, phi); }

ManifoldPoint ManifoldPoint::from_vector(const Vec3& v, Manifold manifold) {
    const auto [theta, phi] = vector_to_spherical(v);
    return {theta, phi, manifold};
}

SpinConfiguration::SpinConfiguration(std::vector<Vec3> orientations) : spins_(std::move(orientations)) {
    for (const auto& s : spins_) {
        if (!s.allFinite() || std::abs(s.norm() - 1.0) > norm_tolerance) {
            throw std::invalid_argument("spin orientations must be unit vectors");
        }
    }
}

int sublattice_sign(Manifold manifold, int site) {
    if (manifold == Manifold::TI) return 1;
    return (site % 4) < 2 ? 1 : -1;
}

SpinConfiguration make_ti_state(const ManifoldPoint& anchor, int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("n_sites must be positive");
    return SpinConfiguration(std::vector<Vec3>(static_cast<std::size_t>(n_sites), anchor.unit_vector()));
}

SpinConfiguration make_is_state(const ManifoldPoint& anchor, int n_sites) {
    if (n_sites < 4 || n_sites % 4 != 0) {
        throw std::invalid_argument("IS states need N to be a positive multiple of 4, got N = " +
                                    std::to_string(n_sites));
    }
    const Vec3 s = anchor.unit_vector();
    std::vector<Vec3> spins;
    spins.reserve(static_cast<std::size_t>(n_sites));
    for (int j = 0; j < n_sites; ++j) spins.push_back(sublattice_sign(Manifold::IS, j) * s);
    return SpinConfiguration(std::move(spins));
}

SpinConfiguration make_manifold_state(const ManifoldPoint& anchor, int n_sites) {
    return anchor.manifold == Manifold::TI ? make_ti_state(anchor, n_sites) : make_is_state(anchor, n_sites);
}

double classical_energy(const SpinConfiguration& config, const SpinChainModel& model) {
    const std::size_t n = config.size();
    if (static_cast<int>(n) != model.n_sites()) {
        throw std::invalid_argument("configuration size does not match the chain length");
    }
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& s = config[j];
        e += model.mu().dot(s) + s.dot(model.coupling() * config[(j + 1) % n]);
    }
    return model.spin().value() * e;
}

double UpoDescriptor::frequency() const {
    if (!(period > 0.0)) throw std::invalid_argument("UPO period must be positive");
    return 2.0 * std::numbers::pi / period;
}

namespace {

constexpr std::array<const char*, 9> coupling_keys = {"Jxx", "Jxy", "Jxz", "Jyx", "Jyy",
                                                      "Jyz", "Jzx", "Jzy", "Jzz"};

} // namespace

bool is_model_key(const std::string& key) {
    if (key == "preset" || key == "mu_x" || key == "mu_y" || key == "mu_z" || key == "N" || key == "spin") {
        return true;
    }
    return std::find(coupling_keys.begin(), coupling_keys.end(), key) != coupling_keys.end();
}

SpinChainModel model_from_key_values(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (!is_model_key(key)) throw std::invalid_argument("unknown model key '" + key + "'");
    }
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    const Preset preset = get("preset") ? preset_from_string(*get("preset")) : Preset::Ising;

    PresetParams p;
    if (auto* v = get("mu_x")) p.mu.x() = parse_double("mu_x", *v);
    if (auto* v = get("mu_y")) p.mu.y() = parse_double("mu_y", *v);
    if (auto* v = get("mu_z")) p.mu.z() = parse_double("mu_z", *v);
    if (auto* v = get("N")) {
        const long long n = parse_integer("N", *v);
        if (n < 2 || n > 100000) throw std::invalid_argument("N out of range");
        p.n_sites = static_cast<int>(n);
    }
    if (auto* v = get("spin")) p.spin = SpinMagnitude::from_double(parse_double("spin", *v));

    auto allow_only = [&](std::initializer_list<const char*> allowed) {
        for (const char* key : coupling_keys) {
            if (!get(key)) continue;
            bool ok = false;
            for (const char* a : allowed) ok = ok || std::string(a) == key;
            if (!ok) {
                throw std::invalid_argument(std::string("key '") + key + "' is not valid for preset " +
                                            to_string(preset));
            }
        }
    };

    switch (preset) {
    case Preset::Ising:
        allow_only({"Jzz"});
        p.jzz = get("Jzz") ? parse_double("Jzz", *get("Jzz")) : -1.8;
        break;
    case Preset::XX:
        allow_only({"Jxx", "Jyy"});
        p.jxx = get("Jxx") ? parse_double("Jxx", *get("Jxx")) : -1.4;
        p.jyy = get("Jyy") ? parse_double("Jyy", *get("Jyy")) : p.jxx;
        break;
    case Preset::XXZ:
        allow_only({"Jxx", "Jyy", "Jzz"});
        p.jxx = get("Jxx") ? parse_double("Jxx", *get("Jxx")) : -0.4;
        p.jyy = get("Jyy") ? parse_double("Jyy", *get("Jyy")) : p.jxx;
        p.jzz = get("Jzz") ? parse_double("Jzz", *get("Jzz")) : -1.8;
        break;
    case Preset::Custom:
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const char* key = coupling_keys[static_cast<std::size_t>(3 * a + b)];
                if (auto* v = get(key)) p.custom_coupling(a, b) = parse_double(key, *v);
            }
        }
        break;
    }
    return make_model(preset, p);
}

SpinChainModel load_model_config(const std::string& path) {
    return model_from_key_values(read_key_value_file(path));
}

} // namespace scars
