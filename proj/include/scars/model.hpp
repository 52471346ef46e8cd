#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace scars {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Manifold { TI, IS };

enum class Preset { Ising, XX, XXZ, Custom };

std::string to_string(Manifold m);
std::string to_string(Preset p);
Manifold manifold_from_string(const std::string& s);
Preset preset_from_string(const std::string& s);

/// Spin magnitude stored as the integer 2s, so s = 1/2 is exactly representable.
class SpinMagnitude {
  public:
    explicit SpinMagnitude(int twice_spin);
    static SpinMagnitude from_double(double s);

    int twice() const { return twice_; }
    double value() const { return 0.5 * twice_; }
    bool is_half() const { return twice_ == 1; }

    friend bool operator==(SpinMagnitude, SpinMagnitude) = default;

  private:
    int twice_;
};

/**
 * Homogeneous nearest-neighbour spin chain with periodic boundaries,
 *
 *   H = sum_j ( mu . S_j + (1/s) S_j J S_{j+1} ).
 *
 * The coupling matrix is stored as given; presets produce symmetric J.
 */
class SpinChainModel {
  public:
    SpinChainModel(Vec3 mu, Mat3 coupling, int n_sites, SpinMagnitude spin = SpinMagnitude(1));

    const Vec3& mu() const { return mu_; }
    const Mat3& coupling() const { return coupling_; }
    int n_sites() const { return n_sites_; }
    SpinMagnitude spin() const { return spin_; }

    double field_strength() const { return mu_.norm(); }
    /// Unit vector along the field; throws if the field vanishes.
    Vec3 field_direction() const;
    bool coupling_is_symmetric(double tol = 1e-14) const;

    /// Throws unless the chain can host IS states (N >= 4, N % 4 == 0, |mu| > 0).
    void require_is_compatible() const;

    /// Same model with the coupling matrix multiplied by `factor`.
    SpinChainModel with_scaled_coupling(double factor) const;
    SpinChainModel with_sites(int n_sites) const;

  private:
    Vec3 mu_;
    Mat3 coupling_;
    int n_sites_;
    SpinMagnitude spin_;
};

struct PresetParams {
    Vec3 mu{2.4, 0.0, 0.4};
    double jxx = 0.0;
    double jyy = 0.0;
    double jzz = 0.0;
    /// Only read for Preset::Custom.
    Mat3 custom_coupling = Mat3::Zero();
    int n_sites = 12;
    SpinMagnitude spin = SpinMagnitude(1);
};

/// Ising: J = Jzz z(x)z. XX: Jxx = Jyy. XXZ: Jxx = Jyy plus Jzz. Custom: full matrix.
SpinChainModel make_model(Preset preset, const PresetParams& params);

/// Parameters used throughout the reference figures (mu = (2.4, 0, 0.4)).
SpinChainModel reference_ising(int n_sites);  // Jzz = -1.8
SpinChainModel reference_xxz(int n_sites);    // Jxx = Jyy = -0.4, Jzz = -1.8
SpinChainModel reference_xx(int n_sites);     // Jxx = Jyy = -1.4

/// Point of a TI or IS manifold. theta from +z, phi from +x in the xy-plane.
struct ManifoldPoint {
    double theta = 0.0;
    double phi = 0.0;
    Manifold manifold = Manifold::IS;

    Vec3 unit_vector() const;
    static ManifoldPoint from_vector(const Vec3& v, Manifold manifold);
};

Vec3 spherical_to_vector(double theta, double phi);
/// Returns (theta, phi) with phi in [0, 2 pi).
std::pair<double, double> vector_to_spherical(const Vec3& v);

class SpinConfiguration {
  public:
    /// Every orientation must have unit norm within 1e-12.
    explicit SpinConfiguration(std::vector<Vec3> orientations);

    std::size_t size() const { return spins_.size(); }
    const Vec3& operator[](std::size_t j) const { return spins_[j]; }
    std::span<const Vec3> orientations() const { return spins_; }

    static constexpr double norm_tolerance = 1e-12;

  private:
    std::vector<Vec3> spins_;
};

/// Sign pattern (+,+,-,-,...) of the IS manifold; all +1 for TI.
int sublattice_sign(Manifold manifold, int site);

SpinConfiguration make_ti_state(const ManifoldPoint& anchor, int n_sites);
SpinConfiguration make_is_state(const ManifoldPoint& anchor, int n_sites);
SpinConfiguration make_manifold_state(const ManifoldPoint& anchor, int n_sites);

/// E = s sum_j ( mu . s_j + s_j J s_{j+1} ), periodic.
double classical_energy(const SpinConfiguration& config, const SpinChainModel& model);

struct UpoDescriptor {
    ManifoldPoint anchor;
    double period = 0.0;

    double frequency() const;
};

/// Flat key-value model description: preset, mu_x, mu_y, mu_z, Jxx..Jzz, N, spin.
/// Unknown keys throw.
SpinChainModel model_from_key_values(const std::map<std::string, std::string>& kv);
SpinChainModel load_model_config(const std::string& path);

/// Keys understood by model_from_key_values.
bool is_model_key(const std::string& key);

} // namespace scars
