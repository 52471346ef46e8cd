#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scars {

/// Raised when a request exceeds a configured size limit.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Symmetric sector of a periodic spin-1/2 chain under the group generated by
 * translation by 4 sites and the bond-centred mirror j -> 1 - j (mod N).
 *
 * Basis states are N-bit integers, bit j = 1 meaning site j is down. Each
 * sector basis vector is the normalized uniform superposition over one orbit;
 * its label is the smallest integer in the orbit. Only the trivial character
 * is kept, so every orbit contributes exactly one basis vector.
 */
class SymmetrySector {
  public:
    static constexpr int default_max_sites = 20;

    explicit SymmetrySector(int n_sites, int max_sites = default_max_sites);

    int n_sites() const { return n_sites_; }
    std::size_t dimension() const { return representatives_.size(); }
    std::span<const std::uint32_t> representatives() const { return representatives_; }
    std::uint32_t orbit_size(std::size_t index) const { return orbit_sizes_[index]; }
    /// sqrt(orbit size): the sector vector has amplitude 1/norm on each orbit member.
    double norm(std::size_t index) const { return norms_[index]; }

    /// Sector index of the orbit containing a computational basis state.
    std::size_t index_of(std::uint32_t state) const { return full_index_[state]; }

    int group_order() const { return n_sites_ / 2; }
    std::uint32_t apply(int element, std::uint32_t state) const;
    std::uint32_t canonical(std::uint32_t state) const;

    std::uint32_t translate(std::uint32_t state, int shift) const;
    std::uint32_t reflect(std::uint32_t state) const;

    std::vector<std::string> generators() const;
    /// {"N": ..., "dimension": ..., "generators": [...]}
    std::string metadata_json() const;

  private:
    int n_sites_;
    std::uint32_t mask_;
    std::vector<std::uint32_t> representatives_;
    std::vector<std::uint32_t> orbit_sizes_;
    std::vector<double> norms_;
    std::vector<std::uint32_t> full_index_;
};

} // namespace scars
