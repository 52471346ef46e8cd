#include "scars/sector.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace scars {

namespace {

constexpr std::uint32_t unassigned = std::numeric_limits<std::uint32_t>::max();

std::uint32_t reverse_bits(std::uint32_t x, int n) {
    std::uint32_t r = 0;
    for (int j = 0; j < n; ++j) r |= ((x >> j) & 1u) << (n - 1 - j);
    return r;
}

} // namespace

SymmetrySector::SymmetrySector(int n_sites, int max_sites) : n_sites_(n_sites) {
    if (n_sites < 4 || n_sites % 4 != 0) {
        throw std::invalid_argument("symmetry sector needs N to be a positive multiple of 4, got N = " +
                                    std::to_string(n_sites));
    }
    if (n_sites > max_sites || n_sites > 30) {
        throw BudgetError("N = " + std::to_string(n_sites) + " exceeds the sector size limit of N <= " +
                          std::to_string(std::min(max_sites, 30)));
    }
    mask_ = (n_sites == 32) ? 0xffffffffu : ((1u << n_sites) - 1u);
    const std::size_t full = std::size_t{1} << n_sites;
    full_index_.assign(full, unassigned);

    std::vector<std::uint32_t> orbit;
    orbit.reserve(static_cast<std::size_t>(group_order()));
    for (std::size_t x = 0; x < full; ++x) {
        if (full_index_[x] != unassigned) continue;
        const auto idx = static_cast<std::uint32_t>(representatives_.size());
        const auto state = static_cast<std::uint32_t>(x);
        orbit.clear();
        for (int g = 0; g < group_order(); ++g) {
            const std::uint32_t y = apply(g, state);
            if (full_index_[y] == unassigned) {
                full_index_[y] = idx;
                orbit.push_back(y);
            }
        }
        representatives_.push_back(state);
        orbit_sizes_.push_back(static_cast<std::uint32_t>(orbit.size()));
        norms_.push_back(std::sqrt(static_cast<double>(orbit.size())));
    }
}

std::uint32_t SymmetrySector::translate(std::uint32_t state, int shift) const {
    const int k = ((shift % n_sites_) + n_sites_) % n_sites_;
    if (k == 0) return state;
    return ((state << k) | (state >> (n_sites_ - k))) & mask_;
}

std::uint32_t SymmetrySector::reflect(std::uint32_t state) const {
    // j -> N-1-j followed by a shift of 2 gives j -> 1-j
    return translate(reverse_bits(state, n_sites_), 2);
}

std::uint32_t SymmetrySector::apply(int element, std::uint32_t state) const {
    const int translations = n_sites_ / 4;
    if (element < translations) return translate(state, 4 * element);
    return translate(reflect(state), 4 * (element - translations));
}

std::uint32_t SymmetrySector::canonical(std::uint32_t state) const {
    std::uint32_t best = state;
    for (int g = 1; g < group_order(); ++g) best = std::min(best, apply(g, state));
    return best;
}

std::vector<std::string> SymmetrySector::generators() const { return {"translation:4", "mirror:j->1-j"}; }

std::string SymmetrySector::metadata_json() const {
    nlohmann::ordered_json j;
    j["N"] = n_sites_;
    j["dimension"] = dimension();
    j["generators"] = generators();
    return j.dump(2);
}

} // namespace scars
