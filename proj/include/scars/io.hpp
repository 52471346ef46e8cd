#pragma once

#include <string>

namespace scars {

/// Shortest round-trip decimal representation; locale independent.
std::string format_double(double x);

void ensure_directory(const std::string& path);

} // namespace scars
