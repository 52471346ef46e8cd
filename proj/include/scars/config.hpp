#pragma once

#include <map>
#include <string>

namespace scars {

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. '#' starts a comment; blank lines are skipped.
/// Duplicate keys and lines without '=' throw std::invalid_argument.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_value_file(const std::string& path);

double parse_double(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);

} // namespace scars
