#include "scars/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scars {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!out.emplace(key, value).second) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        throw std::invalid_argument("key '" + key + "': expected a finite number, got '" + value + "'");
    }
    return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
    long long out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

} // namespace scars
