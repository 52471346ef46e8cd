#include "scars/io.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <stdexcept>

namespace scars {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), ptr);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + path + "': " + ec.message());
}

} // namespace scars
