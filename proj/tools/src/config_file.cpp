#include "config_file.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "ssakit/errors.hpp"

namespace ssacli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, std::size_t line) {
    T v{};
    const auto* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) throw ssa::FormatError(line, "bad value '" + text + "'");
    return v;
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, ssa::SessionConfig& config) {
    std::ifstream in(path);
    if (!in) throw ssa::IoError("cannot open config file '" + path.string() + "'");
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const auto text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ssa::FormatError(line, "expected key = value");
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (key == "cache_budget") config.cache_budget = parse_number<std::size_t>(value, line);
        else if (key == "lanczos_tol") config.lanczos_tol = parse_number<double>(value, line);
        else if (key == "lanczos_max_restarts") config.lanczos_max_restarts = parse_number<std::size_t>(value, line);
        else if (key == "lanczos_default_neig") config.lanczos_default_neig = parse_number<std::size_t>(value, line);
        else if (key == "lanczos_seed") config.lanczos_seed = parse_number<std::uint64_t>(value, line);
        else if (key == "auto_eigen_max_dim") config.auto_eigen_max_dim = parse_number<std::size_t>(value, line);
        else if (key == "auto_eigen_neig_fraction") config.auto_eigen_neig_fraction = parse_number<double>(value, line);
        else throw ssa::ParameterError("unknown config key '" + key + "' (line " + std::to_string(line) + ")");
    }
}

}  // namespace ssacli
