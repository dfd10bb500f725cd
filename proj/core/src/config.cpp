#include "rbm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not a key = value pair");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
        }
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a number: " + raw);
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a nonnegative integer: " + raw);
    }
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError("config key " + key + " is not a boolean: " + raw);
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<std::uint64_t> out;
    std::istringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + " has a non-integer entry: " + item);
        }
    }
    if (out.empty()) throw ConfigError("config key " + key + " lists no values");
    return out;
}

KernelSpec Config::kernel(std::uint64_t n_override) const {
    const std::string variant = get_string("kernel.variant", "benchmark");
    const double hurst = get_double("kernel.hurst", 0.15);
    const std::uint64_t n = n_override != 0 ? n_override : get_uint("kernel.n", 1);
    if (variant == "benchmark") return KernelSpec::benchmark(hurst, n);
    if (variant == "optimized") {
        const double beta = get_double("kernel.beta", KernelSpec::optimal_beta(hurst));
        return KernelSpec::optimized(hurst, beta, n);
    }
    if (variant == "shift") {
        return KernelSpec::general_shift(hurst, get_double("kernel.alpha"), n);
    }
    if (variant == "limit") return KernelSpec::limit(hurst);
    throw ConfigError("kernel.variant must be benchmark|optimized|shift|limit, got " + variant);
}

MarkLaw Config::marks() const {
    const std::string family = get_string("marks.family", "gaussian");
    const double sigma_p = get_double("marks.sigma_p", 1.0);
    const double sigma_v = get_double("marks.sigma_v", 1.0);
    if (family == "gaussian") {
        return MarkLaw::gaussian(sigma_p, sigma_v, get_double("marks.rho", 0.0));
    }
    if (family == "scaled-sign") {
        double latent;
        if (has("marks.gaussian_rho")) {
            latent = get_double("marks.gaussian_rho");
        } else {
            // invert the arcsine law when only the target correlation is given
            latent = std::sin(0.5 * M_PI * get_double("marks.rho", 0.0));
        }
        return MarkLaw::scaled_sign(sigma_p, sigma_v, latent);
    }
    throw ConfigError("marks.family must be gaussian|scaled-sign, got " + family);
}

} // namespace rbm
