#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rbm/kernels.hpp"
#include "rbm/mark_law.hpp"

namespace rbm {

// Flat key-value configuration (sections kernel.*, marks.*, experiment.*).
// Lines look like `kernel.variant = optimized`; '#' starts a comment.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::uint64_t> get_uint_list(const std::string& key) const;

    // Builders for the domain objects described by the kernel.* and marks.*
    // sections.  `n_override` replaces kernel.n when nonzero (the sweep
    // drivers vary n while the rest of the kernel is fixed).
    KernelSpec kernel(std::uint64_t n_override = 0) const;
    MarkLaw marks() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace rbm
