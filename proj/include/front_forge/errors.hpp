#pragma once

#include <stdexcept>
#include <string>

namespace front_forge {

/// @brief Invalid configuration; carries the dotted path of the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::invalid_argument(key_path.empty() ? what : key_path + ": " + what),
          key_path_(std::move(key_path)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// @brief Numerical failure (blow-up, solver breakdown). Optionally points at a snapshot.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::string snapshot = {})
        : std::runtime_error(what), snapshot_(std::move(snapshot)) {}

    const std::string& snapshot() const noexcept { return snapshot_; }
    void set_snapshot(std::string path) { snapshot_ = std::move(path); }

private:
    std::string snapshot_;
};

}  // namespace front_forge
