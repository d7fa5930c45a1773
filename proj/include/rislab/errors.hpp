#pragma once

#include <stdexcept>
#include <string>

namespace rislab {

enum class ConfigErrorKind { missing_file, syntax, unknown_key, invalid_value };

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string key, const std::string& message)
        : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}

    ConfigErrorKind kind() const { return kind_; }
    const std::string& key() const { return key_; }

private:
    ConfigErrorKind kind_;
    std::string key_;
};

}  // namespace rislab
