#pragma once

#include <stdexcept>
#include <string>

namespace seqae {

// Error hierarchy. Every error the library raises derives from seqae::Error so
// the CLI can report the failing stage with a single catch.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error { public: using Error::Error; };
class ArgumentError   : public Error { public: using Error::Error; };
class ConfigError     : public Error { public: using Error::Error; };
class LookupError     : public Error { public: using Error::Error; };
class DimensionError  : public Error { public: using Error::Error; };
class FormatError     : public Error { public: using Error::Error; };
class LengthError     : public Error { public: using Error::Error; };

class CapacityError : public Error {
public:
    CapacityError(const std::string& what, unsigned long long required_bytes)
        : Error(what), required_bytes_(required_bytes) {}
    unsigned long long required_bytes() const noexcept { return required_bytes_; }

private:
    unsigned long long required_bytes_;
};

class NumericError : public Error {
public:
    NumericError(const std::string& what, std::size_t layer)
        : Error(what + " (layer " + std::to_string(layer) + ")"), layer_(layer) {}
    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

class TrainingError : public Error {
public:
    TrainingError(const std::string& what, std::size_t epoch)
        : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

} // namespace seqae
