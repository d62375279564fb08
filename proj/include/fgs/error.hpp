#pragma once

#include <stdexcept>
#include <string>

namespace fgs {

/// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Config-file problems; carries the offending line when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Fixed-point coupling failed to reach tolerance within the iteration cap.
class IterationError : public Error {
public:
    IterationError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// File-format or I/O failures (snapshots, CSV).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fgs
