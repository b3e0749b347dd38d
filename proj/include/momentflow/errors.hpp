#pragma once

#include <stdexcept>
#include <string>

namespace momentflow {

// Exit-code contract shared by the library and the CLI.
enum class ErrorKind { Domain = 2, Config = 3, Capacity = 4, Internal = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};

struct CapacityError : Error {
    explicit CapacityError(const std::string& w) : Error(ErrorKind::Capacity, w) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

// A higher moment was needed but the closure policy cannot supply it.
struct ClosureError : ConfigError {
    explicit ClosureError(const std::string& w) : ConfigError(w) {}
};

// 1 + U''/(m w^2) fell below the breakdown threshold.
struct AdiabaticBreakdown : DomainError {
    AdiabaticBreakdown(const std::string& w, double q) : DomainError(w), q_(q) {}
    double q() const noexcept { return q_; }

private:
    double q_;
};

// Adaptive step size fell below the floor.
struct StiffnessError : DomainError {
    StiffnessError(const std::string& w, double t) : DomainError(w), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

}  // namespace momentflow
