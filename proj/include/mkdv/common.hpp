#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mkdv {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

/// Invalid or inconsistent configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mkdv
