#ifndef SKG_COMMON_HPP
#define SKG_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace skg {

using cd = std::complex<double>;
using cvec = std::vector<cd>;
using dvec = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;

// Bad user input: unknown keys, out-of-domain parameters. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure: quadrature non-convergence, step-size guard,
// truncation guard. CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skg

#endif
