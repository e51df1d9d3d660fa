#pragma once

#include <stdexcept>
#include <string>

namespace rftpi {

struct NonZeroDephasing : std::domain_error {
    explicit NonZeroDephasing(const std::string& what) : std::domain_error(what) {}
};

struct DivisionDomain : std::domain_error {
    explicit DivisionDomain(const std::string& what) : std::domain_error(what) {}
};

struct GridTooCoarse : std::invalid_argument {
    explicit GridTooCoarse(const std::string& what) : std::invalid_argument(what) {}
};

struct NegativeInput : std::invalid_argument {
    explicit NegativeInput(const std::string& what) : std::invalid_argument(what) {}
};

struct NormalizationError : std::invalid_argument {
    explicit NormalizationError(const std::string& what) : std::invalid_argument(what) {}
};

struct StepTooLarge : std::invalid_argument {
    explicit StepTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptyWindow : std::invalid_argument {
    explicit EmptyWindow(const std::string& what) : std::invalid_argument(what) {}
};

struct IllConditioned : std::runtime_error {
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateAbscissa : std::invalid_argument {
    explicit DuplicateAbscissa(const std::string& what) : std::invalid_argument(what) {}
};

// Parse failure in a config or histogram file; carries the offending location.
struct FormatError : std::runtime_error {
    FormatError(const std::string& what, long location)
        : std::runtime_error(what + " (at " + std::to_string(location) + ")"),
          location(location) {}
    long location;
};

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    explicit ConfigError(const std::string& what) : std::runtime_error(what), line(-1) {}
    int line;
};

}  // namespace rftpi
