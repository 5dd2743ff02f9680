#pragma once

#include <stdexcept>
#include <string>

namespace nuinarch {

// Malformed or inconsistent external input: files, tables, series content.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation that cannot produce a usable result: non-convergence,
// degenerate denominators, invalid floating-point state.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nuinarch
