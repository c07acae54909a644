#pragma once

#include <stdexcept>
#include <string>

namespace traj {

// Malformed or internally inconsistent input data: bad line, dangling
// reference, duplicate id, empty author name.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A fit whose normal system is singular, whose change-point window is empty,
// or whose data cannot identify the requested parameters.
class DegenerateFit : public std::runtime_error {
public:
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};

// Numerical maximization produced no valid candidate at all.
class FitFailure : public std::runtime_error {
public:
    explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace traj
