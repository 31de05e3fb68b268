#pragma once

#include <stdexcept>
#include <string>

namespace findex {

// Two curves (or a curve and a fit) do not live on the same grid.
class IncompatibleGrids : public std::invalid_argument {
public:
    explicit IncompatibleGrids(const std::string& what)
        : std::invalid_argument(what) {}
};

// An input is degenerate for the requested operation (zero norm, empty set).
class DegenerateInput : public std::invalid_argument {
public:
    explicit DegenerateInput(const std::string& what)
        : std::invalid_argument(what) {}
};

// A linear solve or eigendecomposition produced non-finite or out-of-tolerance
// results and no fallback succeeded.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what)
        : std::runtime_error(what) {}
};

// A computation was requested before its prerequisite was built.
class DependencyMissing : public std::logic_error {
public:
    explicit DependencyMissing(const std::string& what)
        : std::logic_error(what) {}
};

}  // namespace findex
