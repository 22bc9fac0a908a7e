#pragma once

#include <stdexcept>
#include <string>

namespace freeclt {

// Iterative solver gave up (Newton outside its domain, Picard cap hit, ...).
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity missed its accuracy contract (e.g. mass defect too large).
struct AccuracyError : std::runtime_error {
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// Dirac-type input where positive variance is required.
struct DegenerateMeasureError : std::invalid_argument {
    explicit DegenerateMeasureError(const std::string& what) : std::invalid_argument(what) {}
};

// Input makes an integrand genuinely singular (atom sitting on a log kernel, ...).
struct SingularInputError : std::invalid_argument {
    explicit SingularInputError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace freeclt
