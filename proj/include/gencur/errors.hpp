#ifndef GENCUR_ERRORS_HPP
#define GENCUR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gencur {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two fields (or a field and an operator) live on different grids.
struct GridMismatch : Error {
    using Error::Error;
};

// A spatial transform cannot be realized as an exact index permutation on the
// given grid (off-lattice center, non-square grid for a rotation, ...).
struct IncompatibleGrid : Error {
    using Error::Error;
};

// Translation offset is not an integer multiple of the grid spacing.
struct NonIntegerOffset : Error {
    using Error::Error;
};

// Requested operation needs periodic boundaries (translations, split-step).
struct NonPeriodicGrid : Error {
    using Error::Error;
};

// Zero (or numerically vanishing) pivot in the tridiagonal elimination.
struct SolverBreakdown : Error {
    SolverBreakdown(const std::string& what, std::size_t row_index)
        : Error(what), row(row_index) {}
    std::size_t row;
};

// Iterative eigensolver ran out of its iteration budget.
struct NoConvergence : Error {
    NoConvergence(const std::string& what, int iterations_used)
        : Error(what), iterations(iterations_used) {}
    int iterations;
};

// Field amplitude exploded during time evolution (gain-dominated run or an
// instability); carries the signed step index where the guard tripped.
struct FieldOverflow : Error {
    FieldOverflow(const std::string& what, int step_index)
        : Error(what), step(step_index) {}
    int step;
};

// Trajectory has no snapshot at the requested step index.
struct MissingSnapshot : Error {
    using Error::Error;
};

// A pairing that needs a spatial transform was built without one.
struct MissingTransform : Error {
    using Error::Error;
};

// Step index outside the range a trajectory operation can serve.
struct IndexOutOfRange : Error {
    using Error::Error;
};

// Operation is defined for 1D grids only.
struct NotOneDimensional : Error {
    using Error::Error;
};

// Bad scenario configuration (unknown keys, wrong types, inconsistent sizes).
struct ConfigError : Error {
    using Error::Error;
};

// File could not be opened or parsed.
struct IoError : Error {
    using Error::Error;
};

} // namespace gencur

#endif
