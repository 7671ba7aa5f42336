#ifndef GENCUR_SYMMETRY_HPP
#define GENCUR_SYMMETRY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gencur/grid.hpp"

namespace gencur {

enum class TransformKind { identity, parity, translation, rotation90, composite };

/**
 * A spatial map F realized as an exact index permutation of a specific grid.
 *
 * apply_transform(T, f) returns g with g(x) = f(F(x)) for every stored point,
 * i.e. perm[k] is the flat index of F(x_k). Because the maps are exact lattice
 * permutations (no interpolation), transformed fields commute with the
 * difference stencils to machine precision, which is what makes the symmetry
 * checks and the bilocal pairings exact on the grid.
 *
 * Supported maps and their grid requirements:
 *   identity      any grid
 *   parity        F(x) = 2c - x; 2(c_a - origin_a)/dx_a must be an integer
 *                 (center on a lattice site or half-site). On Dirichlet axes
 *                 the center must be the geometric center so the reflection
 *                 stays inside the stored range; periodic axes wrap.
 *   translation   F(x) = x + s; periodic axes only, s_a an integer multiple
 *                 of dx_a.
 *   rotation90    F(x) = c + R^k (x - c) on a square 2D grid (equal n, dx,
 *                 bc on both axes), k quarter turns counterclockwise.
 */
struct SpatialTransform {
    TransformKind kind = TransformKind::identity;
    Grid grid;
    std::vector<std::uint32_t> perm;

    // descriptive parameters, used for reports and error messages
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> offset{0.0, 0.0};
    int quarter_turns = 0;
};

SpatialTransform make_identity(const Grid& g);

// Center defaults to the geometric center of the stored points on Dirichlet
// axes and to origin + (n/2)*dx on periodic axes.
SpatialTransform make_parity(const Grid& g,
                             std::optional<std::array<double, 2>> center = std::nullopt);

SpatialTransform make_translation(const Grid& g, std::array<double, 2> offset);

SpatialTransform make_rotation90(const Grid& g, int quarter_turns,
                                 std::optional<std::array<double, 2>> center = std::nullopt);

ComplexField apply_transform(const SpatialTransform& t, const ComplexField& f);
RealField apply_transform(const SpatialTransform& t, const RealField& f);

// Transform representing x -> a(b(x)); labeled composite when the result is
// not expressible as one of the base kinds.
SpatialTransform compose(const SpatialTransform& a, const SpatialTransform& b);
SpatialTransform invert(const SpatialTransform& t);

std::string describe(const SpatialTransform& t);

// Parameter bag mirroring the scenario-config encoding of a transform.
struct TransformParams {
    std::optional<std::array<double, 2>> center; // parity / rotation90
    std::array<double, 2> offset{0.0, 0.0};      // translation, physical units
    int quarter_turns = 1;                       // rotation90
};

SpatialTransform make_transform(TransformKind kind, const TransformParams& p,
                                const Grid& g);

} // namespace gencur

#endif
