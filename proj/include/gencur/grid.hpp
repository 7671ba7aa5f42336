#ifndef GENCUR_GRID_HPP
#define GENCUR_GRID_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gencur {

using complexd = std::complex<double>;

enum class Bc { dirichlet, periodic };

std::string to_string(Bc bc);
Bc bc_from_string(const std::string& s);

/**
 * Uniform tensor-product grid in one or two dimensions.
 *
 * Point i along an axis sits at origin + i*dx, i = 0..n-1. A Dirichlet axis
 * stores interior points only; the field is implicitly zero one spacing
 * outside either end. A periodic axis identifies origin + n*dx with origin,
 * so the stored points cover one full period.
 *
 * 2D data is stored row-major with axis 0 slowest: flat = i*n1 + j.
 */
struct Grid {
    int ndim = 0;
    std::array<int, 2> n{0, 0};
    std::array<double, 2> dx{0.0, 0.0};
    std::array<double, 2> origin{0.0, 0.0};
    std::array<Bc, 2> bc{Bc::dirichlet, Bc::dirichlet};

    Grid() = default;
    Grid(int n0, double dx0, double origin0, Bc bc0);
    Grid(std::array<int, 2> ns, std::array<double, 2> dxs,
         std::array<double, 2> origins, std::array<Bc, 2> bcs);

    int dim() const { return ndim; }
    std::size_t size() const;

    // Coordinate of point i along `axis`, computed as origin + i*dx so the
    // same index always yields the bit-identical coordinate.
    double coord(int axis, int i) const { return origin[axis] + i * dx[axis]; }

    std::size_t index(int i, int j = 0) const {
        return ndim == 1 ? static_cast<std::size_t>(i)
                         : static_cast<std::size_t>(i) * n[1] + j;
    }

    bool periodic(int axis) const { return bc[axis] == Bc::periodic; }

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }
};

struct ComplexField {
    Grid grid;
    std::vector<complexd> values;
    std::optional<double> time_tag; // set by trajectories, ignored by ==/IO
};

struct RealField {
    Grid grid;
    std::vector<double> values;
};

// One complex component per axis, each on the same grid as the parent field.
struct VectorField {
    Grid grid;
    std::vector<std::vector<complexd>> comp;
};

ComplexField make_complex_field(const Grid& g);
RealField make_real_field(const Grid& g);
VectorField make_vector_field(const Grid& g);

// --- discrete calculus (second-order central stencils) ---------------------
//
// Dirichlet axes use the implicit zero ghost values, periodic axes wrap.
// gradient/divergence are plain central first differences; laplacian is the
// compact 3-point (5-point in 2D) second difference, which is what keeps the
// Hamiltonian tridiagonal. Note that divergence(gradient(f)) is therefore the
// *wide* second-difference stencil, not laplacian(f); the two agree to O(dx^2)
// on smooth fields but are different operators on the lattice.

VectorField gradient(const ComplexField& f);
ComplexField divergence(const VectorField& v);
ComplexField laplacian(const ComplexField& f);

// --- quadrature -------------------------------------------------------------
//
// Riemann sum Σ f · Π dx. On a periodic axis this covers one full period; on
// a Dirichlet axis the stored points are all interior, so this equals the
// closed-interval trapezoid rule whose half-weighted endpoints are the ghost
// sites where the field vanishes. Keeping the weight of every stored point
// equal makes the quadrature a scalar multiple of the plain dot product,
// which is what lets the Cayley dual propagators conserve the mixed charge
// to rounding for arbitrary data, not just wall-localized states. Sums are
// accumulated with a fixed-shape pairwise reduction so results are identical
// run to run regardless of optimization level.

complexd integrate(const ComplexField& f);
double integrate(const RealField& f);

// Weighted inner product sum_i conj(f_i) g_i w_i. Throws GridMismatch.
complexd inner(const ComplexField& f, const ComplexField& g);

double l2_norm(const ComplexField& f);
double l2_norm(const RealField& f);

// Quadrature weight of a single point (product of the per-axis weights).
double quad_weight(const Grid& g, int i, int j = 0);

double max_abs(const ComplexField& f);

// Fixed-shape pairwise sum of a term buffer; exposed because several modules
// build their own term lists and must reduce them identically.
complexd pairwise_sum(const complexd* terms, std::size_t count);
double pairwise_sum(const double* terms, std::size_t count);

// --- snapshot I/O ------------------------------------------------------------
//
// CSV layout: one header line
//   # grid: <dim>,<n>,<dx>,<origin>,<bc>
// with per-axis subfields joined by ';', followed by one row per point in
// storage order: index columns, Re, Im. All doubles are printed with %.17g so
// a read back reproduces the field bit for bit.

void write_field_csv(std::ostream& os, const ComplexField& f);
void write_field_csv(const std::string& path, const ComplexField& f);
ComplexField read_field_csv(std::istream& is);
ComplexField read_field_csv(const std::string& path);

std::string grid_header(const Grid& g);
Grid parse_grid_header(const std::string& line);

// %.17g formatting used for every numeric value this library writes.
std::string fmt17(double v);

} // namespace gencur

#endif
