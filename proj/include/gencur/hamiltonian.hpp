#ifndef GENCUR_HAMILTONIAN_HPP
#define GENCUR_HAMILTONIAN_HPP

#include <set>
#include <vector>

#include "gencur/grid.hpp"
#include "gencur/symmetry.hpp"

namespace gencur {

// Which of the two complementary Hamiltonians H± = H∘ ± iW acts.
enum class Sign { plus, minus };

inline double sign_factor(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/**
 * H∘ = −½∇² + V with a real gain/loss profile W, both sampled on the grid.
 * W > 0 models gain, W < 0 loss. Units ħ = m = 1.
 */
struct HamiltonianSpec {
    Grid grid;
    RealField V;
    RealField W;
};

HamiltonianSpec make_hamiltonian(const Grid& g, RealField V, RealField W);

// (−½∇² + V ± iW) f. Throws GridMismatch if f lives elsewhere.
ComplexField apply_hamiltonian(const HamiltonianSpec& h, const ComplexField& f,
                               Sign sign);

// The Hermitian part alone: (−½∇² + V) f.
ComplexField apply_h0(const HamiltonianSpec& h, const ComplexField& f);

// Table 1 symmetry classes of H with respect to a spatial transform F.
//   f_symmetric_b:  V∘F = V and W∘F = W   (FHF⁻¹ = H, combined-FT pairing)
//   ft_symmetric_c: V∘F = V and W∘F = −W  (FHF⁻¹ = H*, bilocal pairing;
//                                          PT symmetry when F is parity)
//   no_symmetry_a:  neither; only the bitemporal pairing remains.
enum class SymmetryCase { no_symmetry_a, f_symmetric_b, ft_symmetric_c };

// Compares the sampled potential arrays under the permutation of F. A
// negative tol selects the default 1e−12 · max(1, max|V|, max|W|). Returns
// {b}, {c}, {b,c}, or {a}.
std::set<SymmetryCase> classify_symmetry(const HamiltonianSpec& h,
                                         const SpatialTransform& F,
                                         double tol = -1.0);

// H̄ = ∫ conj(ψ₋) H₊ ψ₊. Generally complex and, for a single state fed into
// both slots, generally not conserved in time even though the mixed charge is.
complexd mixed_expectation(const HamiltonianSpec& h, const ComplexField& psi_minus,
                           const ComplexField& psi_plus);

std::string to_string(SymmetryCase c);

// --- potential presets -------------------------------------------------------
//
// Closed-form profiles covering the physical cases exercised in the scenarios
// (PT-symmetric gain/loss, uniform loss, lattices); raw sampled arrays can be
// loaded through the snapshot reader instead.

RealField zero_potential(const Grid& g);
RealField constant_potential(const Grid& g, double value);
// ½ ω² |x|²
RealField harmonic_potential(const Grid& g, double omega);
// Σ_a slope_a · x_a
RealField linear_potential(const Grid& g, std::array<double, 2> slope);
// amp · cos(2π x / period) along axis 0 (1D lattices)
RealField cosine_lattice_potential(const Grid& g, double amp, double period);
// amp · exp(−|x − center|² / (2σ²))
RealField gaussian_potential(const Grid& g, double amp,
                             std::array<double, 2> center, double sigma);
// Σ_k coeffs[k] · x^k on a 1D grid
RealField polynomial_potential(const Grid& g, const std::vector<double>& coeffs);
// amp · (cos(2π x/L0) + rel · cos(2π y/L1)) on a 2D periodic grid; rel = −1
// gives the profile that flips sign under a quarter turn about x = y = 0
RealField cos2d_potential(const Grid& g, double amp, int rel);
// amp · x · y (2D; antisymmetric under quarter turns about the origin)
RealField xy_potential(const Grid& g, double amp);

} // namespace gencur

#endif
