#ifndef GENCUR_LAGRANGIAN_HPP
#define GENCUR_LAGRANGIAN_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gencur/grid.hpp"
#include "gencur/hamiltonian.hpp"
#include "gencur/propagator.hpp"

namespace gencur {

// Numerical evaluation of the field Lagrangian densities and of the identities
// that follow from them: invariance under the dilatation-phase transformation,
// the Euler-Lagrange component equations, and the two split continuity
// equations whose complex combination is the mixed continuity equation.
//
// All time derivatives entering these checks are central differences of
// trajectory snapshots. Nothing here assumes the fields solve their equations
// of motion; that is exactly what the residuals are for.

// One global transformation parameter φ = φr + iφi. φi rotates both fields by
// the same angle in the complex plane; φr dilates them in opposite directions:
//
//     Ψ̃₊ = e^{+φr} e^{iφi} Ψ₊ = e^{φ} Ψ₊
//     Ψ̃₋ = e^{−φr} e^{iφi} Ψ₋ = e^{−φ*} Ψ₋
//
// so that conj(Ψ̃₋)·Ψ̃₊ = conj(Ψ₋)·Ψ₊ pointwise and the two-field Lagrangian
// is invariant for arbitrary fields, on-shell or not.
struct PhaseDilation {
    double phi_r = 0.0; // dilatation parameter
    double phi_i = 0.0; // rotation angle
};

// L∘ = Re[Ψ* (i·dtΨ − H∘Ψ)]. Only the Hermitian part of h acts; W is ignored.
RealField single_field_lagrangian_density(const HamiltonianSpec& h,
                                          const ComplexField& psi,
                                          const ComplexField& dt_psi);

// L = Re[conj(Ψ₋) (i·dtΨ₊ − H₊Ψ₊)] with H₊ = H∘ + iW. The density vanishes
// pointwise when Ψ₊ solves its Schrödinger equation, independently of Ψ₋.
RealField two_field_lagrangian_density(const HamiltonianSpec& h,
                                       const ComplexField& psi_plus,
                                       const ComplexField& psi_minus,
                                       const ComplexField& dt_psi_plus);

// Convenience overload: both fields and the central-difference dtΨ₊ are taken
// from a dual trajectory at snapshot index m (|m| ≤ M−1).
RealField two_field_lagrangian_density(const HamiltonianSpec& h,
                                       const Trajectory& traj, int m);

// Complex-exponential representation: scales by e^{φ} and e^{−φ*}.
std::pair<ComplexField, ComplexField> apply_phase_dilation(
    const PhaseDilation& p, const ComplexField& psi_plus,
    const ComplexField& psi_minus);

// Same map written as e^{±φr} times a real 2×2 rotation acting on (Ψʳ, Ψⁱ).
// Exists so the two representations can be compared; they agree to rounding.
std::pair<ComplexField, ComplexField> apply_phase_dilation_matrix(
    const PhaseDilation& p, const ComplexField& psi_plus,
    const ComplexField& psi_minus);

// |∫L̃ − ∫L| where L̃ is evaluated on the transformed fields and the
// correspondingly transformed time derivative e^{φ}·dtΨ₊. The cancellation
// e^{−φ}·e^{φ} = 1 holds pointwise, so this is rounding-level small for any
// field pair, including large |φr| (relative to the dilated magnitudes).
double invariance_residual(const HamiltonianSpec& h,
                           const ComplexField& psi_plus,
                           const ComplexField& psi_minus,
                           const ComplexField& dt_psi_plus,
                           const PhaseDilation& p);

// Trajectory form: fields and dtΨ₊ from snapshots at m, m±1.
double invariance_residual(const HamiltonianSpec& h, const Trajectory& traj,
                           const PhaseDilation& p, int m);

// L² norms of the four component equations of motion,
//
//     dtΨʳ± − H∘Ψⁱ± ∓ WΨʳ±   and   dtΨⁱ± + H∘Ψʳ± ∓ WΨⁱ±,
//
// with central-difference time derivatives. Equivalent to the real and
// imaginary parts of dtΨ± + iH±Ψ±.
struct EulerLagrangeResidual {
    double plus_re = 0.0;
    double plus_im = 0.0;
    double minus_re = 0.0;
    double minus_im = 0.0;
};

EulerLagrangeResidual euler_lagrange_residual(const HamiltonianSpec& h,
                                              const Trajectory& traj, int m);

// The two real continuity equations obtained from the φi and φr invariances,
// evaluated componentwise exactly as written:
//
//   d/dt (Ψʳ₋Ψʳ₊ + Ψⁱ₋Ψⁱ₊) + ∇·½[Ψʳ₊∇Ψⁱ₋ − Ψⁱ₋∇Ψʳ₊ + Ψʳ₋∇Ψⁱ₊ − Ψⁱ₊∇Ψʳ₋] = r₂₁
//   d/dt (Ψʳ₋Ψⁱ₊ − Ψⁱ₋Ψʳ₊) + ∇·½[Ψⁱ₊∇Ψⁱ₋ − Ψⁱ₋∇Ψⁱ₊ + Ψʳ₊∇Ψʳ₋ − Ψʳ₋∇Ψʳ₊] = r₂₂
//
// The rr pair in the second current carries the sign that makes the two
// equations the exact real and imaginary parts of the complex mixed
// continuity equation, so r₂₁ + i·r₂₂ reconstructs the mixed residual
// pointwise; reconstruction_max reports the largest deviation.
struct SplitResiduals {
    double r21_norm = 0.0;
    double r22_norm = 0.0;
    double reconstruction_max = 0.0;
};

SplitResiduals split_continuity_residuals(const Trajectory& traj, int m);

// Diagnostic table over the interior snapshots m = −(M−1)..M−1: the four EL
// residual norms, the two split residual norms, ∫L, and one invariance
// residual column per requested φ.
void write_lagrangian_csv(std::ostream& os, const HamiltonianSpec& h,
                          const Trajectory& traj,
                          const std::vector<PhaseDilation>& phis);
void write_lagrangian_csv(const std::string& path, const HamiltonianSpec& h,
                          const Trajectory& traj,
                          const std::vector<PhaseDilation>& phis);

} // namespace gencur

#endif
