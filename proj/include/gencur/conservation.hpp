#ifndef GENCUR_CONSERVATION_HPP
#define GENCUR_CONSERVATION_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gencur/grid.hpp"
#include "gencur/propagator.hpp"
#include "gencur/symmetry.hpp"

namespace gencur {

/**
 * The density/current pairings under test. Every one of them fits the single
 * template ρ = a·b, J = (a·∇b − b·∇a)/2i with b the field at (x, t) and a the
 * partner field:
 *
 *   ordinary      a = Ψ*(x,t)        the textbook probability pairing
 *   mixed         a = Ψ₋*(x,t)       dual two-field pairing, conserved for
 *                                    any H of the H∘ ± iW form
 *   bitemporal_t  a = Ψ(x,−t)        no conjugation, no symmetry needed
 *   combined_ft   a = Ψ(Fx,−t)       needs FHF⁻¹ = H  (V, W both F-symmetric)
 *   bilocal_f     a = Ψ*(Fx,t)       needs FHF⁻¹ = H* (W F-antisymmetric;
 *                                    PT symmetry when F is parity)
 *
 * The gradient of the partner is taken at x after composing with F, i.e.
 * ∇[apply_transform(F, Ψ)], matching the ∇Ψ*(Fx,t) notation.
 */
enum class PairingTag { ordinary, mixed, bitemporal_t, bilocal_f, combined_ft };

struct PairingKind {
    PairingTag tag = PairingTag::ordinary;
    std::optional<SpatialTransform> transform;
};

// Validates that a transform is supplied exactly when the tag requires one
// (bilocal_f, combined_ft). Throws MissingTransform / Error.
PairingKind make_pairing(PairingTag tag);
PairingKind make_pairing(PairingTag tag, SpatialTransform F);

bool pairing_needs_transform(PairingTag tag);
bool pairing_needs_dual(PairingTag tag);      // mixed only
bool pairing_needs_two_sided(PairingTag tag); // bitemporal_t, combined_ft
std::string to_string(PairingTag tag);
// Report-facing names; the suffix letter marks the symmetry case the kind
// depends on (a: none, b: F-symmetric W, c: F-antisymmetric W).
std::string display_name(PairingTag tag);
// Accepts both the snake_case and the display spellings.
PairingTag pairing_from_string(const std::string& s);

ComplexField pair_density(const PairingKind& kind, const Trajectory& traj, int m);
VectorField pair_current(const PairingKind& kind, const Trajectory& traj, int m);

struct ContinuityResidual {
    ComplexField field; // (ρ(m+1) − ρ(m−1)) / 2dt + ∇·J(m)
    double norm = 0.0;  // L² (quadrature-weighted)
};

// Central time difference; needs snapshots at m±1 (and −(m±1) for the
// two-time pairings), so |m| ≤ M−1. Throws IndexOutOfRange.
ContinuityResidual continuity_residual(const PairingKind& kind,
                                       const Trajectory& traj, int m);

struct ConservationReport {
    PairingTag kind = PairingTag::ordinary;
    std::string transform_note;          // describe(F) or ""
    std::vector<double> times;           // one row per snapshot, m = −M..M
    std::vector<complexd> charge;        // C(t) = ∫ ρ
    std::vector<complexd> boundary_flux; // net outward Dirichlet wall flux
    std::vector<double> residual_norm;   // centered; one-sided at m = ±M
    double max_residual = 0.0;
    double drift = 0.0; // max |C(t) − C(0)| / max(|C(0)|, tiny)
};

ConservationReport charge_series(const PairingKind& kind, const Trajectory& traj);

// Net outward flux through Dirichlet walls: the normal component of J is
// extrapolated to the ghost sites (where the field vanishes) with a one-sided
// quadratic through the three nearest stored points, then summed over the
// boundary with transverse quadrature weights. Periodic axes contribute 0.
complexd boundary_flux(const VectorField& current);

// columns: t,Re(C),Im(C),Re(flux),Im(flux),residual_L2
void write_conservation_csv(std::ostream& os, const ConservationReport& report);

struct StationaryProfile {
    VectorField current;
    double spread = 0.0; // max−min over interior points, Re and Im separately,
                         // reported as the larger of the two
};

// Spatial current of a stationary state at t = 0 for the symmetry pairings
// (bilocal_f: a = Ψ*(Fx); combined_ft: a = Ψ(Fx), where the e^{∓iEt} factors
// cancel). 1D only; a flat profile is the domainwise invariant.
StationaryProfile stationary_current_profile(PairingTag kind,
                                             const StationaryState& state,
                                             const SpatialTransform& F);

} // namespace gencur

#endif
