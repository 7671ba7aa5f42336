#ifndef GENCUR_PROPAGATOR_HPP
#define GENCUR_PROPAGATOR_HPP

#include <vector>

#include "gencur/grid.hpp"
#include "gencur/hamiltonian.hpp"

namespace gencur {

enum class FieldSlot { plus, minus };

/**
 * Two-sided time evolution record: snapshots at t = m*dt for m in [-M, M],
 * stored for one field or for the dual pair (Ψ₊ under H₊, Ψ₋ under H₋).
 * Backward snapshots come from stepping with -dt, which works for arbitrary
 * non-Hermitian H where conjugation tricks do not.
 *
 * The snapshot at m = 0 is the supplied initial condition, bit for bit.
 */
struct Trajectory {
    Grid grid;
    double dt = 0.0;
    int half_steps = 0;        // M
    Sign sign = Sign::plus;    // Hamiltonian sign used for the plus slot
    std::vector<ComplexField> plus;   // index m + M
    std::vector<ComplexField> minus;  // empty for single-field trajectories

    // smallest linear-solve pivot magnitude seen while producing each
    // snapshot (0 for m = 0 and for spectral steps, which have no pivots)
    std::vector<double> pivot_plus;
    std::vector<double> pivot_minus;

    bool dual() const { return !minus.empty(); }
    double time(int m) const { return m * dt; }

    // Throws MissingSnapshot for |m| > M or for the minus slot of a
    // single-field trajectory.
    const ComplexField& at(int m, FieldSlot slot = FieldSlot::plus) const;
};

struct StationaryState {
    ComplexField field;      // spatial part, largest component made real > 0
    complexd energy;         // Rayleigh quotient on the discrete operator
    double residual = 0.0;   // ‖HΨ − EΨ‖ / ‖Ψ‖
    int iterations = 0;
    int shift_perturbations = 0; // times the shift hit an eigenvalue exactly
};

/**
 * One Crank-Nicolson (Cayley) step: solves
 *   (1 + i·dt/2·H±) f' = (1 − i·dt/2·H±) f.
 * 1D grids use the complex Thomas solve (Sherman-Morrison corrected when
 * periodic); 2D periodic grids take the split-step path. Negative dt steps
 * backward. The dual propagators are adjoint-inverses when H₋† = H₊, which
 * is what conserves the discrete mixed charge exactly.
 */
ComplexField cn_step(const HamiltonianSpec& h, Sign sign, const ComplexField& f,
                     double dt);

// Strang splitting e^{−i·dt/2·(V±iW)} · DFT⁻¹ e^{−i·dt·k²/2} DFT ·
// e^{−i·dt/2·(V±iW)} on fully periodic grids (1D or 2D).
ComplexField step_splitstep(const HamiltonianSpec& h, Sign sign,
                            const ComplexField& f, double dt);

// Dual pair evolved to both +M·dt and −M·dt. Aborts with FieldOverflow when
// max|Ψ| exceeds 1e12 × its initial value (gain-dominated runs).
Trajectory evolve_dual(const HamiltonianSpec& h, const ComplexField& psi_plus0,
                       const ComplexField& psi_minus0, double dt, int M);

// Single field under H_sign, two-sided so Ψ(x, −t) is available.
Trajectory evolve_two_sided(const HamiltonianSpec& h, Sign sign,
                            const ComplexField& psi0, double dt, int M);

// Fixed-shift inverse iteration on the discrete H±, 1D only. A shift that
// lands on an eigenvalue (solver breakdown) is perturbed by tol and counted
// in shift_perturbations rather than failing the solve.
StationaryState stationary_state(const HamiltonianSpec& h, Sign sign,
                                 complexd sigma, double tol = 1e-12,
                                 int max_iter = 500);

} // namespace gencur

#endif
