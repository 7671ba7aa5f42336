#ifndef GENCUR_SCENARIO_HPP
#define GENCUR_SCENARIO_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gencur/conservation.hpp"
#include "gencur/grid.hpp"
#include "gencur/hamiltonian.hpp"
#include "gencur/lagrangian.hpp"
#include "gencur/symmetry.hpp"

namespace gencur {

// Scenario configs are single JSON documents (schema in README.md). Presets
// are stored symbolically, not as sampled arrays, so a refinement study can
// rebuild every ingredient on a finer grid.

// V or W profile. `preset` selects one of the closed forms from the
// hamiltonian module ("zero", "constant", "harmonic", "linear",
// "cosine_lattice", "gaussian", "polynomial", "cos2d", "xy") or "file"
// (a field CSV whose real part is taken; must match the grid).
struct PotentialSpec {
    std::string preset = "zero";
    double value = 0.0;               // constant
    double omega = 1.0;               // harmonic
    std::array<double, 2> slope{0.0, 0.0}; // linear
    double amp = 0.0;                 // cosine_lattice, gaussian, cos2d, xy
    double period = 1.0;              // cosine_lattice
    std::array<double, 2> center{0.0, 0.0}; // gaussian
    double sigma = 1.0;               // gaussian
    std::vector<double> coeffs;       // polynomial
    int rel = 1;                      // cos2d
    std::string path;                 // file
};

RealField build_potential(const PotentialSpec& p, const Grid& g);

// Initial condition. Presets:
//   gaussian        exp(−|x−x0|²/2σ²)·e^{i k0·x}, L²-normalized
//   eigenstate      stationary_state of the configured H± near `shift` (1D)
//   plane_wave      e^{ik·x} with k snapped to the lattice (periodic axes)
//   superposition   sum of amplitude·e^{ik·x} waves (periodic axes)
//   file            field CSV on the same grid
//   random          seeded complex normal deviates, L²-normalized
struct InitialSpec {
    std::string preset = "gaussian";
    std::array<double, 2> x0{0.0, 0.0};
    double sigma = 1.0;
    std::array<double, 2> k0{0.0, 0.0};
    complexd shift{0.0, 0.0};
    struct Wave {
        complexd amplitude{1.0, 0.0};
        std::array<double, 2> k{0.0, 0.0};
    };
    std::vector<Wave> waves;
    std::string path;
    unsigned long seed = 1;
};

ComplexField build_initial(const InitialSpec& spec, const HamiltonianSpec& h,
                           Sign sign);

struct TransformSpec {
    TransformKind kind = TransformKind::identity;
    TransformParams params;
};

struct ScenarioConfig {
    std::string name;
    std::string description;
    Grid grid;
    PotentialSpec potential; // V
    PotentialSpec gain_loss; // W
    std::optional<TransformSpec> transform;
    InitialSpec initial_plus;
    InitialSpec initial_minus; // defaults to initial_plus
    double dt = 1e-3;
    int steps = 100; // M: snapshots span m = −M..M
    std::vector<PairingTag> kinds;
    int snapshot_stride = 0; // 0 disables field snapshots
    std::vector<PhaseDilation> phis; // invariance columns of lagrangian.csv
    double drift_threshold = 1e-8;   // CONSERVED iff drift below this
    bool force = false; // evaluate symmetry kinds even when classify rejects
    std::string out_dir; // defaults to out/<name>
};

// Parses and validates a config document. Unknown keys, missing required
// fields, and values that cannot be realized on the grid (off-lattice
// transform centers, fractional translation cells) all throw ConfigError
// naming the offending field.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

// One halving: dx/2 and dt/2 with the physical domain, duration, and all
// symbolic ingredients preserved (Dirichlet n → 2n−1, periodic n → 2n,
// steps → 2·steps). File-based potentials and initials cannot be refined.
ScenarioConfig refine_config(const ScenarioConfig& c);

struct KindVerdict {
    PairingTag kind = PairingTag::ordinary;
    std::string verdict;        // CONSERVED | VIOLATED | NOT-APPLICABLE
    std::string note;           // classification detail
    bool evaluated = false;     // false for NOT-APPLICABLE
    double drift = 0.0;
    double max_residual = 0.0;          // over all rows incl. one-sided ends
    double max_interior_residual = 0.0; // centered-difference rows only
};

struct ScenarioResult {
    std::string out_dir;
    std::string classification; // "{a}", "{b}", "{c}", "{b,c}", "" if no F
    std::vector<KindVerdict> verdicts;
    double noether_reconstruction_max = 0.0; // worst split-vs-mixed gap
    double hbar_dual_variation = 0.0;   // max |H̄(t)−H̄(0)| / |H̄(0)|, H̄ = ∫Ψ₋*H₊Ψ₊
    double hbar_single_variation = 0.0; // same with Ψ₋ replaced by Ψ₊
};

// classify → evolve (dual, two-sided) → analyze → write. Emits per kind
// conservation_<kind>.csv, plus hbar.csv, lagrangian.csv, index.csv,
// optional fields/psi_{plus,minus}_<m>.csv snapshots, and summary.json.
// Verdict lines go to `log`. Throws on solver failure or overflow; verdicts
// (including VIOLATED) are data, not errors.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log);

// Runs the scenario at `extra_levels`+1 resolutions (level 0 = as given,
// each next level halves dx and dt) into out_dir/level<k>/ and writes
// refinement_summary.csv with per-kind interior residuals and ratios.
std::vector<ScenarioResult> run_refinement_study(const ScenarioConfig& cfg,
                                                 int extra_levels,
                                                 std::ostream& log);

const std::vector<std::string>& bundled_scenario_names();
const std::string& bundled_scenario_json(const std::string& name);

} // namespace gencur

#endif
