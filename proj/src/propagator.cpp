#include "gencur/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include <fftw3.h>

#include "gencur/errors.hpp"
#include "gencur/tridiagonal.hpp"

namespace gencur {

const ComplexField& Trajectory::at(int m, FieldSlot slot) const {
    if (m < -half_steps || m > half_steps)
        throw MissingSnapshot("no snapshot at m = " + std::to_string(m) +
                              " (M = " + std::to_string(half_steps) + ")");
    if (slot == FieldSlot::minus) {
        if (!dual())
            throw MissingSnapshot("trajectory carries no partner field");
        return minus[m + half_steps];
    }
    return plus[m + half_steps];
}

namespace {

// ----- Crank-Nicolson coefficients (1D) --------------------------------------

struct CnCoefficients {
    std::vector<complexd> a_diag, b_diag; // A = 1 + iθH, B = 1 − iθH, θ = dt/2
    complexd a_off = 0.0, b_off = 0.0;
    bool cyclic = false;
};

CnCoefficients cn_coefficients(const HamiltonianSpec& h, Sign sign, double dt) {
    const Grid& g = h.grid;
    const double s = sign_factor(sign);
    const double inv_dx2 = 1.0 / (g.dx[0] * g.dx[0]);
    const complexd itheta(0.0, 0.5 * dt);
    const complexd h_off(-0.5 * inv_dx2, 0.0);

    CnCoefficients c;
    c.cyclic = g.periodic(0);
    c.a_off = itheta * h_off;
    c.b_off = -c.a_off;
    c.a_diag.resize(g.n[0]);
    c.b_diag.resize(g.n[0]);
    for (int j = 0; j < g.n[0]; ++j) {
        const complexd hd(inv_dx2 + h.V.values[j], s * h.W.values[j]);
        const complexd t = itheta * hd;
        c.a_diag[j] = 1.0 + t;
        c.b_diag[j] = 1.0 - t;
    }
    return c;
}

// ----- split-step workspace ---------------------------------------------------

// Owns the FFTW plans and the pointwise phase factors for one (h, sign, dt)
// combination so multi-step evolution does not replan per step. Plans are
// created with FFTW_ESTIMATE: slightly slower transforms, but plan selection
// is deterministic and the input buffer is left untouched.
class SplitStepWorkspace {
  public:
    SplitStepWorkspace(const HamiltonianSpec& h, Sign sign, double dt) : grid_(h.grid) {
        const Grid& g = h.grid;
        for (int a = 0; a < g.dim(); ++a)
            if (!g.periodic(a))
                throw NonPeriodicGrid("split-step needs all axes periodic");

        const std::size_t n = g.size();
        buf_ = fftw_alloc_complex(n);
        if (!buf_) throw Error("fftw_alloc_complex failed");
        if (g.dim() == 1)
            fwd_ = fftw_plan_dft_1d(g.n[0], buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        else
            fwd_ = fftw_plan_dft_2d(g.n[0], g.n[1], buf_, buf_, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
        if (g.dim() == 1)
            bwd_ = fftw_plan_dft_1d(g.n[0], buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        else
            bwd_ = fftw_plan_dft_2d(g.n[0], g.n[1], buf_, buf_, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw Error("fftw plan creation failed");

        // half-step potential factor e^{−i·(dt/2)·(V ± iW)} =
        // e^{±(dt/2)W} · e^{−i·(dt/2)V}
        const double s = sign_factor(sign);
        const double theta = 0.5 * dt;
        half_potential_.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            half_potential_[k] =
                std::exp(complexd(s * theta * h.W.values[k], -theta * h.V.values[k]));

        // full kinetic factor e^{−i·dt·k²/2}, with the 1/N of the unnormalized
        // inverse DFT folded in
        kinetic_.resize(n);
        const double norm = 1.0 / static_cast<double>(n);
        const int n1 = g.dim() == 2 ? g.n[1] : 1;
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < n1; ++j) {
                const double k0 = wavenumber(g, 0, i);
                const double k1 = g.dim() == 2 ? wavenumber(g, 1, j) : 0.0;
                const double k2 = k0 * k0 + k1 * k1;
                kinetic_[g.index(i, j)] =
                    std::exp(complexd(0.0, -0.5 * dt * k2)) * norm;
            }
    }

    SplitStepWorkspace(const SplitStepWorkspace&) = delete;
    SplitStepWorkspace& operator=(const SplitStepWorkspace&) = delete;

    ~SplitStepWorkspace() {
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
        if (buf_) fftw_free(buf_);
    }

    ComplexField step(const ComplexField& f) {
        const std::size_t n = grid_.size();
        for (std::size_t k = 0; k < n; ++k) {
            const complexd z = half_potential_[k] * f.values[k];
            buf_[k][0] = z.real();
            buf_[k][1] = z.imag();
        }
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < n; ++k) {
            const complexd z = kinetic_[k] * complexd(buf_[k][0], buf_[k][1]);
            buf_[k][0] = z.real();
            buf_[k][1] = z.imag();
        }
        fftw_execute(bwd_);
        ComplexField out = make_complex_field(grid_);
        for (std::size_t k = 0; k < n; ++k)
            out.values[k] = half_potential_[k] * complexd(buf_[k][0], buf_[k][1]);
        return out;
    }

    static double wavenumber(const Grid& g, int axis, int i) {
        const int n = g.n[axis];
        const int j = i <= n / 2 ? i : i - n;
        return 2.0 * M_PI * j / (n * g.dx[axis]);
    }

  private:
    Grid grid_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    std::vector<complexd> half_potential_;
    std::vector<complexd> kinetic_;
};

// ----- unified one-step driver ------------------------------------------------

class Stepper {
  public:
    Stepper(const HamiltonianSpec& h, Sign sign, double dt) {
        const Grid& g = h.grid;
        if (g.dim() == 1) {
            cn_ = cn_coefficients(h, sign, dt);
        } else {
            split_ = std::make_unique<SplitStepWorkspace>(h, sign, dt);
        }
    }

    ComplexField step(const ComplexField& f) {
        if (split_) {
            last_pivot_ = 0.0;
            return split_->step(f);
        }
        std::vector<complexd> rhs =
            tridiagonal_multiply(cn_.b_diag, cn_.b_off, f.values, cn_.cyclic);
        ComplexField out = make_complex_field(f.grid);
        out.values = cn_.cyclic
                         ? solve_cyclic_tridiagonal(cn_.a_diag, cn_.a_off, rhs,
                                                    &last_pivot_)
                         : solve_tridiagonal(cn_.a_diag, cn_.a_off, rhs, &last_pivot_);
        return out;
    }

    double last_pivot() const { return last_pivot_; }

  private:
    CnCoefficients cn_;
    std::unique_ptr<SplitStepWorkspace> split_;
    double last_pivot_ = 0.0;
};

// Steps one field M times in one time direction, filling traj snapshots
// outward from m = 0. `dir` is +1 or -1.
void run_side(std::vector<ComplexField>& slots, std::vector<double>& pivots,
              Stepper& stepper, int M, int dir, double dt, double overflow_bound,
              const char* label) {
    ComplexField f = slots[M]; // m = 0
    for (int k = 1; k <= M; ++k) {
        const int m = dir * k;
        try {
            f = stepper.step(f);
        } catch (const SolverBreakdown& e) {
            throw SolverBreakdown(std::string(label) + ": " + e.what() +
                                      " at step m = " + std::to_string(m),
                                  e.row);
        }
        const double amp = max_abs(f);
        if (!(amp <= overflow_bound))
            throw FieldOverflow(std::string(label) + ": max|psi| = " +
                                    std::to_string(amp) + " at step m = " +
                                    std::to_string(m) + " exceeds 1e12 x initial",
                                m);
        f.time_tag = m * dt;
        slots[m + M] = f;
        pivots[m + M] = stepper.last_pivot();
    }
}

void evolve_slot(const HamiltonianSpec& h, Sign sign, const ComplexField& psi0,
                 double dt, int M, std::vector<ComplexField>& slots,
                 std::vector<double>& pivots, const char* label) {
    slots.assign(2 * M + 1, ComplexField{});
    pivots.assign(2 * M + 1, 0.0);
    ComplexField start = psi0;
    start.time_tag = 0.0;
    slots[M] = std::move(start);

    const double bound = 1e12 * max_abs(psi0);
    if (M == 0) return;
    Stepper forward(h, sign, dt);
    run_side(slots, pivots, forward, M, +1, dt, bound, label);
    Stepper backward(h, sign, -dt);
    run_side(slots, pivots, backward, M, -1, dt, bound, label);
}

void check_evolve_args(const HamiltonianSpec& h, const ComplexField& f, double dt,
                       int M) {
    if (f.grid != h.grid)
        throw GridMismatch("evolve: initial field grid differs from spec grid");
    if (!(dt != 0.0) || !std::isfinite(dt)) throw Error("evolve: dt must be nonzero");
    if (M < 0) throw Error("evolve: M must be nonnegative");
    if (h.grid.dim() == 2 && !(h.grid.periodic(0) && h.grid.periodic(1)))
        throw NonPeriodicGrid("2D evolution is split-step only (periodic axes)");
}

} // namespace

ComplexField cn_step(const HamiltonianSpec& h, Sign sign, const ComplexField& f,
                     double dt) {
    if (f.grid != h.grid)
        throw GridMismatch("cn_step: field grid differs from spec grid");
    if (!(dt != 0.0) || !std::isfinite(dt)) throw Error("cn_step: dt must be nonzero");
    if (h.grid.dim() == 2) return step_splitstep(h, sign, f, dt);
    Stepper s(h, sign, dt);
    return s.step(f);
}

ComplexField step_splitstep(const HamiltonianSpec& h, Sign sign,
                            const ComplexField& f, double dt) {
    if (f.grid != h.grid)
        throw GridMismatch("step_splitstep: field grid differs from spec grid");
    SplitStepWorkspace ws(h, sign, dt);
    return ws.step(f);
}

Trajectory evolve_dual(const HamiltonianSpec& h, const ComplexField& psi_plus0,
                       const ComplexField& psi_minus0, double dt, int M) {
    check_evolve_args(h, psi_plus0, dt, M);
    if (psi_minus0.grid != h.grid)
        throw GridMismatch("evolve_dual: psi_minus grid differs from spec grid");

    Trajectory traj;
    traj.grid = h.grid;
    traj.dt = dt;
    traj.half_steps = M;
    traj.sign = Sign::plus;
    evolve_slot(h, Sign::plus, psi_plus0, dt, M, traj.plus, traj.pivot_plus, "psi_plus");
    evolve_slot(h, Sign::minus, psi_minus0, dt, M, traj.minus, traj.pivot_minus,
                "psi_minus");
    return traj;
}

Trajectory evolve_two_sided(const HamiltonianSpec& h, Sign sign,
                            const ComplexField& psi0, double dt, int M) {
    check_evolve_args(h, psi0, dt, M);
    Trajectory traj;
    traj.grid = h.grid;
    traj.dt = dt;
    traj.half_steps = M;
    traj.sign = sign;
    evolve_slot(h, sign, psi0, dt, M, traj.plus, traj.pivot_plus, "psi");
    return traj;
}

StationaryState stationary_state(const HamiltonianSpec& h, Sign sign,
                                 complexd sigma, double tol, int max_iter) {
    const Grid& g = h.grid;
    if (g.dim() != 1)
        throw NotOneDimensional("stationary_state: inverse iteration is 1D only");
    if (!(tol > 0.0)) throw Error("stationary_state: tol must be positive");

    const double s = sign_factor(sign);
    const double inv_dx2 = 1.0 / (g.dx[0] * g.dx[0]);
    const complexd h_off(-0.5 * inv_dx2, 0.0);
    std::vector<complexd> h_diag(g.n[0]);
    for (int j = 0; j < g.n[0]; ++j)
        h_diag[j] = complexd(inv_dx2 + h.V.values[j], s * h.W.values[j]);

    const bool cyclic = g.periodic(0);
    auto shifted = [&](complexd sh) {
        std::vector<complexd> d(h_diag);
        for (complexd& v : d) v -= sh;
        return d;
    };
    auto apply_h = [&](const ComplexField& v) {
        ComplexField out = make_complex_field(g);
        out.values = tridiagonal_multiply(h_diag, h_off, v.values, cyclic);
        return out;
    };

    // fixed-seed start vector: deterministic, no accidental orthogonality to
    // the target eigenvector
    std::mt19937 rng(0x5eed1234u);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexField v = make_complex_field(g);
    for (complexd& z : v.values) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = complexd(re, im);
    }
    {
        const double nv = l2_norm(v);
        for (complexd& z : v.values) z /= nv;
    }

    StationaryState out;
    std::vector<complexd> a_diag = shifted(sigma);
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<complexd> w;
        try {
            w = cyclic ? solve_cyclic_tridiagonal(a_diag, h_off, v.values)
                       : solve_tridiagonal(a_diag, h_off, v.values);
        } catch (const SolverBreakdown&) {
            // shift sits on an eigenvalue: nudge it and carry on
            sigma += tol;
            a_diag = shifted(sigma);
            ++out.shift_perturbations;
            continue;
        }
        ComplexField next = make_complex_field(g);
        next.values = std::move(w);
        const double nn = l2_norm(next);
        if (!(nn > 0.0) || !std::isfinite(nn))
            throw NoConvergence("inverse iteration produced a degenerate vector", it);
        for (complexd& z : next.values) z /= nn;
        v = std::move(next);

        const ComplexField hv = apply_h(v);
        const complexd vv = inner(v, v);
        const complexd e = inner(v, hv) / vv;
        ComplexField res = hv;
        for (std::size_t k = 0; k < res.values.size(); ++k)
            res.values[k] -= e * v.values[k];
        const double rnorm = l2_norm(res) / l2_norm(v);

        out.energy = e;
        out.residual = rnorm;
        out.iterations = it;
        if (rnorm <= tol) {
            // fix the arbitrary phase: largest-magnitude component real > 0
            std::size_t kmax = 0;
            double amax = 0.0;
            for (std::size_t k = 0; k < v.values.size(); ++k) {
                const double a = std::abs(v.values[k]);
                if (a > amax) {
                    amax = a;
                    kmax = k;
                }
            }
            if (amax > 0.0) {
                const complexd phase = v.values[kmax] / amax;
                for (complexd& z : v.values) z /= phase;
            }
            out.field = std::move(v);
            return out;
        }
    }
    throw NoConvergence("inverse iteration did not reach tol=" + fmt17(tol) +
                            " (last residual " + fmt17(out.residual) + ")",
                        max_iter);
}

} // namespace gencur
