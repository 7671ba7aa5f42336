#include "gencur/lagrangian.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gencur/conservation.hpp"
#include "gencur/errors.hpp"

namespace gencur {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (a != b) {
        throw GridMismatch(std::string(what) + ": fields on different grids");
    }
}

// Central-difference time derivative from the snapshots at m ± 1.
ComplexField central_dt(const Trajectory& traj, FieldSlot slot, int m) {
    if (std::abs(m) > traj.half_steps - 1) {
        throw IndexOutOfRange("central time difference needs snapshots at m±1, m=" +
                              std::to_string(m) + " with M=" +
                              std::to_string(traj.half_steps));
    }
    const ComplexField& fwd = traj.at(m + 1, slot);
    const ComplexField& bwd = traj.at(m - 1, slot);
    ComplexField out = make_complex_field(traj.grid);
    const double inv2dt = 1.0 / (2.0 * traj.dt);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = (fwd.values[k] - bwd.values[k]) * inv2dt;
    }
    return out;
}

// Copies one real component into a complex container (imaginary part zero) so
// the shared gradient/divergence stencils can act on it. The stencils are
// linear, so the imaginary part stays exactly zero throughout.
ComplexField component_field(const ComplexField& f, bool real_part) {
    ComplexField out = make_complex_field(f.grid);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        out.values[k] = complexd(real_part ? f.values[k].real() : f.values[k].imag(), 0.0);
    }
    return out;
}

double weighted_norm(const Grid& g, const std::vector<double>& values) {
    RealField f;
    f.grid = g;
    f.values = values;
    return l2_norm(f);
}

} // namespace

RealField single_field_lagrangian_density(const HamiltonianSpec& h,
                                          const ComplexField& psi,
                                          const ComplexField& dt_psi) {
    require_same_grid(h.grid, psi.grid, "single_field_lagrangian_density");
    require_same_grid(psi.grid, dt_psi.grid, "single_field_lagrangian_density");
    ComplexField h0psi = apply_h0(h, psi);
    RealField out = make_real_field(psi.grid);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const complexd inner_term =
            complexd(0.0, 1.0) * dt_psi.values[k] - h0psi.values[k];
        out.values[k] = (std::conj(psi.values[k]) * inner_term).real();
    }
    return out;
}

RealField two_field_lagrangian_density(const HamiltonianSpec& h,
                                       const ComplexField& psi_plus,
                                       const ComplexField& psi_minus,
                                       const ComplexField& dt_psi_plus) {
    require_same_grid(h.grid, psi_plus.grid, "two_field_lagrangian_density");
    require_same_grid(psi_plus.grid, psi_minus.grid, "two_field_lagrangian_density");
    require_same_grid(psi_plus.grid, dt_psi_plus.grid, "two_field_lagrangian_density");
    ComplexField hpsi = apply_hamiltonian(h, psi_plus, Sign::plus);
    RealField out = make_real_field(psi_plus.grid);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const complexd inner_term =
            complexd(0.0, 1.0) * dt_psi_plus.values[k] - hpsi.values[k];
        out.values[k] = (std::conj(psi_minus.values[k]) * inner_term).real();
    }
    return out;
}

RealField two_field_lagrangian_density(const HamiltonianSpec& h,
                                       const Trajectory& traj, int m) {
    ComplexField dt_plus = central_dt(traj, FieldSlot::plus, m);
    return two_field_lagrangian_density(h, traj.at(m, FieldSlot::plus),
                                        traj.at(m, FieldSlot::minus), dt_plus);
}

std::pair<ComplexField, ComplexField> apply_phase_dilation(
    const PhaseDilation& p, const ComplexField& psi_plus,
    const ComplexField& psi_minus) {
    require_same_grid(psi_plus.grid, psi_minus.grid, "apply_phase_dilation");
    const complexd factor_plus = std::exp(complexd(p.phi_r, p.phi_i));
    const complexd factor_minus = std::exp(complexd(-p.phi_r, p.phi_i));
    ComplexField tp = psi_plus;
    ComplexField tm = psi_minus;
    for (auto& v : tp.values) v *= factor_plus;
    for (auto& v : tm.values) v *= factor_minus;
    return {std::move(tp), std::move(tm)};
}

std::pair<ComplexField, ComplexField> apply_phase_dilation_matrix(
    const PhaseDilation& p, const ComplexField& psi_plus,
    const ComplexField& psi_minus) {
    require_same_grid(psi_plus.grid, psi_minus.grid, "apply_phase_dilation_matrix");
    const double c = std::cos(p.phi_i);
    const double s = std::sin(p.phi_i);
    auto rotate_scale = [c, s](const ComplexField& f, double scale) {
        ComplexField out = f;
        for (auto& v : out.values) {
            const double re = v.real();
            const double im = v.imag();
            v = complexd(scale * (c * re - s * im), scale * (s * re + c * im));
        }
        return out;
    };
    return {rotate_scale(psi_plus, std::exp(p.phi_r)),
            rotate_scale(psi_minus, std::exp(-p.phi_r))};
}

double invariance_residual(const HamiltonianSpec& h,
                           const ComplexField& psi_plus,
                           const ComplexField& psi_minus,
                           const ComplexField& dt_psi_plus,
                           const PhaseDilation& p) {
    RealField base =
        two_field_lagrangian_density(h, psi_plus, psi_minus, dt_psi_plus);
    auto transformed = apply_phase_dilation(p, psi_plus, psi_minus);
    ComplexField dt_transformed = dt_psi_plus;
    const complexd factor_plus = std::exp(complexd(p.phi_r, p.phi_i));
    for (auto& v : dt_transformed.values) v *= factor_plus;
    RealField tilted = two_field_lagrangian_density(
        h, transformed.first, transformed.second, dt_transformed);
    return std::abs(integrate(tilted) - integrate(base));
}

double invariance_residual(const HamiltonianSpec& h, const Trajectory& traj,
                           const PhaseDilation& p, int m) {
    ComplexField dt_plus = central_dt(traj, FieldSlot::plus, m);
    return invariance_residual(h, traj.at(m, FieldSlot::plus),
                               traj.at(m, FieldSlot::minus), dt_plus, p);
}

EulerLagrangeResidual euler_lagrange_residual(const HamiltonianSpec& h,
                                              const Trajectory& traj, int m) {
    require_same_grid(h.grid, traj.grid, "euler_lagrange_residual");
    EulerLagrangeResidual out;
    const std::size_t count = traj.grid.size();
    std::vector<double> re_part(count), im_part(count);
    const FieldSlot slots[2] = {FieldSlot::plus, FieldSlot::minus};
    const Sign signs[2] = {Sign::plus, Sign::minus};
    for (int side = 0; side < 2; ++side) {
        ComplexField dt_f = central_dt(traj, slots[side], m);
        ComplexField hf =
            apply_hamiltonian(h, traj.at(m, slots[side]), signs[side]);
        // dtΨ + iH±Ψ; its real part is dtΨʳ − H∘Ψⁱ ∓ WΨʳ and its imaginary
        // part is dtΨⁱ + H∘Ψʳ ∓ WΨⁱ, the two component equations of motion.
        for (std::size_t k = 0; k < count; ++k) {
            const complexd r = dt_f.values[k] + complexd(0.0, 1.0) * hf.values[k];
            re_part[k] = r.real();
            im_part[k] = r.imag();
        }
        const double norm_re = weighted_norm(traj.grid, re_part);
        const double norm_im = weighted_norm(traj.grid, im_part);
        if (side == 0) {
            out.plus_re = norm_re;
            out.plus_im = norm_im;
        } else {
            out.minus_re = norm_re;
            out.minus_im = norm_im;
        }
    }
    return out;
}

SplitResiduals split_continuity_residuals(const Trajectory& traj, int m) {
    if (std::abs(m) > traj.half_steps - 1) {
        throw IndexOutOfRange("split continuity residual needs snapshots at m±1");
    }
    const Grid& g = traj.grid;
    const std::size_t count = g.size();

    // Componentwise densities ρ₂₁ = Ψʳ₋Ψʳ₊ + Ψⁱ₋Ψⁱ₊ and ρ₂₂ = Ψʳ₋Ψⁱ₊ − Ψⁱ₋Ψʳ₊
    // at a given snapshot index.
    auto densities = [&](int at_m, std::vector<double>& rho21,
                         std::vector<double>& rho22) {
        const ComplexField& fp = traj.at(at_m, FieldSlot::plus);
        const ComplexField& fm = traj.at(at_m, FieldSlot::minus);
        rho21.resize(count);
        rho22.resize(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double a = fm.values[k].real(); // Ψʳ₋
            const double b = fm.values[k].imag(); // Ψⁱ₋
            const double c = fp.values[k].real(); // Ψʳ₊
            const double d = fp.values[k].imag(); // Ψⁱ₊
            rho21[k] = a * c + b * d;
            rho22[k] = a * d - b * c;
        }
    };

    std::vector<double> rho21_fwd, rho22_fwd, rho21_bwd, rho22_bwd;
    densities(m + 1, rho21_fwd, rho22_fwd);
    densities(m - 1, rho21_bwd, rho22_bwd);

    const ComplexField& fp = traj.at(m, FieldSlot::plus);
    const ComplexField& fm = traj.at(m, FieldSlot::minus);
    ComplexField a_f = component_field(fm, true);
    ComplexField b_f = component_field(fm, false);
    ComplexField c_f = component_field(fp, true);
    ComplexField d_f = component_field(fp, false);
    VectorField ga = gradient(a_f);
    VectorField gb = gradient(b_f);
    VectorField gc = gradient(c_f);
    VectorField gd = gradient(d_f);

    VectorField j21 = make_vector_field(g);
    VectorField j22 = make_vector_field(g);
    for (int axis = 0; axis < g.dim(); ++axis) {
        for (std::size_t k = 0; k < count; ++k) {
            const complexd a = a_f.values[k], b = b_f.values[k];
            const complexd c = c_f.values[k], d = d_f.values[k];
            j21.comp[axis][k] = 0.5 * (c * gb.comp[axis][k] - b * gc.comp[axis][k] +
                                       a * gd.comp[axis][k] - d * ga.comp[axis][k]);
            j22.comp[axis][k] = 0.5 * (d * gb.comp[axis][k] - b * gd.comp[axis][k] +
                                       c * ga.comp[axis][k] - a * gc.comp[axis][k]);
        }
    }
    ComplexField div21 = divergence(j21);
    ComplexField div22 = divergence(j22);

    const double inv2dt = 1.0 / (2.0 * traj.dt);
    std::vector<double> r21(count), r22(count);
    for (std::size_t k = 0; k < count; ++k) {
        r21[k] = (rho21_fwd[k] - rho21_bwd[k]) * inv2dt + div21.values[k].real();
        r22[k] = (rho22_fwd[k] - rho22_bwd[k]) * inv2dt + div22.values[k].real();
    }

    SplitResiduals out;
    out.r21_norm = weighted_norm(g, r21);
    out.r22_norm = weighted_norm(g, r22);

    // The complex mixed residual must be recovered as r₂₁ + i·r₂₂; both paths
    // use the same snapshots and stencils, so the gap is rounding only.
    ContinuityResidual mixed =
        continuity_residual(make_pairing(PairingTag::mixed), traj, m);
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double gap = std::abs(complexd(r21[k], r22[k]) - mixed.field.values[k]);
        if (gap > worst) worst = gap;
    }
    out.reconstruction_max = worst;
    return out;
}

void write_lagrangian_csv(std::ostream& os, const HamiltonianSpec& h,
                          const Trajectory& traj,
                          const std::vector<PhaseDilation>& phis) {
    os << "# m,t,el_plus_re,el_plus_im,el_minus_re,el_minus_im,"
          "split_r21,split_r22,integral_L";
    for (const PhaseDilation& p : phis) {
        os << ",inv(" << fmt17(p.phi_r) << ';' << fmt17(p.phi_i) << ')';
    }
    os << '\n';
    const int interior = traj.half_steps - 1;
    for (int m = -interior; m <= interior; ++m) {
        EulerLagrangeResidual el = euler_lagrange_residual(h, traj, m);
        SplitResiduals split = split_continuity_residuals(traj, m);
        const double total = integrate(two_field_lagrangian_density(h, traj, m));
        os << m << ',' << fmt17(traj.time(m)) << ',' << fmt17(el.plus_re) << ','
           << fmt17(el.plus_im) << ',' << fmt17(el.minus_re) << ','
           << fmt17(el.minus_im) << ',' << fmt17(split.r21_norm) << ','
           << fmt17(split.r22_norm) << ',' << fmt17(total);
        for (const PhaseDilation& p : phis) {
            os << ',' << fmt17(invariance_residual(h, traj, p, m));
        }
        os << '\n';
    }
}

void write_lagrangian_csv(const std::string& path, const HamiltonianSpec& h,
                          const Trajectory& traj,
                          const std::vector<PhaseDilation>& phis) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot open " + path + " for writing");
    }
    write_lagrangian_csv(os, h, traj, phis);
}

} // namespace gencur
