#include "gencur/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gencur/errors.hpp"

namespace gencur {

bool pairing_needs_transform(PairingTag tag) {
    return tag == PairingTag::bilocal_f || tag == PairingTag::combined_ft;
}

bool pairing_needs_dual(PairingTag tag) { return tag == PairingTag::mixed; }

bool pairing_needs_two_sided(PairingTag tag) {
    return tag == PairingTag::bitemporal_t || tag == PairingTag::combined_ft;
}

std::string to_string(PairingTag tag) {
    switch (tag) {
        case PairingTag::ordinary: return "ordinary";
        case PairingTag::mixed: return "mixed";
        case PairingTag::bitemporal_t: return "bitemporal_t";
        case PairingTag::bilocal_f: return "bilocal_f";
        case PairingTag::combined_ft: return "combined_ft";
    }
    return "?";
}

std::string display_name(PairingTag tag) {
    switch (tag) {
        case PairingTag::ordinary: return "Ordinary";
        case PairingTag::mixed: return "Mixed";
        case PairingTag::bitemporal_t: return "BitemporalT_a";
        case PairingTag::bilocal_f: return "BilocalF_c";
        case PairingTag::combined_ft: return "CombinedFT_b";
    }
    return "?";
}

PairingTag pairing_from_string(const std::string& s) {
    if (s == "ordinary" || s == "Ordinary") return PairingTag::ordinary;
    if (s == "mixed" || s == "Mixed") return PairingTag::mixed;
    if (s == "bitemporal_t" || s == "BitemporalT_a") return PairingTag::bitemporal_t;
    if (s == "bilocal_f" || s == "BilocalF_c") return PairingTag::bilocal_f;
    if (s == "combined_ft" || s == "CombinedFT_b") return PairingTag::combined_ft;
    throw ConfigError("unknown pairing kind '" + s + "'");
}

PairingKind make_pairing(PairingTag tag) {
    if (pairing_needs_transform(tag))
        throw MissingTransform(to_string(tag) + " pairing needs a spatial transform");
    return PairingKind{tag, std::nullopt};
}

PairingKind make_pairing(PairingTag tag, SpatialTransform F) {
    if (!pairing_needs_transform(tag))
        throw Error(to_string(tag) + " pairing takes no spatial transform");
    return PairingKind{tag, std::move(F)};
}

namespace {

// Common structure of every pairing: density a·b, current (a∇b − b∇a)/2i,
// with b = Ψ(x, t) and a the kind's partner field.
struct PairFields {
    ComplexField a, b;
};

ComplexField conj_field(const ComplexField& f) {
    ComplexField out = f;
    for (complexd& z : out.values) z = std::conj(z);
    return out;
}

const SpatialTransform& require_transform(const PairingKind& kind) {
    if (!kind.transform)
        throw MissingTransform(to_string(kind.tag) +
                               " pairing evaluated without its transform");
    return *kind.transform;
}

PairFields pairing_fields(const PairingKind& kind, const Trajectory& traj, int m) {
    PairFields p;
    p.b = traj.at(m, FieldSlot::plus);
    switch (kind.tag) {
        case PairingTag::ordinary:
            p.a = conj_field(p.b);
            break;
        case PairingTag::mixed:
            p.a = conj_field(traj.at(m, FieldSlot::minus));
            break;
        case PairingTag::bitemporal_t:
            p.a = traj.at(-m, FieldSlot::plus);
            break;
        case PairingTag::bilocal_f:
            p.a = conj_field(apply_transform(require_transform(kind), p.b));
            break;
        case PairingTag::combined_ft:
            p.a = apply_transform(require_transform(kind),
                                  traj.at(-m, FieldSlot::plus));
            break;
    }
    return p;
}

ComplexField density_of(const PairFields& p) {
    ComplexField rho = make_complex_field(p.b.grid);
    rho.time_tag = p.b.time_tag;
    for (std::size_t k = 0; k < rho.values.size(); ++k)
        rho.values[k] = p.a.values[k] * p.b.values[k];
    return rho;
}

VectorField current_of(const PairFields& p) {
    const VectorField ga = gradient(p.a);
    const VectorField gb = gradient(p.b);
    VectorField j = make_vector_field(p.b.grid);
    const complexd inv2i(0.0, -0.5); // 1/(2i)
    for (int axis = 0; axis < p.b.grid.dim(); ++axis)
        for (std::size_t k = 0; k < j.comp[axis].size(); ++k)
            j.comp[axis][k] = inv2i * (p.a.values[k] * gb.comp[axis][k] -
                                       p.b.values[k] * ga.comp[axis][k]);
    return j;
}

double weighted_l2(const ComplexField& f) { return l2_norm(f); }

} // namespace

ComplexField pair_density(const PairingKind& kind, const Trajectory& traj, int m) {
    return density_of(pairing_fields(kind, traj, m));
}

VectorField pair_current(const PairingKind& kind, const Trajectory& traj, int m) {
    return current_of(pairing_fields(kind, traj, m));
}

ContinuityResidual continuity_residual(const PairingKind& kind,
                                       const Trajectory& traj, int m) {
    const int M = traj.half_steps;
    if (m < -(M - 1) || m > M - 1)
        throw IndexOutOfRange("continuity_residual: need snapshots at m±1, m = " +
                              std::to_string(m) + " with M = " + std::to_string(M));
    const ComplexField rho_next = pair_density(kind, traj, m + 1);
    const ComplexField rho_prev = pair_density(kind, traj, m - 1);
    const ComplexField div_j = divergence(pair_current(kind, traj, m));

    ContinuityResidual r;
    r.field = make_complex_field(traj.grid);
    r.field.time_tag = traj.time(m);
    const double inv2dt = 1.0 / (2.0 * traj.dt);
    for (std::size_t k = 0; k < r.field.values.size(); ++k)
        r.field.values[k] =
            (rho_next.values[k] - rho_prev.values[k]) * inv2dt + div_j.values[k];
    r.norm = weighted_l2(r.field);
    return r;
}

complexd boundary_flux(const VectorField& current) {
    const Grid& g = current.grid;
    complexd total(0.0, 0.0);

    for (int axis = 0; axis < g.dim(); ++axis) {
        if (g.periodic(axis)) continue;
        const int na = g.n[axis];
        // quadratic extrapolation of the normal component to the ghost sites:
        // value(ghost) = 3 f(0) − 3 f(1) + f(2) counted from the wall inward
        auto ghost = [&](int i0, int i1, int i2, int t) {
            auto val = [&](int i) {
                return axis == 0 ? current.comp[0][g.index(i, t)]
                                 : current.comp[1][g.index(t, i)];
            };
            return 3.0 * val(i0) - 3.0 * val(i1) + val(i2);
        };
        const int n_t = g.dim() == 2 ? g.n[1 - axis] : 1;
        for (int t = 0; t < n_t; ++t) {
            const double w = g.dim() == 2 ? g.dx[1 - axis] : 1.0;
            const complexd low = ghost(0, 1, 2, t);
            const complexd high = ghost(na - 1, na - 2, na - 3, t);
            total += w * (high - low);
        }
    }
    return total;
}

ConservationReport charge_series(const PairingKind& kind, const Trajectory& traj) {
    const int M = traj.half_steps;
    ConservationReport rep;
    rep.kind = kind.tag;
    if (kind.transform) rep.transform_note = describe(*kind.transform);
    rep.times.reserve(2 * M + 1);
    rep.charge.reserve(2 * M + 1);
    rep.boundary_flux.reserve(2 * M + 1);
    rep.residual_norm.reserve(2 * M + 1);

    for (int m = -M; m <= M; ++m) {
        const PairFields p = pairing_fields(kind, traj, m);
        rep.times.push_back(traj.time(m));
        rep.charge.push_back(integrate(density_of(p)));
        rep.boundary_flux.push_back(boundary_flux(current_of(p)));
    }
    for (int m = -M; m <= M; ++m) {
        double rn = 0.0;
        if (M > 0) {
            if (std::abs(m) <= M - 1) {
                rn = continuity_residual(kind, traj, m).norm;
            } else {
                // endpoints: first-order one-sided difference toward the interior
                const int inner = m > 0 ? m - 1 : m + 1;
                const ComplexField rho_m = pair_density(kind, traj, m);
                const ComplexField rho_i = pair_density(kind, traj, inner);
                const ComplexField div_j = divergence(pair_current(kind, traj, m));
                ComplexField r = make_complex_field(traj.grid);
                const double invdt = 1.0 / (traj.time(m) - traj.time(inner));
                for (std::size_t k = 0; k < r.values.size(); ++k)
                    r.values[k] =
                        (rho_m.values[k] - rho_i.values[k]) * invdt + div_j.values[k];
                rn = weighted_l2(r);
            }
        }
        rep.residual_norm.push_back(rn);
        rep.max_residual = std::max(rep.max_residual, rn);
    }

    const complexd c0 = rep.charge[static_cast<std::size_t>(M)];
    const double floor = std::max(std::abs(c0), 1e-300);
    for (const complexd& c : rep.charge)
        rep.drift = std::max(rep.drift, std::abs(c - c0) / floor);
    return rep;
}

void write_conservation_csv(std::ostream& os, const ConservationReport& report) {
    std::string buf = "# t,Re(C),Im(C),Re(flux),Im(flux),residual_L2\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        buf += fmt17(report.times[k]);
        buf += ',';
        buf += fmt17(report.charge[k].real());
        buf += ',';
        buf += fmt17(report.charge[k].imag());
        buf += ',';
        buf += fmt17(report.boundary_flux[k].real());
        buf += ',';
        buf += fmt17(report.boundary_flux[k].imag());
        buf += ',';
        buf += fmt17(report.residual_norm[k]);
        buf += '\n';
    }
    os << buf;
}

StationaryProfile stationary_current_profile(PairingTag kind,
                                             const StationaryState& state,
                                             const SpatialTransform& F) {
    const Grid& g = state.field.grid;
    if (g.dim() != 1)
        throw NotOneDimensional("stationary_current_profile is 1D only");
    if (kind != PairingTag::bilocal_f && kind != PairingTag::combined_ft)
        throw Error("stationary_current_profile expects bilocal_f or combined_ft");

    PairFields p;
    p.b = state.field;
    if (kind == PairingTag::bilocal_f) {
        ComplexField fb = apply_transform(F, state.field);
        for (complexd& z : fb.values) z = std::conj(z);
        p.a = std::move(fb);
    } else {
        p.a = apply_transform(F, state.field);
    }

    StationaryProfile out;
    out.current = current_of(p);

    const int lo = g.periodic(0) ? 0 : 1;
    const int hi = g.periodic(0) ? g.n[0] : g.n[0] - 1;
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    for (int i = lo; i < hi; ++i) {
        const complexd z = out.current.comp[0][i];
        if (i == lo) {
            re_min = re_max = z.real();
            im_min = im_max = z.imag();
        } else {
            re_min = std::min(re_min, z.real());
            re_max = std::max(re_max, z.real());
            im_min = std::min(im_min, z.imag());
            im_max = std::max(im_max, z.imag());
        }
    }
    out.spread = std::max(re_max - re_min, im_max - im_min);
    return out;
}

} // namespace gencur
