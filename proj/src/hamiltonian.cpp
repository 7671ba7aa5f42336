#include "gencur/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "gencur/errors.hpp"

namespace gencur {

HamiltonianSpec make_hamiltonian(const Grid& g, RealField V, RealField W) {
    if (V.grid != g || W.grid != g)
        throw GridMismatch("make_hamiltonian: V/W sampled on a different grid");
    for (double v : V.values)
        if (!std::isfinite(v)) throw Error("make_hamiltonian: V has non-finite entries");
    for (double w : W.values)
        if (!std::isfinite(w)) throw Error("make_hamiltonian: W has non-finite entries");
    return HamiltonianSpec{g, std::move(V), std::move(W)};
}

ComplexField apply_hamiltonian(const HamiltonianSpec& h, const ComplexField& f,
                               Sign sign) {
    if (f.grid != h.grid)
        throw GridMismatch("apply_hamiltonian: field grid differs from spec grid");
    ComplexField out = laplacian(f);
    const double s = sign_factor(sign);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = -0.5 * out.values[k] +
                        complexd(h.V.values[k], s * h.W.values[k]) * f.values[k];
    return out;
}

ComplexField apply_h0(const HamiltonianSpec& h, const ComplexField& f) {
    if (f.grid != h.grid)
        throw GridMismatch("apply_h0: field grid differs from spec grid");
    ComplexField out = laplacian(f);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = -0.5 * out.values[k] + h.V.values[k] * f.values[k];
    return out;
}

std::set<SymmetryCase> classify_symmetry(const HamiltonianSpec& h,
                                         const SpatialTransform& F, double tol) {
    if (F.grid != h.grid)
        throw GridMismatch("classify_symmetry: transform grid differs from spec grid");
    if (tol < 0.0) {
        double scale = 1.0;
        for (double v : h.V.values) scale = std::max(scale, std::abs(v));
        for (double w : h.W.values) scale = std::max(scale, std::abs(w));
        tol = 1e-12 * scale;
    }
    double dv = 0.0, dw_sym = 0.0, dw_anti = 0.0;
    for (std::size_t k = 0; k < h.V.values.size(); ++k) {
        const double vF = h.V.values[F.perm[k]];
        const double wF = h.W.values[F.perm[k]];
        dv = std::max(dv, std::abs(vF - h.V.values[k]));
        dw_sym = std::max(dw_sym, std::abs(wF - h.W.values[k]));
        dw_anti = std::max(dw_anti, std::abs(wF + h.W.values[k]));
    }
    std::set<SymmetryCase> out;
    if (dv <= tol && dw_sym <= tol) out.insert(SymmetryCase::f_symmetric_b);
    if (dv <= tol && dw_anti <= tol) out.insert(SymmetryCase::ft_symmetric_c);
    if (out.empty()) out.insert(SymmetryCase::no_symmetry_a);
    return out;
}

complexd mixed_expectation(const HamiltonianSpec& h, const ComplexField& psi_minus,
                           const ComplexField& psi_plus) {
    return inner(psi_minus, apply_hamiltonian(h, psi_plus, Sign::plus));
}

std::string to_string(SymmetryCase c) {
    switch (c) {
        case SymmetryCase::no_symmetry_a: return "NoSymmetry_a";
        case SymmetryCase::f_symmetric_b: return "FSymmetric_b";
        case SymmetryCase::ft_symmetric_c: return "FTSymmetric_c";
    }
    return "?";
}

// --- presets -------------------------------------------------------------

namespace {

template <class Fn>
RealField sample(const Grid& g, Fn fn) {
    RealField f = make_real_field(g);
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < n1; ++j) {
            const double x = g.coord(0, i);
            const double y = g.dim() == 2 ? g.coord(1, j) : 0.0;
            f.values[g.index(i, j)] = fn(x, y);
        }
    return f;
}

} // namespace

RealField zero_potential(const Grid& g) { return make_real_field(g); }

RealField constant_potential(const Grid& g, double value) {
    return sample(g, [value](double, double) { return value; });
}

RealField harmonic_potential(const Grid& g, double omega) {
    const double c = 0.5 * omega * omega;
    return sample(g, [c](double x, double y) { return c * (x * x + y * y); });
}

RealField linear_potential(const Grid& g, std::array<double, 2> slope) {
    return sample(g, [slope](double x, double y) { return slope[0] * x + slope[1] * y; });
}

RealField cosine_lattice_potential(const Grid& g, double amp, double period) {
    if (!(period > 0.0)) throw Error("cosine_lattice: period must be positive");
    const double k = 2.0 * M_PI / period;
    return sample(g, [amp, k](double x, double) { return amp * std::cos(k * x); });
}

RealField gaussian_potential(const Grid& g, double amp,
                             std::array<double, 2> center, double sigma) {
    if (!(sigma > 0.0)) throw Error("gaussian potential: sigma must be positive");
    const double inv = 1.0 / (2.0 * sigma * sigma);
    if (g.dim() == 1)
        return sample(g, [=](double x, double) {
            const double u = x - center[0];
            return amp * std::exp(-u * u * inv);
        });
    return sample(g, [=](double x, double y) {
        const double u = x - center[0];
        const double v = y - center[1];
        return amp * std::exp(-(u * u + v * v) * inv);
    });
}

RealField polynomial_potential(const Grid& g, const std::vector<double>& coeffs) {
    if (g.dim() != 1)
        throw NotOneDimensional("polynomial potential is 1D only");
    return sample(g, [&coeffs](double x, double) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
        return acc;
    });
}

RealField cos2d_potential(const Grid& g, double amp, int rel) {
    if (g.dim() != 2) throw Error("cos2d potential needs a 2D grid");
    const double k0 = 2.0 * M_PI / (g.n[0] * g.dx[0]);
    const double k1 = 2.0 * M_PI / (g.n[1] * g.dx[1]);
    const double r = rel < 0 ? -1.0 : 1.0;
    return sample(g, [=](double x, double y) {
        return amp * (std::cos(k0 * x) + r * std::cos(k1 * y));
    });
}

RealField xy_potential(const Grid& g, double amp) {
    if (g.dim() != 2) throw Error("xy potential needs a 2D grid");
    return sample(g, [amp](double x, double y) { return amp * x * y; });
}

} // namespace gencur
