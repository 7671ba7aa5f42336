#include "gencur/tridiagonal.hpp"

#include <cmath>

#include "gencur/errors.hpp"

namespace gencur {

namespace {

// Pivot threshold: relative to the matrix scale so uniformly scaled systems
// behave identically.
double breakdown_floor(const std::vector<complexd>& diag, complexd off) {
    double scale = std::abs(off);
    for (const complexd& d : diag) scale = std::max(scale, std::abs(d));
    return scale * 1e-300;
}

} // namespace

std::vector<complexd> solve_tridiagonal(const std::vector<complexd>& diag,
                                        complexd off,
                                        const std::vector<complexd>& rhs,
                                        double* min_abs_pivot) {
    const std::size_t n = diag.size();
    if (rhs.size() != n) throw Error("solve_tridiagonal: size mismatch");
    if (n == 0) return {};

    const double floor = breakdown_floor(diag, off);
    std::vector<complexd> x(n), cprime(n);
    double min_piv = std::abs(diag[0]);

    complexd w = diag[0];
    if (!(std::abs(w) > floor)) throw SolverBreakdown("zero pivot in tridiagonal solve", 0);
    x[0] = rhs[0] / w;
    for (std::size_t i = 1; i < n; ++i) {
        cprime[i - 1] = off / w;
        w = diag[i] - off * cprime[i - 1];
        const double aw = std::abs(w);
        min_piv = std::min(min_piv, aw);
        if (!(aw > floor)) throw SolverBreakdown("zero pivot in tridiagonal solve", i);
        x[i] = (rhs[i] - off * x[i - 1]) / w;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime[i] * x[i + 1];

    if (min_abs_pivot) *min_abs_pivot = min_piv;
    return x;
}

std::vector<complexd> solve_cyclic_tridiagonal(const std::vector<complexd>& diag,
                                               complexd off,
                                               const std::vector<complexd>& rhs,
                                               double* min_abs_pivot) {
    const std::size_t n = diag.size();
    if (rhs.size() != n) throw Error("solve_cyclic_tridiagonal: size mismatch");
    if (n < 3) throw Error("solve_cyclic_tridiagonal: need at least 3 rows");

    // A = A' + u v^T with u = (gamma, 0, ..., 0, off)^T and
    // v = (1, 0, ..., 0, off/gamma)^T; gamma = -diag[0] keeps A' away from the
    // corner cancellation.
    const complexd gamma = -diag[0];
    const double floor = breakdown_floor(diag, off);
    if (!(std::abs(gamma) > floor))
        throw SolverBreakdown("cyclic reduction pivot vanishes", 0);

    std::vector<complexd> mod_diag(diag);
    mod_diag[0] -= gamma;
    mod_diag[n - 1] -= off * off / gamma;

    double piv_y = 0.0, piv_z = 0.0;
    const std::vector<complexd> y = solve_tridiagonal(mod_diag, off, rhs, &piv_y);

    std::vector<complexd> u(n, complexd(0.0, 0.0));
    u[0] = gamma;
    u[n - 1] = off;
    const std::vector<complexd> z = solve_tridiagonal(mod_diag, off, u, &piv_z);

    const complexd voff = off / gamma;
    const complexd denom = 1.0 + z[0] + voff * z[n - 1];
    if (!(std::abs(denom) > floor))
        throw SolverBreakdown("Sherman-Morrison denominator vanishes", n - 1);
    const complexd factor = (y[0] + voff * y[n - 1]) / denom;

    std::vector<complexd> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];

    if (min_abs_pivot) *min_abs_pivot = std::min(piv_y, piv_z);
    return x;
}

std::vector<complexd> tridiagonal_multiply(const std::vector<complexd>& diag,
                                           complexd off,
                                           const std::vector<complexd>& f,
                                           bool cyclic) {
    const std::size_t n = diag.size();
    if (f.size() != n) throw Error("tridiagonal_multiply: size mismatch");
    std::vector<complexd> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        complexd acc = diag[i] * f[i];
        if (i > 0) acc += off * f[i - 1];
        if (i + 1 < n) acc += off * f[i + 1];
        y[i] = acc;
    }
    if (cyclic && n > 1) {
        y[0] += off * f[n - 1];
        y[n - 1] += off * f[0];
    }
    return y;
}

} // namespace gencur
