#include "gencur/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gencur/errors.hpp"

namespace gencur {

namespace {

void check_axis(int n, double dx, const char* what) {
    if (n < 4)
        throw Error(std::string(what) + ": need at least 4 points per axis, got " +
                    std::to_string(n));
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw Error(std::string(what) + ": grid spacing must be positive and finite");
}

} // namespace

std::string to_string(Bc bc) {
    return bc == Bc::dirichlet ? "dirichlet" : "periodic";
}

Bc bc_from_string(const std::string& s) {
    if (s == "dirichlet") return Bc::dirichlet;
    if (s == "periodic") return Bc::periodic;
    throw Error("unknown boundary condition '" + s + "'");
}

Grid::Grid(int n0, double dx0, double origin0, Bc bc0) : ndim(1) {
    check_axis(n0, dx0, "Grid");
    n = {n0, 1};
    dx = {dx0, 0.0};
    origin = {origin0, 0.0};
    bc = {bc0, Bc::dirichlet};
}

Grid::Grid(std::array<int, 2> ns, std::array<double, 2> dxs,
           std::array<double, 2> origins, std::array<Bc, 2> bcs)
    : ndim(2), n(ns), dx(dxs), origin(origins), bc(bcs) {
    check_axis(ns[0], dxs[0], "Grid axis 0");
    check_axis(ns[1], dxs[1], "Grid axis 1");
}

std::size_t Grid::size() const {
    return ndim == 1 ? static_cast<std::size_t>(n[0])
                     : static_cast<std::size_t>(n[0]) * n[1];
}

bool Grid::operator==(const Grid& other) const {
    if (ndim != other.ndim) return false;
    for (int a = 0; a < ndim; ++a) {
        if (n[a] != other.n[a] || dx[a] != other.dx[a] ||
            origin[a] != other.origin[a] || bc[a] != other.bc[a])
            return false;
    }
    return true;
}

ComplexField make_complex_field(const Grid& g) {
    return ComplexField{g, std::vector<complexd>(g.size()), std::nullopt};
}

RealField make_real_field(const Grid& g) {
    return RealField{g, std::vector<double>(g.size())};
}

VectorField make_vector_field(const Grid& g) {
    VectorField v;
    v.grid = g;
    v.comp.assign(g.dim(), std::vector<complexd>(g.size()));
    return v;
}

// --- stencils ----------------------------------------------------------------

namespace {

// Value of f at a point shifted by `off` (+1 or -1) along `axis`, honoring the
// boundary: wrap on periodic axes, implicit zero outside Dirichlet axes.
inline complexd shifted_value(const std::vector<complexd>& v, const Grid& g,
                              int i, int j, int axis, int off) {
    int idx[2] = {i, j};
    idx[axis] += off;
    const int na = g.n[axis];
    if (idx[axis] < 0 || idx[axis] >= na) {
        if (!g.periodic(axis)) return complexd(0.0, 0.0);
        idx[axis] = (idx[axis] + na) % na;
    }
    return v[g.index(idx[0], idx[1])];
}

} // namespace

VectorField gradient(const ComplexField& f) {
    const Grid& g = f.grid;
    VectorField out = make_vector_field(g);
    const int n0 = g.n[0];
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double inv2dx = 1.0 / (2.0 * g.dx[axis]);
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j) {
                const complexd fp = shifted_value(f.values, g, i, j, axis, +1);
                const complexd fm = shifted_value(f.values, g, i, j, axis, -1);
                out.comp[axis][g.index(i, j)] = (fp - fm) * inv2dx;
            }
    }
    return out;
}

ComplexField divergence(const VectorField& v) {
    const Grid& g = v.grid;
    if (static_cast<int>(v.comp.size()) != g.dim())
        throw GridMismatch("divergence: component count does not match grid dimension");
    ComplexField out = make_complex_field(g);
    const int n0 = g.n[0];
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double inv2dx = 1.0 / (2.0 * g.dx[axis]);
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j) {
                const complexd fp = shifted_value(v.comp[axis], g, i, j, axis, +1);
                const complexd fm = shifted_value(v.comp[axis], g, i, j, axis, -1);
                out.values[g.index(i, j)] += (fp - fm) * inv2dx;
            }
    }
    return out;
}

ComplexField laplacian(const ComplexField& f) {
    const Grid& g = f.grid;
    ComplexField out = make_complex_field(g);
    const int n0 = g.n[0];
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double invdx2 = 1.0 / (g.dx[axis] * g.dx[axis]);
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j) {
                const std::size_t k = g.index(i, j);
                const complexd fp = shifted_value(f.values, g, i, j, axis, +1);
                const complexd fm = shifted_value(f.values, g, i, j, axis, -1);
                out.values[k] += (fp - 2.0 * f.values[k] + fm) * invdx2;
            }
    }
    return out;
}

// --- quadrature --------------------------------------------------------------

complexd pairwise_sum(const complexd* terms, std::size_t count) {
    if (count <= 8) {
        complexd s(0.0, 0.0);
        for (std::size_t k = 0; k < count; ++k) s += terms[k];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(terms, half) + pairwise_sum(terms + half, count - half);
}

double pairwise_sum(const double* terms, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t k = 0; k < count; ++k) s += terms[k];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(terms, half) + pairwise_sum(terms + half, count - half);
}

double quad_weight(const Grid& g, int i, int j) {
    double w = 1.0;
    for (int a = 0; a < g.dim(); ++a) w *= g.dx[a];
    (void)i;
    (void)j;
    return w;
}

namespace {

// Per-axis weights. Every stored point carries the full spacing: periodic
// axes are plain Riemann sums over one period, and on Dirichlet axes the
// stored points are all interior (the domain endpoints are the ghost sites
// where the field vanishes), so the closed-interval trapezoid rule assigns
// its half weights to the zero-valued walls and dx to every stored sample.
// A scalar weight matrix is what keeps the discrete Hamiltonian exactly
// Hermitian under inner() and the dual Cayley charge machine-conserved.
std::vector<double> axis_weights(const Grid& g, int axis) {
    return std::vector<double>(g.n[axis], g.dx[axis]);
}

} // namespace

complexd integrate(const ComplexField& f) {
    const Grid& g = f.grid;
    std::vector<complexd> terms(g.size());
    const std::vector<double> w0 = axis_weights(g, 0);
    if (g.dim() == 1) {
        for (int i = 0; i < g.n[0]; ++i) terms[i] = f.values[i] * w0[i];
    } else {
        const std::vector<double> w1 = axis_weights(g, 1);
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) {
                const std::size_t k = g.index(i, j);
                terms[k] = f.values[k] * (w0[i] * w1[j]);
            }
    }
    return pairwise_sum(terms.data(), terms.size());
}

double integrate(const RealField& f) {
    const Grid& g = f.grid;
    std::vector<double> terms(g.size());
    const std::vector<double> w0 = axis_weights(g, 0);
    if (g.dim() == 1) {
        for (int i = 0; i < g.n[0]; ++i) terms[i] = f.values[i] * w0[i];
    } else {
        const std::vector<double> w1 = axis_weights(g, 1);
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) {
                const std::size_t k = g.index(i, j);
                terms[k] = f.values[k] * (w0[i] * w1[j]);
            }
    }
    return pairwise_sum(terms.data(), terms.size());
}

complexd inner(const ComplexField& f, const ComplexField& g) {
    if (f.grid != g.grid) throw GridMismatch("inner: fields live on different grids");
    const Grid& gr = f.grid;
    std::vector<complexd> terms(gr.size());
    const std::vector<double> w0 = axis_weights(gr, 0);
    if (gr.dim() == 1) {
        for (int i = 0; i < gr.n[0]; ++i)
            terms[i] = std::conj(f.values[i]) * g.values[i] * w0[i];
    } else {
        const std::vector<double> w1 = axis_weights(gr, 1);
        for (int i = 0; i < gr.n[0]; ++i)
            for (int j = 0; j < gr.n[1]; ++j) {
                const std::size_t k = gr.index(i, j);
                terms[k] = std::conj(f.values[k]) * g.values[k] * (w0[i] * w1[j]);
            }
    }
    return pairwise_sum(terms.data(), terms.size());
}

double l2_norm(const ComplexField& f) {
    const double nn = inner(f, f).real();
    return std::sqrt(std::max(0.0, nn));
}

double l2_norm(const RealField& f) {
    const Grid& g = f.grid;
    std::vector<double> terms(g.size());
    const std::vector<double> w0 = axis_weights(g, 0);
    if (g.dim() == 1) {
        for (int i = 0; i < g.n[0]; ++i) terms[i] = f.values[i] * f.values[i] * w0[i];
    } else {
        const std::vector<double> w1 = axis_weights(g, 1);
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) {
                const std::size_t k = g.index(i, j);
                terms[k] = f.values[k] * f.values[k] * (w0[i] * w1[j]);
            }
    }
    return std::sqrt(std::max(0.0, pairwise_sum(terms.data(), terms.size())));
}

double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const complexd& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

// --- snapshot I/O ------------------------------------------------------------

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

template <class T, class Fmt>
std::string join_axes(const Grid& g, const std::array<T, 2>& vals, Fmt fmt) {
    std::string s = fmt(vals[0]);
    if (g.dim() == 2) {
        s += ';';
        s += fmt(vals[1]);
    }
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("bad ") + what + " value '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("bad ") + what + " value '" + s + "'");
    }
}

} // namespace

std::string grid_header(const Grid& g) {
    std::string s = "# grid: ";
    s += std::to_string(g.dim());
    s += ',';
    s += join_axes(g, g.n, [](int v) { return std::to_string(v); });
    s += ',';
    s += join_axes(g, g.dx, [](double v) { return fmt17(v); });
    s += ',';
    s += join_axes(g, g.origin, [](double v) { return fmt17(v); });
    s += ',';
    s += join_axes(g, g.bc, [](Bc v) { return to_string(v); });
    return s;
}

Grid parse_grid_header(const std::string& line) {
    const std::string prefix = "# grid: ";
    if (line.rfind(prefix, 0) != 0)
        throw IoError("snapshot header must start with '" + prefix + "'");
    const std::vector<std::string> fields = split(line.substr(prefix.size()), ',');
    if (fields.size() != 5)
        throw IoError("snapshot header needs 5 comma-separated fields");
    const int dim = parse_int(fields[0], "dimension");
    if (dim != 1 && dim != 2) throw IoError("grid dimension must be 1 or 2");
    std::array<std::vector<std::string>, 4> per = {
        split(fields[1], ';'), split(fields[2], ';'), split(fields[3], ';'),
        split(fields[4], ';')};
    for (const auto& p : per)
        if (static_cast<int>(p.size()) != dim)
            throw IoError("per-axis header fields must have one entry per axis");
    if (dim == 1)
        return Grid(parse_int(per[0][0], "n"), parse_double(per[1][0], "dx"),
                    parse_double(per[2][0], "origin"), bc_from_string(per[3][0]));
    return Grid({parse_int(per[0][0], "n"), parse_int(per[0][1], "n")},
                {parse_double(per[1][0], "dx"), parse_double(per[1][1], "dx")},
                {parse_double(per[2][0], "origin"), parse_double(per[2][1], "origin")},
                {bc_from_string(per[3][0]), bc_from_string(per[3][1])});
}

void write_field_csv(std::ostream& os, const ComplexField& f) {
    const Grid& g = f.grid;
    std::string buf = grid_header(g);
    buf += '\n';
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < n1; ++j) {
            const complexd z = f.values[g.index(i, j)];
            buf += std::to_string(i);
            if (g.dim() == 2) {
                buf += ',';
                buf += std::to_string(j);
            }
            buf += ',';
            buf += fmt17(z.real());
            buf += ',';
            buf += fmt17(z.imag());
            buf += '\n';
        }
    os << buf;
}

void write_field_csv(const std::string& path, const ComplexField& f) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_field_csv(os, f);
    if (!os) throw IoError("write to '" + path + "' failed");
}

ComplexField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty snapshot file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const Grid g = parse_grid_header(line);
    ComplexField f = make_complex_field(g);
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cols = split(line, ',');
        const std::size_t expected = g.dim() == 2 ? 4u : 3u;
        if (cols.size() != expected)
            throw IoError("snapshot row has " + std::to_string(cols.size()) +
                          " columns, expected " + std::to_string(expected));
        const int i = parse_int(cols[0], "row index");
        const int j = g.dim() == 2 ? parse_int(cols[1], "column index") : 0;
        if (i < 0 || i >= g.n[0] || j < 0 || j >= n1)
            throw IoError("snapshot row index out of range");
        const double re = parse_double(cols[g.dim() == 2 ? 2 : 1], "Re");
        const double im = parse_double(cols[g.dim() == 2 ? 3 : 2], "Im");
        f.values[g.index(i, j)] = complexd(re, im);
        ++rows;
    }
    if (rows != g.size())
        throw IoError("snapshot has " + std::to_string(rows) + " rows, grid needs " +
                      std::to_string(g.size()));
    return f;
}

ComplexField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    return read_field_csv(is);
}

} // namespace gencur
