#include "gencur/symmetry.hpp"

#include <cmath>
#include <numeric>

#include "gencur/errors.hpp"

namespace gencur {

namespace {

// Round v to an integer, rejecting anything further than `tol` from one.
long to_lattice_int(double v, double tol, const char* what) {
    const double r = std::round(v);
    if (!(std::abs(v - r) <= tol))
        throw IncompatibleGrid(std::string(what) + ": " + std::to_string(v) +
                               " is not close enough to an integer");
    return static_cast<long>(r);
}

int wrap(long i, int n) {
    long r = i % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

// Every constructed map must visit each index exactly once; a failure here
// means the center/offset validation above let something slip through.
void check_bijection(const std::vector<std::uint32_t>& perm) {
    std::vector<char> seen(perm.size(), 0);
    for (std::uint32_t p : perm) {
        if (p >= perm.size() || seen[p])
            throw IncompatibleGrid("transform permutation is not a bijection");
        seen[p] = 1;
    }
}

std::array<double, 2> default_parity_center(const Grid& g) {
    std::array<double, 2> c{0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a)
        c[a] = g.periodic(a) ? g.origin[a] + (g.n[a] / 2.0) * g.dx[a]
                             : g.origin[a] + 0.5 * (g.n[a] - 1) * g.dx[a];
    return c;
}

} // namespace

SpatialTransform make_identity(const Grid& g) {
    SpatialTransform t;
    t.kind = TransformKind::identity;
    t.grid = g;
    t.perm.resize(g.size());
    std::iota(t.perm.begin(), t.perm.end(), 0u);
    return t;
}

SpatialTransform make_parity(const Grid& g,
                             std::optional<std::array<double, 2>> center) {
    SpatialTransform t;
    t.kind = TransformKind::parity;
    t.grid = g;
    t.center = center.value_or(default_parity_center(g));
    t.perm.resize(g.size());

    // Per axis, reflection about c maps index i to j0 - i with
    // j0 = 2(c - origin)/dx, which must be an integer for the image to land
    // on the lattice (c on a site or half-site).
    long j0[2] = {0, 0};
    for (int a = 0; a < g.dim(); ++a) {
        const double shift = 2.0 * (t.center[a] - g.origin[a]) / g.dx[a];
        j0[a] = to_lattice_int(shift, 1e-9, "parity center off-lattice");
        if (!g.periodic(a) && j0[a] != g.n[a] - 1)
            throw IncompatibleGrid(
                "parity on a Dirichlet axis must reflect about the grid center");
    }

    const int n0 = g.n[0];
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const int ii = g.periodic(0) ? wrap(j0[0] - i, n0)
                                         : static_cast<int>(j0[0] - i);
            int jj = j;
            if (g.dim() == 2)
                jj = g.periodic(1) ? wrap(j0[1] - j, n1)
                                   : static_cast<int>(j0[1] - j);
            t.perm[g.index(i, j)] = static_cast<std::uint32_t>(g.index(ii, jj));
        }
    check_bijection(t.perm);
    return t;
}

SpatialTransform make_translation(const Grid& g, std::array<double, 2> offset) {
    SpatialTransform t;
    t.kind = TransformKind::translation;
    t.grid = g;
    t.offset = offset;
    t.perm.resize(g.size());

    long s[2] = {0, 0};
    for (int a = 0; a < g.dim(); ++a) {
        if (!g.periodic(a))
            throw NonPeriodicGrid("translations are defined on periodic axes only");
        const double ratio = offset[a] / g.dx[a];
        const double r = std::round(ratio);
        if (!(std::abs(ratio - r) <= 1e-9))
            throw NonIntegerOffset("translation offset " + std::to_string(offset[a]) +
                                   " is not an integer multiple of dx");
        s[a] = static_cast<long>(r);
    }

    const int n0 = g.n[0];
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const int ii = wrap(i + s[0], n0);
            const int jj = g.dim() == 2 ? wrap(j + s[1], n1) : j;
            t.perm[g.index(i, j)] = static_cast<std::uint32_t>(g.index(ii, jj));
        }
    check_bijection(t.perm);
    return t;
}

SpatialTransform make_rotation90(const Grid& g, int quarter_turns,
                                 std::optional<std::array<double, 2>> center) {
    if (g.dim() != 2)
        throw IncompatibleGrid("rotation90 needs a 2D grid");
    if (g.n[0] != g.n[1] || g.dx[0] != g.dx[1] || g.bc[0] != g.bc[1])
        throw IncompatibleGrid("rotation90 needs a square grid (equal n, dx, bc)");

    SpatialTransform t;
    t.kind = TransformKind::rotation90;
    t.grid = g;
    t.quarter_turns = ((quarter_turns % 4) + 4) % 4;
    t.center = center.value_or(default_parity_center(g));

    const double i0 = (t.center[0] - g.origin[0]) / g.dx[0];
    const double j0 = (t.center[1] - g.origin[1]) / g.dx[1];
    // One counterclockwise quarter turn sends (i, j) to (p - j, q + i); both
    // p and q must be integers, which allows lattice centers and, on periodic
    // grids, half-site centers shared by both axes.
    const long p = to_lattice_int(i0 + j0, 1e-9, "rotation center off-lattice");
    const long q = to_lattice_int(j0 - i0, 1e-9, "rotation center off-lattice");

    const int n = g.n[0];
    const bool per = g.periodic(0);
    if (!per && (p != n - 1 || q != 0))
        throw IncompatibleGrid(
            "rotation90 on a Dirichlet grid must rotate about the grid center");

    std::vector<std::uint32_t> one(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ii = per ? wrap(p - j, n) : static_cast<int>(p - j);
            const int jj = per ? wrap(q + i, n) : static_cast<int>(q + i);
            one[g.index(i, j)] = static_cast<std::uint32_t>(g.index(ii, jj));
        }

    t.perm.resize(g.size());
    std::iota(t.perm.begin(), t.perm.end(), 0u);
    for (int k = 0; k < t.quarter_turns; ++k) {
        std::vector<std::uint32_t> next(g.size());
        for (std::size_t m = 0; m < g.size(); ++m) next[m] = one[t.perm[m]];
        t.perm = std::move(next);
    }
    check_bijection(t.perm);
    return t;
}

ComplexField apply_transform(const SpatialTransform& t, const ComplexField& f) {
    if (f.grid != t.grid)
        throw GridMismatch("apply_transform: field grid differs from transform grid");
    ComplexField out = make_complex_field(f.grid);
    out.time_tag = f.time_tag;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = f.values[t.perm[k]];
    return out;
}

RealField apply_transform(const SpatialTransform& t, const RealField& f) {
    if (f.grid != t.grid)
        throw GridMismatch("apply_transform: field grid differs from transform grid");
    RealField out = make_real_field(f.grid);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = f.values[t.perm[k]];
    return out;
}

SpatialTransform compose(const SpatialTransform& a, const SpatialTransform& b) {
    if (a.grid != b.grid)
        throw GridMismatch("compose: transforms live on different grids");
    SpatialTransform t;
    t.grid = a.grid;
    t.perm.resize(a.perm.size());
    // x -> a(b(x)): the image of x_k under b has index b.perm[k], and applying
    // a to that lattice point lands on a.perm[b.perm[k]].
    for (std::size_t k = 0; k < t.perm.size(); ++k) t.perm[k] = a.perm[b.perm[k]];

    bool is_id = true;
    for (std::size_t k = 0; k < t.perm.size() && is_id; ++k)
        is_id = (t.perm[k] == k);
    if (is_id) {
        t.kind = TransformKind::identity;
    } else if (a.kind == TransformKind::identity) {
        t.kind = b.kind;
        t.center = b.center;
        t.offset = b.offset;
        t.quarter_turns = b.quarter_turns;
    } else if (b.kind == TransformKind::identity) {
        t.kind = a.kind;
        t.center = a.center;
        t.offset = a.offset;
        t.quarter_turns = a.quarter_turns;
    } else if (a.kind == TransformKind::rotation90 && b.kind == TransformKind::rotation90) {
        t.kind = TransformKind::rotation90;
        t.center = a.center;
        t.quarter_turns = (a.quarter_turns + b.quarter_turns) % 4;
    } else if (a.kind == TransformKind::translation && b.kind == TransformKind::translation) {
        t.kind = TransformKind::translation;
        for (int ax = 0; ax < 2; ++ax) t.offset[ax] = a.offset[ax] + b.offset[ax];
    } else {
        // mixed composition: the permutation is exact, the label is generic
        t.kind = TransformKind::composite;
    }
    return t;
}

SpatialTransform invert(const SpatialTransform& t) {
    SpatialTransform inv;
    inv.grid = t.grid;
    inv.kind = t.kind;
    inv.center = t.center;
    inv.perm.resize(t.perm.size());
    for (std::size_t k = 0; k < t.perm.size(); ++k) inv.perm[t.perm[k]] = static_cast<std::uint32_t>(k);
    switch (t.kind) {
        case TransformKind::translation:
            inv.offset = {-t.offset[0], -t.offset[1]};
            break;
        case TransformKind::rotation90:
            inv.quarter_turns = (4 - t.quarter_turns) % 4;
            break;
        default:
            break; // identity and parity are self-inverse
    }
    return inv;
}

std::string describe(const SpatialTransform& t) {
    switch (t.kind) {
        case TransformKind::identity:
            return "identity";
        case TransformKind::parity: {
            std::string s = "parity(center=" + std::to_string(t.center[0]);
            if (t.grid.dim() == 2) s += "," + std::to_string(t.center[1]);
            return s + ")";
        }
        case TransformKind::translation: {
            std::string s = "translation(offset=" + std::to_string(t.offset[0]);
            if (t.grid.dim() == 2) s += "," + std::to_string(t.offset[1]);
            return s + ")";
        }
        case TransformKind::rotation90:
            return "rotation90(k=" + std::to_string(t.quarter_turns) + ")";
        case TransformKind::composite:
            return "composite";
    }
    return "transform";
}

SpatialTransform make_transform(TransformKind kind, const TransformParams& p,
                                const Grid& g) {
    switch (kind) {
        case TransformKind::identity:
            return make_identity(g);
        case TransformKind::parity:
            return make_parity(g, p.center);
        case TransformKind::translation:
            return make_translation(g, p.offset);
        case TransformKind::rotation90:
            return make_rotation90(g, p.quarter_turns, p.center);
        case TransformKind::composite:
            break;
    }
    throw Error("make_transform: composite transforms are built via compose()");
}

} // namespace gencur
