#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "gencur/errors.hpp"
#include "gencur/grid.hpp"
#include "oracles.hpp"

using namespace gencur;
using std::numbers::pi;

namespace {

ComplexField sampled(const Grid& g, complexd (*fn)(double, double)) {
    ComplexField f = make_complex_field(g);
    const int n1 = g.dim() == 2 ? g.n[1] : 1;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < n1; ++j)
            f.values[g.index(i, j)] =
                fn(g.coord(0, i), g.dim() == 2 ? g.coord(1, j) : 0.0);
    return f;
}

ComplexField plane_wave(const Grid& g, double k) {
    ComplexField f = make_complex_field(g);
    for (int i = 0; i < g.n[0]; ++i)
        f.values[i] = std::exp(complexd(0.0, k * g.coord(0, i)));
    return f;
}

} // namespace

TEST_CASE("grid: construction, indexing, equality") {
    const Grid g1(8, 0.5, -2.0, Bc::periodic);
    CHECK(g1.dim() == 1);
    CHECK(g1.size() == 8);
    CHECK(g1.coord(0, 3) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g1.index(5) == 5);
    CHECK(g1.periodic(0));

    const Grid g2({4, 6}, {0.1, 0.2}, {0.0, -1.0}, {Bc::dirichlet, Bc::periodic});
    CHECK(g2.size() == 24);
    CHECK(g2.index(2, 3) == 2 * 6 + 3); // row-major, axis 0 slowest
    CHECK(g2.coord(1, 4) == doctest::Approx(-0.2).epsilon(1e-15));

    CHECK(g1 == Grid(8, 0.5, -2.0, Bc::periodic));
    CHECK(g1 != Grid(8, 0.5, -2.0, Bc::dirichlet));
    CHECK(g1 != g2);

    CHECK_THROWS_AS(Grid(3, 0.5, 0.0, Bc::dirichlet), Error);  // too few points
    CHECK_THROWS_AS(Grid(8, 0.0, 0.0, Bc::dirichlet), Error);  // zero spacing
    CHECK_THROWS_AS(Grid(8, -0.1, 0.0, Bc::dirichlet), Error); // negative spacing
}

TEST_CASE("gradient: constant field") {
    const complexd c(2.5, -1.0);

    const Grid gp(16, 0.25, -2.0, Bc::periodic);
    ComplexField f = make_complex_field(gp);
    for (auto& v : f.values) v = c;
    const VectorField d = gradient(f);
    for (const auto& v : d.comp[0]) CHECK(std::abs(v) == 0.0);

    // Dirichlet: interior gradient vanishes; the endpoint rows see the zero
    // ghost value, so they report the one-sided slope +-c/(2dx).
    const Grid gd(9, 0.5, -2.0, Bc::dirichlet);
    ComplexField fd = make_complex_field(gd);
    for (auto& v : fd.values) v = c;
    const VectorField dd = gradient(fd);
    for (int i = 1; i < gd.n[0] - 1; ++i) CHECK(std::abs(dd.comp[0][i]) == 0.0);
    CHECK(std::abs(dd.comp[0][0] - c / (2.0 * gd.dx[0])) < 1e-15);
    CHECK(std::abs(dd.comp[0][8] + c / (2.0 * gd.dx[0])) < 1e-15);
}

TEST_CASE("gradient: periodic plane wave picks up the discrete wavenumber") {
    const Grid g(16, 0.25, -2.0, Bc::periodic);
    const double length = 16 * 0.25;
    const double k = 2.0 * pi * 3.0 / length;
    const ComplexField f = plane_wave(g, k);
    const VectorField d = gradient(f);

    // (e^{ik(x+dx)} - e^{ik(x-dx)})/2dx = i sin(k dx)/dx * e^{ikx}
    const complexd factor(0.0, std::sin(k * g.dx[0]) / g.dx[0]);
    for (int i = 0; i < g.n[0]; ++i)
        CHECK(std::abs(d.comp[0][i] - factor * f.values[i]) < 1e-13);
}

TEST_CASE("gradient: matches the index-by-index oracle on random fields") {
    const Grid grids[] = {
        Grid(13, 0.3, -1.0, Bc::dirichlet),
        Grid(16, 0.25, 0.0, Bc::periodic),
        Grid({8, 8}, {0.2, 0.4}, {-1.0, 0.0}, {Bc::dirichlet, Bc::periodic}),
    };
    unsigned long seed = 11;
    for (const Grid& g : grids) {
        const ComplexField f = oracles::random_field(g, seed++);
        const VectorField d = gradient(f);
        for (int axis = 0; axis < g.dim(); ++axis) {
            const ComplexField expect = oracles::gradient_axis(f, axis);
            ComplexField got;
            got.grid = g;
            got.values = d.comp[axis];
            CHECK(oracles::max_abs_diff(got, expect) < 1e-14);
        }
    }
}

TEST_CASE("divergence: constant vector field") {
    const Grid g(16, 0.25, 0.0, Bc::periodic);
    VectorField v = make_vector_field(g);
    for (auto& x : v.comp[0]) x = complexd(1.0, 2.0);
    const ComplexField d = divergence(v);
    for (const auto& x : d.values) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("divergence of gradient: wide-stencil symbol on a plane wave") {
    const Grid g(32, 0.125, 0.0, Bc::periodic);
    const double k = 2.0 * pi * 5.0 / (32 * 0.125);
    const ComplexField f = plane_wave(g, k);
    const ComplexField dd = divergence(gradient(f));

    // Two nested central first differences give the wide second difference,
    // whose plane-wave symbol is -(sin(k dx)/dx)^2. This is not the compact
    // 3-point Laplacian symbol; the two operators differ on the lattice.
    const double s = std::sin(k * g.dx[0]) / g.dx[0];
    for (int i = 0; i < g.n[0]; ++i)
        CHECK(std::abs(dd.values[i] + s * s * f.values[i]) < 1e-11);
}

TEST_CASE("divergence: rotational 2D field is divergence-free in the interior") {
    const Grid g({9, 9}, {0.5, 0.5}, {-2.0, -2.0}, {Bc::dirichlet, Bc::dirichlet});
    VectorField v = make_vector_field(g);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            v.comp[0][g.index(i, j)] = complexd(g.coord(1, j), 0.0);  // y
            v.comp[1][g.index(i, j)] = complexd(-g.coord(0, i), 0.0); // -x
        }
    const ComplexField d = divergence(v);
    for (int i = 1; i < 8; ++i)
        for (int j = 1; j < 8; ++j)
            CHECK(std::abs(d.values[g.index(i, j)]) == 0.0);
}

TEST_CASE("divergence: matches the oracle on random vector fields") {
    const Grid g({8, 10}, {0.2, 0.3}, {0.0, -1.0}, {Bc::periodic, Bc::dirichlet});
    VectorField v = make_vector_field(g);
    v.comp[0] = oracles::random_field(g, 21).values;
    v.comp[1] = oracles::random_field(g, 22).values;
    const ComplexField got = divergence(v);
    const ComplexField expect = oracles::divergence(v);
    CHECK(oracles::max_abs_diff(got, expect) < 1e-13);
}

TEST_CASE("laplacian: linear field is flat in the interior") {
    const Grid g(11, 0.4, -2.0, Bc::dirichlet);
    const ComplexField f = sampled(
        g, +[](double x, double) { return complexd(0.7 + 1.3 * x, -0.2 * x); });
    const ComplexField lap = laplacian(f);
    for (int i = 1; i < 10; ++i) CHECK(std::abs(lap.values[i]) < 1e-14);
}

TEST_CASE("laplacian: compact symbol on a periodic plane wave") {
    const Grid g(32, 0.125, 0.0, Bc::periodic);
    const double k = 2.0 * pi * 5.0 / (32 * 0.125);
    const ComplexField f = plane_wave(g, k);
    const ComplexField lap = laplacian(f);
    const double symbol =
        -2.0 * (1.0 - std::cos(k * g.dx[0])) / (g.dx[0] * g.dx[0]);
    for (int i = 0; i < g.n[0]; ++i)
        CHECK(std::abs(lap.values[i] - symbol * f.values[i]) < 1e-11);
}

TEST_CASE("laplacian: matches the oracle; div(grad) is the wide variant") {
    const Grid g({8, 8}, {0.25, 0.25}, {-1.0, -1.0}, {Bc::dirichlet, Bc::dirichlet});
    const ComplexField f = oracles::random_field(g, 31);
    CHECK(oracles::max_abs_diff(laplacian(f), oracles::laplacian(f)) < 1e-12);

    VectorField og = make_vector_field(g);
    og.comp[0] = oracles::gradient_axis(f, 0).values;
    og.comp[1] = oracles::gradient_axis(f, 1).values;
    CHECK(oracles::max_abs_diff(divergence(gradient(f)), oracles::divergence(og)) <
          1e-12);
}

TEST_CASE("laplacian and div(grad) agree to O(dx^2) on smooth data only") {
    // Same smooth profile on two resolutions: the gap between the compact and
    // the wide stencil is a discretization artifact and must shrink by ~4x.
    auto gap = [](int n) {
        const Grid g(n, 2.0 * pi / n, 0.0, Bc::periodic);
        const ComplexField f = sampled(
            g, +[](double x, double) { return complexd(std::exp(std::sin(x)), 0.0); });
        return oracles::max_abs_diff(laplacian(f), divergence(gradient(f)));
    };
    const double coarse = gap(64);
    const double fine = gap(128);
    CHECK(coarse / fine >= 3.5);
}

TEST_CASE("integrate: constants, odd fields, normalized gaussian") {
    // periodic: exactly n*dx*c (one full period)
    const Grid gp(16, 0.25, -2.0, Bc::periodic);
    ComplexField f = make_complex_field(gp);
    for (auto& v : f.values) v = complexd(0.0, 3.0);
    CHECK(std::abs(integrate(f) - complexd(0.0, 3.0 * 4.0)) < 1e-14);

    // Dirichlet: stored points are interior, walls carry the implicit zeros,
    // so a constant integrates to n*dx*c, within one cell of the open extent.
    const Grid gd(9, 0.5, -2.0, Bc::dirichlet);
    ComplexField fd = make_complex_field(gd);
    for (auto& v : fd.values) v = complexd(1.0, 0.0);
    CHECK(std::abs(integrate(fd) - complexd(4.5, 0.0)) < 1e-14);

    // odd polynomial on a symmetric grid cancels pairwise
    const ComplexField odd = sampled(
        gd, +[](double x, double) { return complexd(x * x * x, 0.5 * x); });
    CHECK(std::abs(integrate(odd)) < 1e-14);

    // normalized gaussian: uniform-weight quadrature is spectrally accurate
    const Grid gg(321, 0.05, -8.0, Bc::dirichlet);
    const ComplexField gauss = sampled(gg, +[](double x, double) {
        return complexd(std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi), 0.0);
    });
    CHECK(std::abs(integrate(gauss) - 1.0) < 1e-8);
}

TEST_CASE("integrate: linearity and agreement with the compensated oracle") {
    const Grid g({8, 10}, {0.2, 0.3}, {0.0, -1.0}, {Bc::dirichlet, Bc::periodic});
    const ComplexField f = oracles::random_field(g, 41);
    const ComplexField h = oracles::random_field(g, 42);
    const complexd alpha(0.3, -1.7), beta(-2.0, 0.4);

    ComplexField combo = f;
    for (std::size_t k = 0; k < combo.values.size(); ++k)
        combo.values[k] = alpha * f.values[k] + beta * h.values[k];
    CHECK(std::abs(integrate(combo) - (alpha * integrate(f) + beta * integrate(h))) <
          1e-13);

    CHECK(std::abs(integrate(f) - oracles::integrate(f)) < 1e-13);
}

TEST_CASE("inner: positivity, conjugate symmetry, grid mismatch") {
    const Grid g(16, 0.25, 0.0, Bc::periodic);
    const ComplexField f = oracles::random_field(g, 51);
    const ComplexField h = oracles::random_field(g, 52);

    const complexd ff = inner(f, f);
    CHECK(ff.real() > 0.0);
    CHECK(std::abs(ff.imag()) < 1e-15 * ff.real());
    CHECK(std::abs(inner(f, h) - std::conj(inner(h, f))) < 1e-14);

    const double n2 = l2_norm(f);
    CHECK(n2 * n2 == doctest::Approx(ff.real()).epsilon(1e-12));

    const Grid other(16, 0.25, 1.0, Bc::periodic);
    CHECK_THROWS_AS(inner(f, oracles::random_field(other, 53)), GridMismatch);
}

TEST_CASE("inner: discrete sine modes on a Dirichlet box are orthogonal") {
    // Box walls at x = 0 and x = 1 are the ghost sites; stored points are the
    // 15 interior samples. sin(p pi x) there is the exact DST-I basis.
    const int n = 15;
    const double dx = 1.0 / (n + 1);
    const Grid g(n, dx, dx, Bc::dirichlet);
    auto mode = [&](int p) {
        ComplexField f = make_complex_field(g);
        for (int i = 0; i < n; ++i)
            f.values[i] = complexd(std::sin(p * pi * g.coord(0, i)), 0.0);
        return f;
    };
    const ComplexField f2 = mode(2), f3 = mode(3), f7 = mode(7);
    CHECK(std::abs(inner(f2, f3)) < 1e-10);
    CHECK(std::abs(inner(f2, f7)) < 1e-10);
    CHECK(std::abs(inner(f3, f7)) < 1e-10);
    // diagonal: sum sin^2 = (n+1)/2, times dx
    CHECK(inner(f2, f2).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrate(divergence) vanishes on fully periodic grids") {
    const Grid g1(16, 0.25, 0.0, Bc::periodic);
    VectorField v1 = make_vector_field(g1);
    v1.comp[0] = oracles::random_field(g1, 61).values;
    CHECK(std::abs(integrate(divergence(v1))) < 1e-13);

    const Grid g2({8, 8}, {0.3, 0.2}, {0.0, 0.0}, {Bc::periodic, Bc::periodic});
    VectorField v2 = make_vector_field(g2);
    v2.comp[0] = oracles::random_field(g2, 62).values;
    v2.comp[1] = oracles::random_field(g2, 63).values;
    CHECK(std::abs(integrate(divergence(v2))) < 1e-13);
}

TEST_CASE("gradient and laplacian converge at second order") {
    auto errors = [](int n) {
        const Grid g(n, 2.0 * pi / n, 0.0, Bc::periodic);
        ComplexField f = make_complex_field(g);
        ComplexField d1 = make_complex_field(g);
        ComplexField d2 = make_complex_field(g);
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(0, i);
            const double e = std::exp(std::sin(x));
            f.values[i] = e;
            d1.values[i] = std::cos(x) * e;
            d2.values[i] = (std::cos(x) * std::cos(x) - std::sin(x)) * e;
        }
        const VectorField gnum = gradient(f);
        ComplexField gfield;
        gfield.grid = g;
        gfield.values = gnum.comp[0];
        return std::pair<double, double>{oracles::max_abs_diff(gfield, d1),
                                         oracles::max_abs_diff(laplacian(f), d2)};
    };
    const auto coarse = errors(64);
    const auto fine = errors(128);
    CHECK(coarse.first / fine.first >= 3.5);
    CHECK(coarse.second / fine.second >= 3.5);
}

TEST_CASE("quad_weight totals the same measure integrate uses") {
    const Grid g({6, 7}, {0.2, 0.3}, {0.0, 0.0}, {Bc::dirichlet, Bc::periodic});
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) total += quad_weight(g, i, j);
    ComplexField ones = make_complex_field(g);
    for (auto& v : ones.values) v = 1.0;
    CHECK(total == doctest::Approx(integrate(ones).real()).epsilon(1e-13));
}

TEST_CASE("pairwise_sum matches a compensated serial sum") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> terms(1000);
    for (auto& t : terms) t = dist(rng);
    double s = 0.0, c = 0.0;
    for (double t : terms) {
        const double y = t - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    CHECK(std::abs(pairwise_sum(terms.data(), terms.size()) - s) < 1e-12);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
    const double cases[] = {0.1,    1.0 / 3.0, pi, 1e300, 2.2250738585072014e-308,
                            -7.25,  0.0,       1.0 + 1e-15};
    for (double v : cases) {
        const std::string s = fmt17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("field CSV: stream and file round trips are bit-exact") {
    const Grid g({5, 6}, {0.2, 0.3}, {-0.4, 0.1}, {Bc::dirichlet, Bc::periodic});
    ComplexField f = oracles::random_field(g, 81);
    f.values[3] = complexd(1e-300, -3.0);

    std::stringstream ss;
    write_field_csv(ss, f);
    const ComplexField back = read_field_csv(ss);
    CHECK(back.grid == g);
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k)
        CHECK(back.values[k] == f.values[k]);

    const auto path =
        (std::filesystem::temp_directory_path() / "gencur_grid_io.csv").string();
    write_field_csv(path, f);
    const ComplexField back2 = read_field_csv(path);
    CHECK(back2.grid == g);
    CHECK(back2.values == f.values);
    std::filesystem::remove(path);
}

TEST_CASE("field CSV: malformed inputs raise IoError") {
    CHECK_THROWS_AS(parse_grid_header("nonsense"), IoError);
    std::stringstream truncated;
    truncated << grid_header(Grid(8, 0.5, 0.0, Bc::dirichlet)) << "\n"
              << "0,1.0,2.0\n"; // 7 rows missing
    CHECK_THROWS_AS(read_field_csv(truncated), IoError);
    CHECK_THROWS_AS(read_field_csv(std::string("/nonexistent/gencur.csv")), IoError);
}

TEST_CASE("grid header round trip") {
    const Grid g({5, 6}, {0.2, 0.3}, {-0.4, 0.1}, {Bc::periodic, Bc::dirichlet});
    CHECK(parse_grid_header(grid_header(g)) == g);
    const Grid g1(9, 0.125, -0.5, Bc::dirichlet);
    CHECK(parse_grid_header(grid_header(g1)) == g1);
}
