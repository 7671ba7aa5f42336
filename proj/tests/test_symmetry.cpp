#include <doctest.h>

#include <cmath>
#include <complex>

#include "gencur/errors.hpp"
#include "gencur/grid.hpp"
#include "gencur/symmetry.hpp"
#include "oracles.hpp"

using namespace gencur;

namespace {

Grid square_periodic(int n, double dx, double origin) {
    return Grid({n, n}, {dx, dx}, {origin, origin}, {Bc::periodic, Bc::periodic});
}

} // namespace

TEST_CASE("identity transform leaves indices and fields alone") {
    const Grid g(8, 0.5, -2.0, Bc::periodic);
    const SpatialTransform id = make_identity(g);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(id.perm[k] == k);
    const ComplexField f = oracles::random_field(g, 101);
    CHECK(oracles::max_abs_diff(apply_transform(id, f), f) == 0.0);
}

TEST_CASE("parity about the origin on a periodic axis is i -> (n-i) mod n") {
    const Grid g(8, 0.5, 0.0, Bc::periodic);
    const SpatialTransform p = make_parity(g, std::array<double, 2>{0.0, 0.0});
    for (int i = 0; i < 8; ++i)
        CHECK(p.perm[i] == static_cast<std::uint32_t>((8 - i) % 8));
}

TEST_CASE("parity about the default Dirichlet center is i -> n-1-i") {
    const Grid g(9, 0.5, -2.0, Bc::dirichlet);
    const SpatialTransform p = make_parity(g); // geometric center x = 0
    CHECK(p.center[0] == doctest::Approx(0.0));
    for (int i = 0; i < 9; ++i)
        CHECK(p.perm[i] == static_cast<std::uint32_t>(8 - i));
}

TEST_CASE("translation by whole cells is a cyclic shift") {
    const Grid g(8, 0.5, 0.0, Bc::periodic);
    const SpatialTransform t = make_translation(g, {3 * 0.5, 0.0});
    for (int i = 0; i < 8; ++i)
        CHECK(t.perm[i] == static_cast<std::uint32_t>((i + 3) % 8));
}

TEST_CASE("apply_transform: even fields are fixed, odd fields flip sign") {
    const Grid g(9, 0.5, -2.0, Bc::dirichlet);
    const SpatialTransform p = make_parity(g);

    ComplexField even = make_complex_field(g);
    ComplexField odd = make_complex_field(g);
    for (int i = 0; i < 9; ++i) {
        const double x = g.coord(0, i);
        even.values[i] = complexd(std::cos(x), x * x);
        odd.values[i] = complexd(std::sin(x), x);
    }
    CHECK(oracles::max_abs_diff(apply_transform(p, even), even) == 0.0);

    ComplexField negated = odd;
    for (auto& v : negated.values) v = -v;
    CHECK(oracles::max_abs_diff(apply_transform(p, odd), negated) == 0.0);
}

TEST_CASE("apply_transform composed with the inverse is a round trip") {
    const Grid g = square_periodic(8, 0.25, -1.0);
    const SpatialTransform r = make_rotation90(g, 1, std::array<double, 2>{0.0, 0.0});
    const ComplexField f = oracles::random_field(g, 102);
    const ComplexField back = apply_transform(r, apply_transform(invert(r), f));
    CHECK(oracles::max_abs_diff(back, f) == 0.0);
}

TEST_CASE("invert and compose reproduce the group structure") {
    const Grid g(8, 0.5, 0.0, Bc::periodic);

    const SpatialTransform p = make_parity(g, std::array<double, 2>{0.0, 0.0});
    CHECK(invert(p).perm == p.perm); // parity is an involution
    CHECK(compose(p, p).kind == TransformKind::identity);

    const SpatialTransform fwd = make_translation(g, {2 * 0.5, 0.0});
    const SpatialTransform bwd = make_translation(g, {-2 * 0.5, 0.0});
    CHECK(compose(fwd, bwd).kind == TransformKind::identity);

    // cyclic order n / gcd(n, offset): 8 / gcd(8,2) = 4
    SpatialTransform acc = fwd;
    for (int k = 1; k < 4; ++k) acc = compose(acc, fwd);
    CHECK(acc.kind == TransformKind::identity);

    const Grid sq = square_periodic(8, 0.25, -1.0);
    const SpatialTransform r1 = make_rotation90(sq, 1, std::array<double, 2>{0.0, 0.0});
    const SpatialTransform r3 = make_rotation90(sq, 3, std::array<double, 2>{0.0, 0.0});
    CHECK(compose(r1, r3).kind == TransformKind::identity);

    // mixed composition keeps the exact permutation under a generic label
    const SpatialTransform sqp = make_parity(sq, std::array<double, 2>{0.0, 0.0});
    const SpatialTransform mixed = compose(r1, sqp);
    CHECK(mixed.kind == TransformKind::composite);
    const ComplexField f = oracles::random_field(sq, 103);
    const ComplexField via_mixed = apply_transform(mixed, f);
    const ComplexField via_steps = apply_transform(sqp, apply_transform(r1, f));
    // x -> r1(parity(x)) means the field composition applies r1 first
    CHECK(oracles::max_abs_diff(via_mixed, via_steps) == 0.0);
}

TEST_CASE("rotation90: counterclockwise quarter turn about the grid center") {
    const Grid g({5, 5}, {0.5, 0.5}, {-1.0, -1.0}, {Bc::dirichlet, Bc::dirichlet});
    const SpatialTransform r = make_rotation90(g, 1);

    ComplexField fx = make_complex_field(g);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            fx.values[g.index(i, j)] = complexd(g.coord(0, i), 0.0);

    // out(x, y) = f(R(x, y)) with R(x, y) = (-y, x), so sampling the
    // x-coordinate field through R yields -y.
    const ComplexField rot = apply_transform(r, fx);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(rot.values[g.index(i, j)] ==
                  complexd(-g.coord(1, j), 0.0));

    // four quarter turns close the cycle; negative counts wrap
    SpatialTransform acc = r;
    for (int k = 1; k < 4; ++k) acc = compose(acc, r);
    CHECK(acc.kind == TransformKind::identity);
    CHECK(make_rotation90(g, -1).perm == make_rotation90(g, 3).perm);
}

TEST_CASE("transforms preserve the integral of any field") {
    const Grid g1(9, 0.5, -2.0, Bc::dirichlet);
    const ComplexField f1 = oracles::random_field(g1, 104);
    const SpatialTransform p1 = make_parity(g1);
    CHECK(std::abs(integrate(apply_transform(p1, f1)) - integrate(f1)) < 1e-14);

    const Grid g2 = square_periodic(8, 0.25, -1.0);
    const ComplexField f2 = oracles::random_field(g2, 105);
    for (const SpatialTransform& t :
         {make_rotation90(g2, 1, std::array<double, 2>{0.0, 0.0}),
          make_translation(g2, {0.5, -0.25}),
          make_parity(g2, std::array<double, 2>{0.0, 0.0})})
        CHECK(std::abs(integrate(apply_transform(t, f2)) - integrate(f2)) < 1e-14);
}

TEST_CASE("transforms commute with the Laplacian on the lattice") {
    const Grid g2 = square_periodic(8, 0.25, -1.0);
    const ComplexField f2 = oracles::random_field(g2, 106);
    for (const SpatialTransform& t :
         {make_rotation90(g2, 1, std::array<double, 2>{0.0, 0.0}),
          make_translation(g2, {0.5, 0.25}),
          make_parity(g2, std::array<double, 2>{0.0, 0.0})}) {
        const ComplexField a = apply_transform(t, laplacian(f2));
        const ComplexField b = laplacian(apply_transform(t, f2));
        CHECK(oracles::max_abs_diff(a, b) < 1e-13);
    }

    // Dirichlet parity: the implicit zero ghosts map onto each other
    const Grid g1(9, 0.5, -2.0, Bc::dirichlet);
    const ComplexField f1 = oracles::random_field(g1, 107);
    const SpatialTransform p = make_parity(g1);
    CHECK(oracles::max_abs_diff(apply_transform(p, laplacian(f1)),
                                laplacian(apply_transform(p, f1))) < 1e-13);
}

TEST_CASE("transform construction rejects off-lattice requests") {
    const Grid g(9, 0.5, -2.0, Bc::dirichlet);
    // center between a site and a half-site
    CHECK_THROWS_AS(make_parity(g, std::array<double, 2>{0.13, 0.0}),
                    IncompatibleGrid);
    // Dirichlet parity must be about the geometric center
    CHECK_THROWS_AS(make_parity(g, std::array<double, 2>{0.5, 0.0}),
                    IncompatibleGrid);
    CHECK_THROWS_AS(make_translation(g, {0.5, 0.0}), NonPeriodicGrid);

    const Grid gp(8, 0.5, 0.0, Bc::periodic);
    CHECK_THROWS_AS(make_translation(gp, {0.3, 0.0}), NonIntegerOffset);
    CHECK_THROWS_AS(make_rotation90(gp, 1), IncompatibleGrid); // 1D

    const Grid rect({6, 8}, {0.5, 0.5}, {0.0, 0.0}, {Bc::periodic, Bc::periodic});
    CHECK_THROWS_AS(make_rotation90(rect, 1), IncompatibleGrid);

    const Grid mismatched(8, 0.5, 1.0, Bc::periodic);
    const ComplexField f = oracles::random_field(mismatched, 108);
    CHECK_THROWS_AS(apply_transform(make_identity(gp), f), GridMismatch);
}

TEST_CASE("make_transform mirrors the direct constructors") {
    const Grid g = square_periodic(8, 0.25, -1.0);
    TransformParams params;
    params.center = std::array<double, 2>{0.0, 0.0};
    params.quarter_turns = 2;
    CHECK(make_transform(TransformKind::rotation90, params, g).perm ==
          make_rotation90(g, 2, std::array<double, 2>{0.0, 0.0}).perm);

    TransformParams shift;
    shift.offset = {0.5, 0.0};
    CHECK(make_transform(TransformKind::translation, shift, g).perm ==
          make_translation(g, {0.5, 0.0}).perm);

    CHECK(make_transform(TransformKind::identity, {}, g).kind ==
          TransformKind::identity);
}

TEST_CASE("describe names the transform and its parameters") {
    const Grid g(8, 0.5, 0.0, Bc::periodic);
    CHECK(describe(make_identity(g)) == "identity");
    CHECK(describe(make_parity(g, std::array<double, 2>{0.0, 0.0}))
              .starts_with("parity(center="));
    CHECK(describe(make_translation(g, {1.0, 0.0})).starts_with("translation("));
}

TEST_CASE("apply_transform works on real fields too") {
    const Grid g(9, 0.5, -2.0, Bc::dirichlet);
    RealField v = make_real_field(g);
    for (int i = 0; i < 9; ++i) v.values[i] = g.coord(0, i); // odd profile
    const RealField flipped = apply_transform(make_parity(g), v);
    for (int i = 0; i < 9; ++i) CHECK(flipped.values[i] == -v.values[i]);
}
