#include "gencur/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gencur/errors.hpp"
#include "gencur/propagator.hpp"

namespace gencur {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& require_key(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing required field '") + key + "'");
    return *it;
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(where, "unknown field '" + it.key() + "'");
    }
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

// Per-axis array sized by the grid dimension; a second entry of 0 is filled
// in for 1D so the std::array<double,2> parameter bags stay uniform.
std::array<double, 2> as_axis_numbers(const json& j, const std::string& where,
                                      int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(where, "expected an array of " + std::to_string(dim) + " numbers");
    std::array<double, 2> out{0.0, 0.0};
    for (int a = 0; a < dim; ++a) out[a] = as_number(j[a], where);
    return out;
}

complexd as_complex(const json& j, const std::string& where) {
    if (j.is_number()) return complexd(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return complexd(as_number(j[0], where), as_number(j[1], where));
    fail(where, "expected a number or a [re, im] pair");
}

Grid parse_grid(const json& j) {
    check_keys(j, "grid", {"n", "dx", "origin", "bc"});
    const json& jn = require_key(j, "grid", "n");
    if (!jn.is_array() || jn.empty() || jn.size() > 2)
        fail("grid.n", "expected an array of 1 or 2 entries");
    const int dim = static_cast<int>(jn.size());

    std::array<int, 2> n{0, 0};
    for (int a = 0; a < dim; ++a) n[a] = as_int(jn[a], "grid.n");

    const double dx = as_number(require_key(j, "grid", "dx"), "grid.dx");
    std::array<double, 2> origin =
        as_axis_numbers(require_key(j, "grid", "origin"), "grid.origin", dim);

    const json& jbc = require_key(j, "grid", "bc");
    if (!jbc.is_array() || static_cast<int>(jbc.size()) != dim)
        fail("grid.bc", "expected an array of " + std::to_string(dim) + " entries");
    std::array<Bc, 2> bc{Bc::dirichlet, Bc::dirichlet};
    for (int a = 0; a < dim; ++a) {
        const std::string s = as_string(jbc[a], "grid.bc");
        try {
            bc[a] = bc_from_string(s);
        } catch (const Error& e) {
            fail("grid.bc", e.what());
        }
    }

    try {
        if (dim == 1) return Grid(n[0], dx, origin[0], bc[0]);
        return Grid(n, {dx, dx}, origin, bc);
    } catch (const Error& e) {
        fail("grid", e.what());
    }
}

PotentialSpec parse_potential(const json& j, const std::string& where, int dim) {
    PotentialSpec p;
    if (!j.is_object()) fail(where, "expected an object");
    p.preset = as_string(require_key(j, where, "preset"), where + ".preset");

    if (p.preset == "zero") {
        check_keys(j, where, {"preset"});
    } else if (p.preset == "constant") {
        check_keys(j, where, {"preset", "value"});
        p.value = as_number(require_key(j, where, "value"), where + ".value");
    } else if (p.preset == "harmonic") {
        check_keys(j, where, {"preset", "omega"});
        p.omega = as_number(require_key(j, where, "omega"), where + ".omega");
    } else if (p.preset == "linear") {
        check_keys(j, where, {"preset", "slope"});
        p.slope = as_axis_numbers(require_key(j, where, "slope"),
                                  where + ".slope", dim);
    } else if (p.preset == "cosine_lattice") {
        check_keys(j, where, {"preset", "amp", "period"});
        p.amp = as_number(require_key(j, where, "amp"), where + ".amp");
        p.period = as_number(require_key(j, where, "period"), where + ".period");
    } else if (p.preset == "gaussian") {
        check_keys(j, where, {"preset", "amp", "center", "sigma"});
        p.amp = as_number(require_key(j, where, "amp"), where + ".amp");
        p.center = as_axis_numbers(require_key(j, where, "center"),
                                   where + ".center", dim);
        p.sigma = as_number(require_key(j, where, "sigma"), where + ".sigma");
    } else if (p.preset == "polynomial") {
        check_keys(j, where, {"preset", "coeffs"});
        const json& jc = require_key(j, where, "coeffs");
        if (!jc.is_array() || jc.empty())
            fail(where + ".coeffs", "expected a non-empty array");
        for (const auto& c : jc) p.coeffs.push_back(as_number(c, where + ".coeffs"));
    } else if (p.preset == "cos2d") {
        check_keys(j, where, {"preset", "amp", "rel"});
        p.amp = as_number(require_key(j, where, "amp"), where + ".amp");
        p.rel = as_int(require_key(j, where, "rel"), where + ".rel");
    } else if (p.preset == "xy") {
        check_keys(j, where, {"preset", "amp"});
        p.amp = as_number(require_key(j, where, "amp"), where + ".amp");
    } else if (p.preset == "file") {
        check_keys(j, where, {"preset", "path"});
        p.path = as_string(require_key(j, where, "path"), where + ".path");
    } else {
        fail(where + ".preset", "unknown preset '" + p.preset + "'");
    }
    return p;
}

InitialSpec parse_initial(const json& j, const std::string& where, const Grid& g) {
    InitialSpec spec;
    if (!j.is_object()) fail(where, "expected an object");
    spec.preset = as_string(require_key(j, where, "preset"), where + ".preset");

    auto require_periodic = [&]() {
        for (int a = 0; a < g.dim(); ++a) {
            if (!g.periodic(a))
                fail(where, "preset '" + spec.preset + "' needs periodic axes");
        }
    };

    if (spec.preset == "gaussian") {
        check_keys(j, where, {"preset", "x0", "sigma", "k0"});
        spec.x0 = as_axis_numbers(require_key(j, where, "x0"), where + ".x0", g.dim());
        spec.sigma = as_number(require_key(j, where, "sigma"), where + ".sigma");
        if (!(spec.sigma > 0.0)) fail(where + ".sigma", "must be positive");
        if (j.contains("k0"))
            spec.k0 = as_axis_numbers(j.at("k0"), where + ".k0", g.dim());
    } else if (spec.preset == "eigenstate") {
        check_keys(j, where, {"preset", "shift"});
        if (g.dim() != 1) fail(where, "eigenstate initial data is 1D only");
        spec.shift = as_complex(require_key(j, where, "shift"), where + ".shift");
    } else if (spec.preset == "plane_wave") {
        check_keys(j, where, {"preset", "k"});
        require_periodic();
        spec.k0 = as_axis_numbers(require_key(j, where, "k"), where + ".k", g.dim());
    } else if (spec.preset == "superposition") {
        check_keys(j, where, {"preset", "waves"});
        require_periodic();
        const json& jw = require_key(j, where, "waves");
        if (!jw.is_array() || jw.empty())
            fail(where + ".waves", "expected a non-empty array");
        for (const auto& w : jw) {
            check_keys(w, where + ".waves[]", {"amplitude", "k"});
            InitialSpec::Wave wave;
            wave.amplitude = as_complex(require_key(w, where + ".waves[]", "amplitude"),
                                        where + ".waves[].amplitude");
            wave.k = as_axis_numbers(require_key(w, where + ".waves[]", "k"),
                                     where + ".waves[].k", g.dim());
            spec.waves.push_back(wave);
        }
    } else if (spec.preset == "file") {
        check_keys(j, where, {"preset", "path"});
        spec.path = as_string(require_key(j, where, "path"), where + ".path");
    } else if (spec.preset == "random") {
        check_keys(j, where, {"preset", "seed"});
        const json& js = require_key(j, where, "seed");
        if (!js.is_number_unsigned()) fail(where + ".seed", "expected a non-negative integer");
        spec.seed = js.get<unsigned long>();
    } else {
        fail(where + ".preset", "unknown preset '" + spec.preset + "'");
    }
    return spec;
}

TransformSpec parse_transform(const json& j, const Grid& g) {
    TransformSpec t;
    if (!j.is_object()) fail("transform", "expected an object");
    const std::string kind =
        as_string(require_key(j, "transform", "kind"), "transform.kind");
    if (kind == "identity") {
        check_keys(j, "transform", {"kind"});
        t.kind = TransformKind::identity;
    } else if (kind == "parity") {
        check_keys(j, "transform", {"kind", "center"});
        t.kind = TransformKind::parity;
        if (j.contains("center"))
            t.params.center =
                as_axis_numbers(j.at("center"), "transform.center", g.dim());
    } else if (kind == "translation") {
        check_keys(j, "transform", {"kind", "offset_cells"});
        t.kind = TransformKind::translation;
        const json& jo = require_key(j, "transform", "offset_cells");
        if (!jo.is_array() || static_cast<int>(jo.size()) != g.dim())
            fail("transform.offset_cells",
                 "expected an array of " + std::to_string(g.dim()) + " integers");
        for (int a = 0; a < g.dim(); ++a) {
            const int cells = as_int(jo[a], "transform.offset_cells");
            t.params.offset[a] = cells * g.dx[a];
        }
    } else if (kind == "rotation90") {
        check_keys(j, "transform", {"kind", "quarter_turns", "center"});
        t.kind = TransformKind::rotation90;
        if (j.contains("quarter_turns"))
            t.params.quarter_turns =
                as_int(j.at("quarter_turns"), "transform.quarter_turns");
        if (j.contains("center"))
            t.params.center =
                as_axis_numbers(j.at("center"), "transform.center", g.dim());
    } else {
        fail("transform.kind", "unknown kind '" + kind + "'");
    }
    // Realizability on this grid (lattice-aligned center, periodic axes for
    // translations) is part of config validation, not a run-time surprise.
    try {
        make_transform(t.kind, t.params, g);
    } catch (const Error& e) {
        fail("transform", e.what());
    }
    return t;
}

std::string short3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string case_set_string(const std::set<SymmetryCase>& cls) {
    std::string out = "{";
    bool first = true;
    for (SymmetryCase c : cls) {
        if (!first) out += ',';
        first = false;
        switch (c) {
            case SymmetryCase::no_symmetry_a: out += 'a'; break;
            case SymmetryCase::f_symmetric_b: out += 'b'; break;
            case SymmetryCase::ft_symmetric_c: out += 'c'; break;
        }
    }
    return out + "}";
}

// Symmetry case a pairing kind depends on; nullopt for the unconditional ones.
std::optional<SymmetryCase> required_case(PairingTag tag) {
    switch (tag) {
        case PairingTag::bilocal_f: return SymmetryCase::ft_symmetric_c;
        case PairingTag::combined_ft: return SymmetryCase::f_symmetric_b;
        default: return std::nullopt;
    }
}

double interior_max_residual(const ConservationReport& rep) {
    // Rows 0 and last use one-sided first-order time differences; exclude
    // them so refinement ratios see the second-order interior estimator.
    double worst = 0.0;
    if (rep.residual_norm.size() < 3) return 0.0;
    for (std::size_t i = 1; i + 1 < rep.residual_norm.size(); ++i)
        worst = std::max(worst, rep.residual_norm[i]);
    return worst;
}

std::string snapshot_name(const char* slot, int m) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "fields/psi_%s_m%+05d.csv", slot, m);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    return os;
}

// --- bundled scenarios -------------------------------------------------------

const std::vector<std::pair<std::string, std::string>>& bundled_table() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"hermitian_parity_box", R"json({
  "name": "hermitian_parity_box",
  "description": "Hermitian harmonic well in a Dirichlet box; parity symmetry keeps the ordinary, mixed, and bilocal charges conserved.",
  "grid": {"n": [321], "dx": 0.05, "origin": [-8.0], "bc": ["dirichlet"]},
  "potential": {"preset": "harmonic", "omega": 1.0},
  "gain_loss": {"preset": "zero"},
  "transform": {"kind": "parity", "center": [0.0]},
  "initial": {"preset": "gaussian", "x0": [1.0], "sigma": 1.0, "k0": [0.8]},
  "dt": 0.001,
  "steps": 1000,
  "kinds": ["ordinary", "mixed", "bilocal_f"],
  "snapshot_stride": 200
}
)json"},
        {"pt_linear_gain_loss", R"json({
  "name": "pt_linear_gain_loss",
  "description": "Harmonic trap with linear gain/loss W = 0.3x, PT symmetric under parity: the bilocal quasipower and the mixed charge are conserved, the combined FT kind is rejected by classification, and the single-state expectation of H drifts.",
  "grid": {"n": [401], "dx": 0.05, "origin": [-10.0], "bc": ["dirichlet"]},
  "potential": {"preset": "harmonic", "omega": 1.0},
  "gain_loss": {"preset": "linear", "slope": [0.3]},
  "transform": {"kind": "parity", "center": [0.0]},
  "initial": {"preset": "gaussian", "x0": [1.0], "sigma": 1.0, "k0": [0.0]},
  "dt": 0.001,
  "steps": 1000,
  "kinds": ["mixed", "bilocal_f", "combined_ft"],
  "snapshot_stride": 200
}
)json"},
        {"pure_loss_uniform", R"json({
  "name": "pure_loss_uniform",
  "description": "Uniform loss W = -0.25 on a harmonic trap: the ordinary norm decays (violated) while the mixed and combined FT charges stay conserved.",
  "grid": {"n": [321], "dx": 0.05, "origin": [-8.0], "bc": ["dirichlet"]},
  "potential": {"preset": "harmonic", "omega": 1.0},
  "gain_loss": {"preset": "constant", "value": -0.25},
  "transform": {"kind": "parity", "center": [0.0]},
  "initial": {"preset": "gaussian", "x0": [0.5], "sigma": 1.0, "k0": [0.5]},
  "dt": 0.001,
  "steps": 1000,
  "kinds": ["ordinary", "mixed", "combined_ft"],
  "snapshot_stride": 200
}
)json"},
        {"lattice_translation", R"json({
  "name": "lattice_translation",
  "description": "Hermitian cosine lattice on a periodic ring; the ground state from inverse iteration keeps the translation bilocal current spatially flat.",
  "grid": {"n": [160], "dx": 0.1, "origin": [0.0], "bc": ["periodic"]},
  "potential": {"preset": "cosine_lattice", "amp": 0.3, "period": 2.0},
  "gain_loss": {"preset": "zero"},
  "transform": {"kind": "translation", "offset_cells": [20]},
  "initial": {"preset": "eigenstate", "shift": [-0.2, 0.0]},
  "dt": 0.002,
  "steps": 500,
  "kinds": ["ordinary", "bilocal_f", "combined_ft"],
  "snapshot_stride": 100
}
)json"},
        {"rotation90_2d", R"json({
  "name": "rotation90_2d",
  "description": "2D periodic cell with a quarter-turn symmetric potential and quarter-turn antisymmetric gain/loss; split-step evolution conserves the rotation bilocal charge.",
  "grid": {"n": [64, 64], "dx": 0.2, "origin": [-6.4, -6.4], "bc": ["periodic", "periodic"]},
  "potential": {"preset": "cos2d", "amp": 0.5, "rel": 1},
  "gain_loss": {"preset": "cos2d", "amp": 0.1, "rel": -1},
  "transform": {"kind": "rotation90", "quarter_turns": 1, "center": [0.0, 0.0]},
  "initial": {"preset": "gaussian", "x0": [0.8, -0.6], "sigma": 1.2, "k0": [0.5, 0.3]},
  "dt": 0.002,
  "steps": 250,
  "kinds": ["mixed", "bilocal_f", "combined_ft"],
  "snapshot_stride": 50
}
)json"},
        {"no_symmetry_negative_control", R"json({
  "name": "no_symmetry_negative_control",
  "description": "Asymmetric cubic-tilted well with an off-center gaussian gain: classification rejects both symmetry kinds; forcing them shows visible drift while the bitemporal charge stays conserved.",
  "grid": {"n": [321], "dx": 0.05, "origin": [-8.0], "bc": ["dirichlet"]},
  "potential": {"preset": "polynomial", "coeffs": [0.0, 0.0, 0.5, 0.05]},
  "gain_loss": {"preset": "gaussian", "amp": 0.2, "center": [0.7], "sigma": 1.5},
  "transform": {"kind": "parity", "center": [0.0]},
  "initial": {"preset": "gaussian", "x0": [-0.5], "sigma": 0.8, "k0": [1.0]},
  "dt": 0.001,
  "steps": 800,
  "kinds": ["bitemporal_t", "bilocal_f", "combined_ft"],
  "force": true,
  "snapshot_stride": 200
}
)json"},
    };
    return table;
}

} // namespace

RealField build_potential(const PotentialSpec& p, const Grid& g) {
    if (p.preset == "zero") return zero_potential(g);
    if (p.preset == "constant") return constant_potential(g, p.value);
    if (p.preset == "harmonic") return harmonic_potential(g, p.omega);
    if (p.preset == "linear") return linear_potential(g, p.slope);
    if (p.preset == "cosine_lattice")
        return cosine_lattice_potential(g, p.amp, p.period);
    if (p.preset == "gaussian")
        return gaussian_potential(g, p.amp, p.center, p.sigma);
    if (p.preset == "polynomial") return polynomial_potential(g, p.coeffs);
    if (p.preset == "cos2d") return cos2d_potential(g, p.amp, p.rel);
    if (p.preset == "xy") return xy_potential(g, p.amp);
    if (p.preset == "file") {
        ComplexField f = read_field_csv(p.path);
        if (f.grid != g)
            throw ConfigError("potential file " + p.path +
                              " is sampled on a different grid");
        RealField out = make_real_field(g);
        for (std::size_t k = 0; k < out.values.size(); ++k)
            out.values[k] = f.values[k].real();
        return out;
    }
    throw ConfigError("unknown potential preset '" + p.preset + "'");
}

namespace {

// k snapped to the nearest lattice wavenumber 2*pi*j/(n*dx) per axis so the
// exponential is exactly periodic on the ring.
std::array<double, 2> snap_wavenumber(const Grid& g, std::array<double, 2> k) {
    std::array<double, 2> out{0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) {
        const double length = g.n[a] * g.dx[a];
        const double j = std::round(k[a] * length / (2.0 * kPi));
        out[a] = 2.0 * kPi * j / length;
    }
    return out;
}

void add_plane_wave(ComplexField& f, complexd amplitude, std::array<double, 2> k) {
    const Grid& g = f.grid;
    if (g.dim() == 1) {
        for (int i = 0; i < g.n[0]; ++i)
            f.values[i] += amplitude * std::exp(complexd(0.0, k[0] * g.coord(0, i)));
        return;
    }
    for (int i = 0; i < g.n[0]; ++i) {
        for (int j = 0; j < g.n[1]; ++j) {
            const double phase = k[0] * g.coord(0, i) + k[1] * g.coord(1, j);
            f.values[g.index(i, j)] += amplitude * std::exp(complexd(0.0, phase));
        }
    }
}

void normalize(ComplexField& f) {
    const double norm = l2_norm(f);
    if (!(norm > 0.0)) throw ConfigError("initial field has zero norm");
    for (auto& v : f.values) v /= norm;
}

} // namespace

ComplexField build_initial(const InitialSpec& spec, const HamiltonianSpec& h,
                           Sign sign) {
    const Grid& g = h.grid;
    if (spec.preset == "gaussian") {
        ComplexField f = make_complex_field(g);
        const double inv2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
        if (g.dim() == 1) {
            for (int i = 0; i < g.n[0]; ++i) {
                const double x = g.coord(0, i);
                const double r2 = (x - spec.x0[0]) * (x - spec.x0[0]);
                f.values[i] = std::exp(complexd(-r2 * inv2s2, spec.k0[0] * x));
            }
        } else {
            for (int i = 0; i < g.n[0]; ++i) {
                for (int j = 0; j < g.n[1]; ++j) {
                    const double x = g.coord(0, i);
                    const double y = g.coord(1, j);
                    const double r2 = (x - spec.x0[0]) * (x - spec.x0[0]) +
                                      (y - spec.x0[1]) * (y - spec.x0[1]);
                    const double phase = spec.k0[0] * x + spec.k0[1] * y;
                    f.values[g.index(i, j)] = std::exp(complexd(-r2 * inv2s2, phase));
                }
            }
        }
        normalize(f);
        return f;
    }
    if (spec.preset == "eigenstate") {
        return stationary_state(h, sign, spec.shift).field;
    }
    if (spec.preset == "plane_wave") {
        ComplexField f = make_complex_field(g);
        add_plane_wave(f, complexd(1.0, 0.0), snap_wavenumber(g, spec.k0));
        return f;
    }
    if (spec.preset == "superposition") {
        ComplexField f = make_complex_field(g);
        for (const auto& w : spec.waves)
            add_plane_wave(f, w.amplitude, snap_wavenumber(g, w.k));
        return f;
    }
    if (spec.preset == "file") {
        ComplexField f = read_field_csv(spec.path);
        if (f.grid != g)
            throw ConfigError("initial field file " + spec.path +
                              " is sampled on a different grid");
        return f;
    }
    if (spec.preset == "random") {
        std::mt19937 rng(static_cast<std::uint32_t>(spec.seed));
        std::normal_distribution<double> nd(0.0, 1.0);
        ComplexField f = make_complex_field(g);
        for (auto& v : f.values) {
            const double re = nd(rng);
            const double im = nd(rng);
            v = complexd(re, im);
        }
        normalize(f);
        return f;
    }
    throw ConfigError("unknown initial preset '" + spec.preset + "'");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    check_keys(j, "config",
               {"name", "description", "grid", "potential", "gain_loss",
                "transform", "initial", "initial_minus", "dt", "steps", "kinds",
                "snapshot_stride", "phis", "drift_threshold", "force", "out_dir"});

    ScenarioConfig cfg;
    cfg.name = as_string(require_key(j, "config", "name"), "name");
    if (cfg.name.empty()) fail("name", "must be non-empty");
    if (j.contains("description"))
        cfg.description = as_string(j.at("description"), "description");

    cfg.grid = parse_grid(require_key(j, "config", "grid"));
    const int dim = cfg.grid.dim();

    cfg.potential =
        parse_potential(require_key(j, "config", "potential"), "potential", dim);
    cfg.gain_loss =
        parse_potential(require_key(j, "config", "gain_loss"), "gain_loss", dim);

    if (j.contains("transform"))
        cfg.transform = parse_transform(j.at("transform"), cfg.grid);

    cfg.initial_plus =
        parse_initial(require_key(j, "config", "initial"), "initial", cfg.grid);
    cfg.initial_minus = j.contains("initial_minus")
                            ? parse_initial(j.at("initial_minus"), "initial_minus",
                                            cfg.grid)
                            : cfg.initial_plus;

    cfg.dt = as_number(require_key(j, "config", "dt"), "dt");
    if (!(std::isfinite(cfg.dt)) || cfg.dt == 0.0)
        fail("dt", "must be finite and non-zero");

    cfg.steps = as_int(require_key(j, "config", "steps"), "steps");
    if (cfg.steps < 0) fail("steps", "must be >= 0");

    const json& jk = require_key(j, "config", "kinds");
    if (!jk.is_array()) fail("kinds", "expected an array");
    for (const auto& entry : jk)
        cfg.kinds.push_back(pairing_from_string(as_string(entry, "kinds")));
    for (PairingTag tag : cfg.kinds) {
        if (pairing_needs_transform(tag) && !cfg.transform)
            fail("kinds", "'" + to_string(tag) + "' requires a transform");
    }

    if (j.contains("snapshot_stride")) {
        cfg.snapshot_stride = as_int(j.at("snapshot_stride"), "snapshot_stride");
        if (cfg.snapshot_stride < 0) fail("snapshot_stride", "must be >= 0");
    }

    if (j.contains("phis")) {
        const json& jp = j.at("phis");
        if (!jp.is_array()) fail("phis", "expected an array of [phi_r, phi_i] pairs");
        for (const auto& entry : jp) {
            if (!entry.is_array() || entry.size() != 2)
                fail("phis", "each entry must be a [phi_r, phi_i] pair");
            cfg.phis.push_back(
                {as_number(entry[0], "phis"), as_number(entry[1], "phis")});
        }
    } else {
        cfg.phis = {{0.3, 0.7}, {0.0, 1.1}, {2.0, 0.0}};
    }

    if (j.contains("drift_threshold")) {
        cfg.drift_threshold = as_number(j.at("drift_threshold"), "drift_threshold");
        if (!(cfg.drift_threshold > 0.0)) fail("drift_threshold", "must be positive");
    }
    if (j.contains("force")) cfg.force = as_bool(j.at("force"), "force");
    if (j.contains("out_dir")) cfg.out_dir = as_string(j.at("out_dir"), "out_dir");
    if (cfg.out_dir.empty()) cfg.out_dir = "out/" + cfg.name;
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open scenario config " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scenario(buf.str());
}

ScenarioConfig refine_config(const ScenarioConfig& c) {
    if (c.potential.preset == "file" || c.gain_loss.preset == "file" ||
        c.initial_plus.preset == "file" || c.initial_minus.preset == "file")
        throw ConfigError(
            "refinement cannot rebuild file-based potentials or initial data");

    ScenarioConfig out = c;
    std::array<int, 2> n = c.grid.n;
    std::array<double, 2> dx = c.grid.dx;
    for (int a = 0; a < c.grid.dim(); ++a) {
        // Periodic axes keep the period n*dx exactly; Dirichlet axes keep the
        // stored endpoints and insert midpoints.
        n[a] = c.grid.periodic(a) ? 2 * n[a] : 2 * n[a] - 1;
        dx[a] *= 0.5;
    }
    out.grid = c.grid.dim() == 1
                   ? Grid(n[0], dx[0], c.grid.origin[0], c.grid.bc[0])
                   : Grid(n, dx, c.grid.origin, c.grid.bc);
    out.dt = c.dt * 0.5;
    out.steps = c.steps * 2;
    out.snapshot_stride = c.snapshot_stride * 2;
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
    namespace fs = std::filesystem;
    ScenarioResult result;
    result.out_dir = cfg.out_dir;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (cfg.snapshot_stride > 0) fs::create_directories(cfg.out_dir + "/fields", ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir);

    HamiltonianSpec h = make_hamiltonian(cfg.grid, build_potential(cfg.potential, cfg.grid),
                                         build_potential(cfg.gain_loss, cfg.grid));

    std::optional<SpatialTransform> F;
    std::set<SymmetryCase> cls;
    if (cfg.transform) {
        F = make_transform(cfg.transform->kind, cfg.transform->params, cfg.grid);
        cls = classify_symmetry(h, *F);
        result.classification = case_set_string(cls);
    }

    log << "scenario " << cfg.name << ": n0 = " << cfg.grid.n[0]
        << (cfg.grid.dim() == 2 ? " x " + std::to_string(cfg.grid.n[1]) : "")
        << ", dt = " << short3(cfg.dt) << ", steps = " << cfg.steps << '\n';
    if (F)
        log << "classification: " << result.classification << " under "
            << describe(*F) << '\n';

    ComplexField psi_plus0 = build_initial(cfg.initial_plus, h, Sign::plus);
    ComplexField psi_minus0 = build_initial(cfg.initial_minus, h, Sign::minus);
    Trajectory traj = evolve_dual(h, psi_plus0, psi_minus0, cfg.dt, cfg.steps);

    std::vector<std::string> files;

    for (PairingTag tag : cfg.kinds) {
        KindVerdict kv;
        kv.kind = tag;
        bool applicable = true;
        std::string needs;
        if (auto need = required_case(tag)) {
            applicable = cls.count(*need) > 0;
            needs = (*need == SymmetryCase::f_symmetric_b) ? "b" : "c";
        }
        if (!applicable && !cfg.force) {
            kv.verdict = "NOT-APPLICABLE";
            kv.note = "classification " + result.classification + ", needs " + needs;
            log << display_name(tag) << ": NOT-APPLICABLE (" << kv.note << ")\n";
            result.verdicts.push_back(kv);
            continue;
        }

        PairingKind kind = pairing_needs_transform(tag) ? make_pairing(tag, *F)
                                                        : make_pairing(tag);
        ConservationReport rep = charge_series(kind, traj);
        kv.evaluated = true;
        kv.drift = rep.drift;
        kv.max_residual = rep.max_residual;
        kv.max_interior_residual = interior_max_residual(rep);
        kv.verdict = rep.drift < cfg.drift_threshold ? "CONSERVED" : "VIOLATED";
        if (!applicable)
            kv.note = "classification " + result.classification + ", forced";

        const std::string fname = "conservation_" + to_string(tag) + ".csv";
        {
            std::ofstream os = open_out(cfg.out_dir + "/" + fname);
            write_conservation_csv(os, rep);
        }
        files.push_back(fname);

        log << display_name(tag) << ": " << kv.verdict << " (drift "
            << short3(kv.drift) << (kv.note.empty() ? "" : "; " + kv.note) << ")\n";
        result.verdicts.push_back(kv);
    }

    // Expectation of H under the mixed pairing and under the plus field alone.
    // The dual-paired value rides on the same algebra that conserves the mixed
    // charge; the single-state value has no such protection.
    {
        std::ofstream os = open_out(cfg.out_dir + "/hbar.csv");
        os << "# m,t,Re(Hbar_dual),Im(Hbar_dual),Re(Hbar_single),Im(Hbar_single)\n";
        complexd dual0, single0;
        double dual_var = 0.0, single_var = 0.0;
        for (int m = -cfg.steps; m <= cfg.steps; ++m) {
            const ComplexField& fp = traj.at(m, FieldSlot::plus);
            const ComplexField& fm = traj.at(m, FieldSlot::minus);
            const complexd dual = mixed_expectation(h, fm, fp);
            const complexd single = mixed_expectation(h, fp, fp);
            if (m == -cfg.steps) {
                dual0 = mixed_expectation(h, traj.at(0, FieldSlot::minus),
                                          traj.at(0, FieldSlot::plus));
                single0 = mixed_expectation(h, traj.at(0, FieldSlot::plus),
                                            traj.at(0, FieldSlot::plus));
            }
            dual_var = std::max(dual_var, std::abs(dual - dual0));
            single_var = std::max(single_var, std::abs(single - single0));
            os << m << ',' << fmt17(traj.time(m)) << ',' << fmt17(dual.real())
               << ',' << fmt17(dual.imag()) << ',' << fmt17(single.real()) << ','
               << fmt17(single.imag()) << '\n';
        }
        result.hbar_dual_variation = dual_var / std::max(std::abs(dual0), 1e-300);
        result.hbar_single_variation =
            single_var / std::max(std::abs(single0), 1e-300);
        files.push_back("hbar.csv");
    }

    write_lagrangian_csv(cfg.out_dir + "/lagrangian.csv", h, traj, cfg.phis);
    files.push_back("lagrangian.csv");

    for (int m = -(cfg.steps - 1); m <= cfg.steps - 1; ++m) {
        result.noether_reconstruction_max =
            std::max(result.noether_reconstruction_max,
                     split_continuity_residuals(traj, m).reconstruction_max);
    }

    {
        std::ofstream os = open_out(cfg.out_dir + "/index.csv");
        os << "# m,t,max_abs_plus,max_abs_minus,pivot_plus,pivot_minus\n";
        for (int m = -cfg.steps; m <= cfg.steps; ++m) {
            const std::size_t row = static_cast<std::size_t>(m + cfg.steps);
            os << m << ',' << fmt17(traj.time(m)) << ','
               << fmt17(max_abs(traj.at(m, FieldSlot::plus))) << ','
               << fmt17(max_abs(traj.at(m, FieldSlot::minus))) << ','
               << fmt17(traj.pivot_plus[row]) << ','
               << fmt17(traj.pivot_minus[row]) << '\n';
        }
        files.push_back("index.csv");
    }

    if (cfg.snapshot_stride > 0) {
        for (int m = -cfg.steps; m <= cfg.steps; ++m) {
            if ((m + cfg.steps) % cfg.snapshot_stride != 0) continue;
            const std::string plus_name = snapshot_name("plus", m);
            const std::string minus_name = snapshot_name("minus", m);
            write_field_csv(cfg.out_dir + "/" + plus_name,
                            traj.at(m, FieldSlot::plus));
            write_field_csv(cfg.out_dir + "/" + minus_name,
                            traj.at(m, FieldSlot::minus));
            files.push_back(plus_name);
            files.push_back(minus_name);
        }
    }

    // summary.json aggregates the verdicts and the headline diagnostics.
    {
        ordered_json summary;
        summary["name"] = cfg.name;
        summary["description"] = cfg.description;
        ordered_json jg;
        jg["n"] = std::vector<int>(cfg.grid.n.begin(),
                                   cfg.grid.n.begin() + cfg.grid.dim());
        jg["dx"] = cfg.grid.dx[0];
        jg["origin"] = std::vector<double>(cfg.grid.origin.begin(),
                                           cfg.grid.origin.begin() + cfg.grid.dim());
        std::vector<std::string> bc;
        for (int a = 0; a < cfg.grid.dim(); ++a) bc.push_back(to_string(cfg.grid.bc[a]));
        jg["bc"] = bc;
        summary["grid"] = jg;
        summary["dt"] = cfg.dt;
        summary["steps"] = cfg.steps;
        summary["force"] = cfg.force;
        summary["drift_threshold"] = cfg.drift_threshold;
        summary["transform"] = F ? ordered_json(describe(*F)) : ordered_json(nullptr);
        summary["classification"] =
            F ? ordered_json(result.classification) : ordered_json(nullptr);
        ordered_json verdicts = ordered_json::array();
        for (const KindVerdict& kv : result.verdicts) {
            ordered_json v;
            v["kind"] = to_string(kv.kind);
            v["display"] = display_name(kv.kind);
            v["verdict"] = kv.verdict;
            v["note"] = kv.note;
            if (kv.evaluated) {
                v["drift"] = kv.drift;
                v["max_residual"] = kv.max_residual;
                v["max_interior_residual"] = kv.max_interior_residual;
            } else {
                v["drift"] = nullptr;
                v["max_residual"] = nullptr;
                v["max_interior_residual"] = nullptr;
            }
            verdicts.push_back(v);
        }
        summary["verdicts"] = verdicts;
        summary["noether_reconstruction_max"] = result.noether_reconstruction_max;
        summary["hbar_dual_variation"] = result.hbar_dual_variation;
        summary["hbar_single_variation"] = result.hbar_single_variation;
        files.push_back("summary.json");
        std::sort(files.begin(), files.end());
        summary["files"] = files;

        std::ofstream os = open_out(cfg.out_dir + "/summary.json");
        os << summary.dump(2) << '\n';
    }

    log << "wrote " << cfg.out_dir << "/summary.json\n";
    return result;
}

std::vector<ScenarioResult> run_refinement_study(const ScenarioConfig& cfg,
                                                 int extra_levels,
                                                 std::ostream& log) {
    if (extra_levels < 0) throw ConfigError("refinement levels must be >= 0");
    const std::string base_out = cfg.out_dir;
    std::vector<ScenarioResult> results;
    std::vector<ScenarioConfig> levels;

    ScenarioConfig level = cfg;
    for (int L = 0; L <= extra_levels; ++L) {
        level.out_dir = base_out + "/level" + std::to_string(L);
        log << "refinement level " << L << ":\n";
        results.push_back(run_scenario(level, log));
        levels.push_back(level);
        if (L < extra_levels) level = refine_config(level);
    }

    std::ofstream os =
        open_out(base_out + "/refinement_summary.csv");
    os << "# level,n0,dx0,dt,steps,kind,drift,max_interior_residual,"
          "ratio_to_coarser\n";
    for (std::size_t L = 0; L < results.size(); ++L) {
        for (std::size_t k = 0; k < results[L].verdicts.size(); ++k) {
            const KindVerdict& kv = results[L].verdicts[k];
            os << L << ',' << levels[L].grid.n[0] << ','
               << fmt17(levels[L].grid.dx[0]) << ',' << fmt17(levels[L].dt) << ','
               << levels[L].steps << ',' << to_string(kv.kind) << ',';
            if (!kv.evaluated) {
                os << "-,-,-\n";
                continue;
            }
            os << fmt17(kv.drift) << ',' << fmt17(kv.max_interior_residual) << ',';
            if (L == 0 || !results[L - 1].verdicts[k].evaluated) {
                os << "-\n";
            } else {
                const double prev = results[L - 1].verdicts[k].max_interior_residual;
                os << fmt17(prev / std::max(kv.max_interior_residual, 1e-300))
                   << '\n';
            }
        }
    }
    return results;
}

const std::vector<std::string>& bundled_scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : bundled_table()) out.push_back(entry.first);
        return out;
    }();
    return names;
}

const std::string& bundled_scenario_json(const std::string& name) {
    for (const auto& entry : bundled_table()) {
        if (entry.first == name) return entry.second;
    }
    throw ConfigError("unknown bundled scenario '" + name + "'");
}

} // namespace gencur
