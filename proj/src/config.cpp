// Config text parsing, validation, canonical printing, and the builders that
// turn a config into bases, dynamics, and initial data.
#include "spinwell/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "spinwell/energy.hpp"
#include "spinwell/errors.hpp"
#include "spinwell/noise.hpp"

namespace spinwell {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigError(where + ": " + msg);
}

double to_double(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        fail(where, "expected a number, got '" + v + "'");
    return x;
}

long to_long(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        fail(where, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& where, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        fail(where, "expected an unsigned integer, got '" + v + "'");
    return x;
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t c = v.find(',', pos);
        if (c == std::string::npos) {
            out.push_back(trim(v.substr(pos)));
            break;
        }
        out.push_back(trim(v.substr(pos, c - pos)));
        pos = c + 1;
    }
    return out;
}

// Single value (replicated) or an a,b,c triple.
std::array<int, 3> to_int3(const std::string& where, const std::string& v) {
    const std::vector<std::string> p = split_commas(v);
    if (p.size() == 1) {
        const int x = static_cast<int>(to_long(where, p[0]));
        return {x, x, x};
    }
    if (p.size() != 3)
        fail(where, "expected one integer or an a,b,c triple, got '" + v + "'");
    return {static_cast<int>(to_long(where, p[0])), static_cast<int>(to_long(where, p[1])),
            static_cast<int>(to_long(where, p[2]))};
}

std::array<double, 3> to_double3(const std::string& where, const std::string& v) {
    const std::vector<std::string> p = split_commas(v);
    if (p.size() == 1) {
        const double x = to_double(where, p[0]);
        return {x, x, x};
    }
    if (p.size() != 3)
        fail(where, "expected one number or an a,b,c triple, got '" + v + "'");
    return {to_double(where, p[0]), to_double(where, p[1]), to_double(where, p[2])};
}

Vec3 to_vec3(const std::string& where, const std::string& v) {
    const std::array<double, 3> a = to_double3(where, v);
    return Vec3{a[0], a[1], a[2]};
}

bool to_bool(const std::string& where, const std::string& v) {
    if (v == "on" || v == "true" || v == "1")
        return true;
    if (v == "off" || v == "false" || v == "0")
        return false;
    fail(where, "expected on/off, got '" + v + "'");
}

void assign(SimConfig& c, const std::string& key, const std::string& value,
            const std::string& where) {
    if (key == "box")
        c.box = to_double3(where, value);
    else if (key == "modes")
        c.modes = to_int3(where, value);
    else if (key == "em_bands")
        c.em_bands = to_int3(where, value);
    else if (key == "torus_ratio")
        c.torus_ratio = static_cast<int>(to_long(where, value));
    else if (key == "quad_nodes")
        c.quad_nodes = to_int3(where, value);
    else if (key == "lambda1")
        c.lambda1 = to_double(where, value);
    else if (key == "lambda2")
        c.lambda2 = to_double(where, value);
    else if (key == "aniso_K")
        c.aniso_K = to_double(where, value);
    else if (key == "aniso_axis")
        c.aniso_axis = to_vec3(where, value);
    else if (key == "aniso_cutoff")
        c.aniso_cutoff = to_double(where, value);
    else if (key == "noise_J")
        c.noise_J = static_cast<int>(to_long(where, value));
    else if (key == "noise_amp")
        c.noise_amp = to_double(where, value);
    else if (key == "noise_decay")
        c.noise_decay = to_double(where, value);
    else if (key == "noise_profile")
        c.noise_profile = value;
    else if (key == "forcing")
        c.forcing = value;
    else if (key == "forcing_value")
        c.forcing_value = to_vec3(where, value);
    else if (key == "T")
        c.T = to_double(where, value);
    else if (key == "dt")
        c.dt = to_double(where, value);
    else if (key == "seed")
        c.seed = to_u64(where, value);
    else if (key == "scheme")
        c.scheme = value;
    else if (key == "ensemble_K")
        c.ensemble_K = static_cast<int>(to_long(where, value));
    else if (key == "init_M")
        c.init_M = value;
    else if (key == "init_M_dir")
        c.init_M_dir = to_vec3(where, value);
    else if (key == "init_B")
        c.init_B = value;
    else if (key == "init_B_value")
        c.init_B_value = to_vec3(where, value);
    else if (key == "init_E")
        c.init_E = value;
    else if (key == "init_E_value")
        c.init_E_value = to_vec3(where, value);
    else if (key == "out_every")
        c.out_every = static_cast<int>(to_long(where, value));
    else if (key == "out_dir")
        c.out_dir = value;
    else if (key == "db_sign")
        c.db_sign = value;
    else if (key == "em_coupling")
        c.em_coupling = to_bool(where, value);
    else if (key == "renormalize")
        c.renormalize = to_bool(where, value);
    else
        fail(where, "unknown key '" + key + "'");
}

void assign_line(SimConfig& c, const std::string& raw, int lineno) {
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos)
        line.erase(hash);
    line = trim(line);
    if (line.empty())
        return;
    const std::string where = "config line " + std::to_string(lineno);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
        fail(where, "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
        fail(where, "empty key");
    assign(c, key, value, where);
}

} // namespace

SimConfig parse_config(const std::string& text) {
    SimConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
        assign_line(c, line, ++lineno);
    return c;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(SimConfig& cfg, const std::string& kv) {
    const std::string where = "override '" + kv + "'";
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
        fail(where, "expected key=value");
    const std::string key = trim(kv.substr(0, eq));
    const std::string value = trim(kv.substr(eq + 1));
    if (key.empty())
        fail(where, "empty key");
    assign(cfg, key, value, where);
}

void validate(const SimConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok)
            throw ConfigError(msg);
    };
    for (int i = 0; i < 3; ++i) {
        need(c.box[i] > 0, "box lengths must be positive");
        need(c.modes[i] >= 1, "modes must be at least 1 per axis");
        need(c.em_bands[i] >= 1, "em_bands must be at least 1 per axis");
        need(c.quad_nodes[i] >= 0, "quad_nodes must be nonnegative (0 = auto)");
    }
    need(c.torus_ratio >= 2 && c.torus_ratio % 2 == 0,
         "torus_ratio must be an even integer >= 2 so torus nodes inside the box "
         "land on box nodes");
    need(c.lambda2 > 0, "lambda2 must be strictly positive");
    need(c.aniso_K >= 0, "aniso_K must be nonnegative");
    need(c.aniso_cutoff > std::sqrt(3.0), "aniso_cutoff must exceed sqrt(3)");
    need(norm(c.aniso_axis) > 0, "aniso_axis must be nonzero");
    need(c.noise_J >= 0, "noise_J must be nonnegative");
    need(c.noise_amp >= 0, "noise_amp must be nonnegative");
    need(c.noise_profile == "constant" || c.noise_profile == "eigen",
         "noise_profile must be constant or eigen");
    need(c.forcing == "zero" || c.forcing == "uniform",
         "forcing must be zero or uniform");
    need(c.T > 0, "T must be positive");
    need(c.dt > 0, "dt must be positive");
    need(c.scheme == "heun" || c.scheme == "em-ito", "scheme must be heun or em-ito");
    need(c.ensemble_K >= 1, "ensemble_K must be at least 1");
    need(c.init_M == "wall" || c.init_M == "constant", "init_M must be wall or constant");
    if (c.init_M == "constant")
        need(norm(c.init_M_dir) > 0, "init_M_dir must be nonzero");
    need(c.init_B == "zero" || c.init_B == "uniform" || c.init_B == "curl",
         "init_B must be zero, uniform, or curl");
    if (c.init_B == "curl")
        for (int i = 0; i < 3; ++i)
            need(c.em_bands[i] >= 2, "init_B = curl needs em_bands >= 2 per axis");
    need(c.init_E == "zero" || c.init_E == "uniform", "init_E must be zero or uniform");
    need(c.out_every >= 1, "out_every must be at least 1");
    need(c.db_sign == "galerkin" || c.db_sign == "problem",
         "db_sign must be galerkin or problem");

    // Explicit-scheme stability screen on the stiffest exchange mode.
    double lmax = 0;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < 3; ++i) {
        const double f = pi * (c.modes[i] - 1) / c.box[i];
        lmax += f * f;
    }
    const double margin =
        c.dt * lmax * std::max({c.lambda1, c.lambda2, 1.0});
    need(margin <= 2.0,
         "unstable step: dt * lambda_max * max(lambda1, lambda2, 1) = " +
             std::to_string(margin) + " exceeds 2; lower dt or the mode count");
}

std::string print_config(const SimConfig& c) {
    std::string out;
    char buf[256];
    auto num = [&](const char* k, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
        out += buf;
    };
    auto integer = [&](const char* k, long long v) {
        std::snprintf(buf, sizeof buf, "%s = %lld\n", k, v);
        out += buf;
    };
    auto str = [&](const char* k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    };
    auto tri_i = [&](const char* k, const std::array<int, 3>& v) {
        std::snprintf(buf, sizeof buf, "%s = %d,%d,%d\n", k, v[0], v[1], v[2]);
        out += buf;
    };
    auto tri_d = [&](const char* k, double a, double b2, double c2) {
        std::snprintf(buf, sizeof buf, "%s = %.17g,%.17g,%.17g\n", k, a, b2, c2);
        out += buf;
    };

    tri_d("box", c.box[0], c.box[1], c.box[2]);
    tri_i("modes", c.modes);
    tri_i("em_bands", c.em_bands);
    integer("torus_ratio", c.torus_ratio);
    tri_i("quad_nodes", c.quad_nodes);
    num("lambda1", c.lambda1);
    num("lambda2", c.lambda2);
    num("aniso_K", c.aniso_K);
    tri_d("aniso_axis", c.aniso_axis.x, c.aniso_axis.y, c.aniso_axis.z);
    num("aniso_cutoff", c.aniso_cutoff);
    integer("noise_J", c.noise_J);
    num("noise_amp", c.noise_amp);
    num("noise_decay", c.noise_decay);
    str("noise_profile", c.noise_profile);
    str("forcing", c.forcing);
    tri_d("forcing_value", c.forcing_value.x, c.forcing_value.y, c.forcing_value.z);
    num("T", c.T);
    num("dt", c.dt);
    std::snprintf(buf, sizeof buf, "seed = %llu\n", (unsigned long long)c.seed);
    out += buf;
    str("scheme", c.scheme);
    integer("ensemble_K", c.ensemble_K);
    str("init_M", c.init_M);
    tri_d("init_M_dir", c.init_M_dir.x, c.init_M_dir.y, c.init_M_dir.z);
    str("init_B", c.init_B);
    tri_d("init_B_value", c.init_B_value.x, c.init_B_value.y, c.init_B_value.z);
    str("init_E", c.init_E);
    tri_d("init_E_value", c.init_E_value.x, c.init_E_value.y, c.init_E_value.z);
    integer("out_every", c.out_every);
    str("out_dir", c.out_dir);
    str("db_sign", c.db_sign);
    str("em_coupling", c.em_coupling ? "on" : "off");
    str("renormalize", c.renormalize ? "on" : "off");
    return out;
}

namespace {

GridField constant_box_field(const MagnetizationBasis& mb, const Vec3& v) {
    GridField g = GridField::zeros(Domain::Box, mb.nodes);
    std::fill_n(g.comp(0), g.nodes(), v.x);
    std::fill_n(g.comp(1), g.nodes(), v.y);
    std::fill_n(g.comp(2), g.nodes(), v.z);
    return g;
}

GridField constant_torus_field(const EMBasis& em, const Vec3& v) {
    GridField g = GridField::zeros(Domain::Torus, em.nodes);
    std::fill_n(g.comp(0), g.nodes(), v.x);
    std::fill_n(g.comp(1), g.nodes(), v.y);
    std::fill_n(g.comp(2), g.nodes(), v.z);
    return g;
}

} // namespace

CoeffsH initial_magnetization(const SpectralBases& sb, const SimConfig& cfg) {
    const MagnetizationBasis& mb = sb.mag;
    if (cfg.init_M == "constant") {
        Vec3 d = cfg.init_M_dir;
        d = (1.0 / norm(d)) * d;
        return project_H(mb, constant_box_field(mb, d));
    }
    // Wall profile, normalized to unit length node by node before projection.
    GridField g = GridField::zeros(Domain::Box, mb.nodes);
    const double pi = 3.14159265358979323846;
    double* gx = g.comp(0);
    double* gy = g.comp(1);
    double* gz = g.comp(2);
    std::size_t idx = 0;
    for (int i = 0; i < mb.nodes[0]; ++i) {
        const double x = (i + 0.5) * mb.lengths[0] / mb.nodes[0];
        for (int j = 0; j < mb.nodes[1]; ++j) {
            const double y = (j + 0.5) * mb.lengths[1] / mb.nodes[1];
            for (int l = 0; l < mb.nodes[2]; ++l, ++idx) {
                const double z = (l + 0.5) * mb.lengths[2] / mb.nodes[2];
                Vec3 u{std::cos(pi * x / mb.lengths[0]),
                       0.7 * std::cos(pi * y / mb.lengths[1]),
                       0.9 + 0.3 * std::cos(pi * z / mb.lengths[2])};
                u = (1.0 / norm(u)) * u;
                gx[idx] = u.x;
                gy[idx] = u.y;
                gz[idx] = u.z;
            }
        }
    }
    return project_H(mb, g);
}

CoeffsY initial_B(const SpectralBases& sb, const SimConfig& cfg) {
    const EMBasis& em = sb.em;
    if (cfg.init_B == "zero")
        return CoeffsY::zeros(em.bands);
    if (cfg.init_B == "uniform")
        return project_Y(em, constant_torus_field(em, cfg.init_B_value));
    // curl preset: B = curl A for a frequency-1 potential, taken in coefficient
    // space, so div B vanishes identically in the band.
    GridField a = GridField::zeros(Domain::Torus, em.nodes);
    const double twopi = 2.0 * 3.14159265358979323846;
    double* ax = a.comp(0);
    double* ay = a.comp(1);
    double* az = a.comp(2);
    std::size_t idx = 0;
    for (int i = 0; i < em.nodes[0]; ++i) {
        const double x = i * em.lengths[0] / em.nodes[0];
        for (int j = 0; j < em.nodes[1]; ++j) {
            const double y = j * em.lengths[1] / em.nodes[1];
            for (int l = 0; l < em.nodes[2]; ++l, ++idx) {
                const double z = l * em.lengths[2] / em.nodes[2];
                ax[idx] = cfg.init_B_value.x * std::sin(twopi * y / em.lengths[1]);
                ay[idx] = cfg.init_B_value.y * std::sin(twopi * z / em.lengths[2]);
                az[idx] = cfg.init_B_value.z * std::sin(twopi * x / em.lengths[0]);
            }
        }
    }
    return apply_curl(em, project_Y(em, a));
}

CoeffsY initial_E(const SpectralBases& sb, const SimConfig& cfg) {
    const EMBasis& em = sb.em;
    if (cfg.init_E == "zero")
        return CoeffsY::zeros(em.bands);
    return project_Y(em, constant_torus_field(em, cfg.init_E_value));
}

SimSetup build_setup(const SimConfig& cfg) {
    validate(cfg);
    SimSetup su;
    su.sb = std::make_unique<SpectralBases>(build_spectral_bases(
        cfg.modes, cfg.box, cfg.em_bands, cfg.quad_nodes,
        {cfg.torus_ratio, cfg.torus_ratio, cfg.torus_ratio}));

    const AnisotropyPotential pot =
        make_anisotropy(cfg.aniso_axis, cfg.aniso_K, cfg.aniso_cutoff);
    NoiseFamily nf = build_noise_family(su.sb->mag, cfg.noise_J, cfg.noise_amp,
                                        cfg.noise_decay, cfg.noise_profile);
    Forcing fo = no_forcing();
    if (cfg.forcing == "uniform")
        fo = make_forcing(*su.sb, project_H(su.sb->mag,
                                            constant_box_field(su.sb->mag, cfg.forcing_value)));

    su.dyn = make_dynamics(*su.sb, pot, std::move(nf), cfg.lambda1, cfg.lambda2,
                           std::move(fo), cfg.em_coupling,
                           cfg.db_sign == "galerkin" ? -1.0 : 1.0);

    su.init = zero_state(*su.sb);
    su.init.m = initial_magnetization(*su.sb, cfg);
    su.init.b = initial_B(*su.sb, cfg);
    su.init.e = initial_E(*su.sb, cfg);

    su.steps = std::max(1L, std::lround(cfg.T / cfg.dt));
    su.opt.scheme = cfg.scheme == "heun" ? Scheme::Heun : Scheme::EulerMaruyamaIto;
    su.opt.out_every = cfg.out_every;
    su.opt.renormalize = cfg.renormalize;
    return su;
}

} // namespace spinwell
