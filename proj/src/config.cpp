#include "vpmcf/config.hpp"

#include "vpmcf/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vpmcf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections tokenize(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config: malformed section header at line " +
                                      std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("config: empty key at line " + std::to_string(lineno));
        out[section][key] = val;
    }
    return out;
}

class Reader {
public:
    explicit Reader(Sections s) : sections_(std::move(s)) {}

    bool has(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        return it != sections_.end() && it->second.count(key) > 0;
    }
    std::string str(const std::string& sec, const std::string& key, const std::string& dflt) const {
        auto it = sections_.find(sec);
        if (it == sections_.end()) return dflt;
        auto jt = it->second.find(key);
        return jt == it->second.end() ? dflt : jt->second;
    }
    double num(const std::string& sec, const std::string& key, double dflt) const {
        const std::string s = str(sec, key, "");
        if (s.empty()) return dflt;
        std::istringstream in(s);
        double v;
        if (!(in >> v)) throw ValidationError("config: [" + sec + "] " + key + " is not a number");
        return v;
    }
    long integer(const std::string& sec, const std::string& key, long dflt) const {
        const double v = num(sec, key, static_cast<double>(dflt));
        return static_cast<long>(v);
    }
    std::vector<double> numbers(const std::string& sec, const std::string& key) const {
        std::vector<double> out;
        std::istringstream in(str(sec, key, ""));
        double v;
        while (in >> v) out.push_back(v);
        return out;
    }

private:
    Sections sections_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

EquationVariant parse_variant(const std::string& s) {
    if (s == "golovaty") return EquationVariant::golovaty;
    if (s == "rubinstein-sternberg") return EquationVariant::rubinstein_sternberg;
    if (s == "brassel-bretin") return EquationVariant::brassel_bretin;
    if (s == "plain-allen-cahn") return EquationVariant::plain_allen_cahn;
    throw ValidationError("config: unknown variant '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "explicit-euler") return Scheme::explicit_euler;
    if (s == "semi-implicit-spectral") return Scheme::semi_implicit_spectral;
    throw ValidationError("config: unknown scheme '" + s + "'");
}

MultiplierMode parse_mode(const std::string& s) {
    if (s == "analytic") return MultiplierMode::analytic;
    if (s == "conservative") return MultiplierMode::conservative;
    throw ValidationError("config: unknown multiplier_mode '" + s + "'");
}

Discretization parse_disc(const std::string& s) {
    if (s == "central2") return Discretization::central2;
    if (s == "spectral") return Discretization::spectral;
    throw ValidationError("config: unknown discretization '" + s + "'");
}

} // namespace

const char* to_string(EquationVariant v) {
    switch (v) {
        case EquationVariant::golovaty: return "golovaty";
        case EquationVariant::rubinstein_sternberg: return "rubinstein-sternberg";
        case EquationVariant::brassel_bretin: return "brassel-bretin";
        case EquationVariant::plain_allen_cahn: return "plain-allen-cahn";
    }
    return "?";
}

const char* to_string(Scheme s) {
    return s == Scheme::explicit_euler ? "explicit-euler" : "semi-implicit-spectral";
}

const char* to_string(MultiplierMode m) {
    return m == MultiplierMode::analytic ? "analytic" : "conservative";
}

const char* to_string(Discretization d) {
    return d == Discretization::central2 ? "central2" : "spectral";
}

RunConfig parse_config(const std::string& text) {
    Reader r(tokenize(text));
    RunConfig c;
    c.d = static_cast<int>(r.integer("grid", "d", c.d));
    c.n = static_cast<int>(r.integer("grid", "n", c.n));
    c.disc = parse_disc(r.str("grid", "discretization", to_string(c.disc)));

    c.shape.kind = r.str("shape", "kind", c.shape.kind);
    if (r.has("shape", "center")) c.shape.center = r.numbers("shape", "center");
    c.shape.radius = r.num("shape", "radius", c.shape.radius);
    if (r.has("shape", "semi_axes")) c.shape.semi_axes = r.numbers("shape", "semi_axes");
    if (r.has("shape", "balls")) {
        const auto vals = r.numbers("shape", "balls");
        const std::size_t stride = static_cast<std::size_t>(c.d) + 1;
        if (vals.empty() || vals.size() % stride != 0)
            throw ValidationError("config: [shape] balls needs d+1 numbers per component");
        c.shape.balls.clear();
        for (std::size_t i = 0; i < vals.size(); i += stride) {
            Ball b;
            b.center = {0.0, 0.0, 0.0};
            for (int a = 0; a < c.d; ++a) b.center[static_cast<std::size_t>(a)] = vals[i + static_cast<std::size_t>(a)];
            b.radius = vals[i + stride - 1];
            c.shape.balls.push_back(b);
        }
    }
    c.shape.level_set_snapshot = r.str("shape", "level_set_snapshot", c.shape.level_set_snapshot);

    c.eps = r.num("initial", "epsilon", c.eps);
    c.saturation_k = r.num("initial", "saturation_k", c.saturation_k);

    c.variant = parse_variant(r.str("evolution", "variant", to_string(c.variant)));
    c.scheme = parse_scheme(r.str("evolution", "scheme", to_string(c.scheme)));
    c.multiplier_mode = parse_mode(r.str("evolution", "multiplier_mode", to_string(c.multiplier_mode)));
    c.dt = r.num("evolution", "dt", c.dt);
    c.conservative_tol = r.num("evolution", "conservative_tol", c.conservative_tol);
    c.T = r.num("evolution", "T", c.T);

    c.output_dir = r.str("output", "directory", c.output_dir);
    c.csv_cadence = r.integer("output", "csv_cadence", c.csv_cadence);
    c.snapshot_cadence = r.integer("output", "snapshot_cadence", c.snapshot_cadence);

    c.density_scan_enabled = r.integer("diagnostics", "density_scan", c.density_scan_enabled ? 1 : 0) != 0;
    if (r.has("diagnostics", "density_radii")) c.density_radii = r.numbers("diagnostics", "density_radii");
    c.density_centers = static_cast<int>(r.integer("diagnostics", "density_centers", c.density_centers));
    c.monotonicity_samples =
        static_cast<int>(r.integer("diagnostics", "monotonicity_samples", c.monotonicity_samples));
    c.monotonicity_c5 = r.num("diagnostics", "monotonicity_c5", c.monotonicity_c5);
    c.monotonicity_seed = static_cast<std::uint64_t>(
        r.integer("diagnostics", "monotonicity_seed", static_cast<long>(c.monotonicity_seed)));
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "d = " << c.d << "\n";
    os << "n = " << c.n << "\n";
    os << "discretization = " << to_string(c.disc) << "\n\n";

    os << "[shape]\n";
    os << "kind = " << c.shape.kind << "\n";
    os << "center =";
    for (double x : c.shape.center) os << " " << fmt(x);
    os << "\n";
    os << "radius = " << fmt(c.shape.radius) << "\n";
    os << "semi_axes =";
    for (double x : c.shape.semi_axes) os << " " << fmt(x);
    os << "\n";
    if (!c.shape.balls.empty()) {
        os << "balls =";
        for (const Ball& b : c.shape.balls) {
            for (int a = 0; a < c.d; ++a) os << " " << fmt(b.center[static_cast<std::size_t>(a)]);
            os << " " << fmt(b.radius);
        }
        os << "\n";
    }
    if (!c.shape.level_set_snapshot.empty())
        os << "level_set_snapshot = " << c.shape.level_set_snapshot << "\n";
    os << "\n";

    os << "[initial]\n";
    os << "epsilon = " << fmt(c.eps) << "\n";
    os << "saturation_k = " << fmt(c.saturation_k) << "\n\n";

    os << "[evolution]\n";
    os << "variant = " << to_string(c.variant) << "\n";
    os << "scheme = " << to_string(c.scheme) << "\n";
    os << "multiplier_mode = " << to_string(c.multiplier_mode) << "\n";
    os << "dt = " << fmt(c.dt) << "\n";
    os << "conservative_tol = " << fmt(c.conservative_tol) << "\n";
    os << "T = " << fmt(c.T) << "\n\n";

    os << "[output]\n";
    os << "directory = " << c.output_dir << "\n";
    os << "csv_cadence = " << c.csv_cadence << "\n";
    os << "snapshot_cadence = " << c.snapshot_cadence << "\n\n";

    os << "[diagnostics]\n";
    os << "density_scan = " << (c.density_scan_enabled ? 1 : 0) << "\n";
    if (!c.density_radii.empty()) {
        os << "density_radii =";
        for (double x : c.density_radii) os << " " << fmt(x);
        os << "\n";
    }
    os << "density_centers = " << c.density_centers << "\n";
    os << "monotonicity_samples = " << c.monotonicity_samples << "\n";
    os << "monotonicity_c5 = " << fmt(c.monotonicity_c5) << "\n";
    os << "monotonicity_seed = " << c.monotonicity_seed << "\n";
    return os.str();
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("config: cannot write " + path);
    out << serialize_config(cfg);
}

double effective_dt(const RunConfig& cfg) {
    if (cfg.dt > 0.0) return cfg.dt;
    StepperSpec spec;
    spec.scheme = cfg.scheme;
    const GridSpec grid = GridSpec::make(cfg.d, cfg.n);
    return 0.5 * stability_limit(spec, grid, cfg.eps);
}

void validate_config(const RunConfig& cfg) {
    const GridSpec grid = GridSpec::make(cfg.d, cfg.n, cfg.disc);
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw ValidationError("config: epsilon must lie in (0,1)");
    if (cfg.eps < 3.0 * grid.h)
        throw ValidationError("config: epsilon < 3h, interface would be unresolved");
    if (!(cfg.saturation_k >= 5.0)) throw ValidationError("config: saturation_k must be >= 5");
    if (!(cfg.T >= 0.0)) throw ValidationError("config: T must be nonnegative");
    if (cfg.csv_cadence < 1) throw ValidationError("config: csv_cadence must be >= 1");
    if (cfg.snapshot_cadence < 0) throw ValidationError("config: snapshot_cadence must be >= 0");

    StepperSpec spec;
    spec.scheme = cfg.scheme;
    spec.dt = effective_dt(cfg);
    spec.multiplier_mode = cfg.multiplier_mode;
    spec.conservative_tol = cfg.conservative_tol;
    validate_stepper(spec, grid, cfg.eps, cfg.variant, cfg.disc);

    if (cfg.shape.kind == "ball") {
        Ball b;
        for (int a = 0; a < cfg.d; ++a) b.center[static_cast<std::size_t>(a)] = cfg.shape.center.at(static_cast<std::size_t>(a));
        b.radius = cfg.shape.radius;
        validate_shape(ShapeSpec{b}, cfg.eps, grid);
    } else if (cfg.shape.kind == "balls") {
        if (cfg.shape.balls.empty()) throw ValidationError("config: [shape] balls is empty");
        validate_shape(ShapeSpec{BallUnion{cfg.shape.balls}}, cfg.eps, grid);
    } else if (cfg.shape.kind == "ellipse") {
        Ellipse e;
        for (int a = 0; a < cfg.d; ++a) {
            e.center[static_cast<std::size_t>(a)] = cfg.shape.center.at(static_cast<std::size_t>(a));
            e.semi_axes[static_cast<std::size_t>(a)] = cfg.shape.semi_axes.at(static_cast<std::size_t>(a));
        }
        validate_shape(ShapeSpec{e}, cfg.eps, grid);
    } else if (cfg.shape.kind == "implicit") {
        if (cfg.shape.level_set_snapshot.empty())
            throw ValidationError("config: implicit shape needs level_set_snapshot");
        // clearance is checked against the loaded level set in build_shape
    } else {
        throw ValidationError("config: unknown shape kind '" + cfg.shape.kind + "'");
    }

    for (double r : cfg.density_radii)
        if (!(r > 0.0 && r < 0.25))
            throw ValidationError("config: density radii must lie in (0, 1/4)");
    if (cfg.monotonicity_samples < 0)
        throw ValidationError("config: monotonicity_samples must be >= 0");
    if (!(cfg.monotonicity_c5 > 0.0)) throw ValidationError("config: monotonicity_c5 must be positive");
}

ShapeSpec build_shape(const RunConfig& cfg, const GridSpec& grid) {
    if (cfg.shape.kind == "ball") {
        Ball b;
        for (int a = 0; a < cfg.d; ++a) b.center[static_cast<std::size_t>(a)] = cfg.shape.center.at(static_cast<std::size_t>(a));
        b.radius = cfg.shape.radius;
        return ShapeSpec{b};
    }
    if (cfg.shape.kind == "balls") return ShapeSpec{BallUnion{cfg.shape.balls}};
    if (cfg.shape.kind == "ellipse") {
        Ellipse e;
        for (int a = 0; a < cfg.d; ++a) {
            e.center[static_cast<std::size_t>(a)] = cfg.shape.center.at(static_cast<std::size_t>(a));
            e.semi_axes[static_cast<std::size_t>(a)] = cfg.shape.semi_axes.at(static_cast<std::size_t>(a));
        }
        return ShapeSpec{e};
    }
    if (cfg.shape.kind == "implicit") {
        Snapshot snap = read_snapshot(cfg.shape.level_set_snapshot);
        if (snap.phi.grid != grid)
            throw ValidationError("config: implicit level-set grid does not match the run grid");
        return ShapeSpec{ImplicitShape{std::move(snap.phi)}};
    }
    throw ValidationError("config: unknown shape kind '" + cfg.shape.kind + "'");
}

} // namespace vpmcf
