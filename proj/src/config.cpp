#include "sdd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdd/io.hpp"

namespace sdd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + value + "'");
    }
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& cell : split_csv_line(value)) {
        const std::string c = trim(cell);
        if (c.empty()) throw ConfigError(key + ": empty list entry");
        out.push_back(parse_number(key, c));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::vector<std::string> parse_string_list(const std::string& value) {
    std::vector<std::string> out;
    for (const std::string& cell : split_csv_line(value)) out.push_back(trim(cell));
    return out;
}

// Tracks key consumption so leftovers can be reported as unknown.
class KeyReader {
public:
    explicit KeyReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

    bool has(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return false;
        used_.push_back(key);
        return true;
    }
    std::string require(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(key + ": required key missing");
        used_.push_back(key);
        return it->second;
    }
    std::string get_or(const std::string& key, const std::string& fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        used_.push_back(key);
        return it->second;
    }
    double require_num(const std::string& key) { return parse_number(key, require(key)); }
    double num_or(const std::string& key, double fallback) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        used_.push_back(key);
        return parse_number(key, it->second);
    }

    void check_all_consumed() const {
        for (const auto& [key, value] : kv_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end())
                throw ConfigError(key + ": unknown key");
        }
    }

private:
    const std::map<std::string, std::string>& kv_;
    mutable std::vector<std::string> used_;
};

}  // namespace

ScenarioConfig ScenarioConfig::parse_string(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (cfg.kv_.count(key)) throw ConfigError(key + ": duplicate key");
        cfg.kv_[key] = value;
        cfg.order_.push_back(key);
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
    if (!kv_.count(key)) order_.push_back(key);
    kv_[key] = value;
}

bool ScenarioConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& ScenarioConfig::raw(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError(key + ": required key missing");
    return it->second;
}

ScenarioConfig::Built ScenarioConfig::build() const {
    KeyReader rd(kv_);
    Built out;

    const double L = rd.require_num("domain.L");
    if (!(L > 0.0)) throw ConfigError("domain.L: must be positive");
    const double n_modes_raw = rd.num_or("spectral.N", 32.0);
    if (n_modes_raw < 1 || n_modes_raw != std::floor(n_modes_raw))
        throw ConfigError("spectral.N: must be a positive integer");
    const auto N = static_cast<std::size_t>(n_modes_raw);
    const double n_grid_raw = rd.num_or("spectral.grid", static_cast<double>(4 * N));
    if (n_grid_raw < 2 || n_grid_raw != std::floor(n_grid_raw))
        throw ConfigError("spectral.grid: must be a positive integer");
    const auto M = static_cast<std::size_t>(n_grid_raw);
    if (M < 2 * N) throw ConfigError("spectral.grid: must be at least 2 * spectral.N");
    out.spec.op = build_dirichlet_laplacian_1d(L, N, M);

    out.spec.d = rd.num_or("d", 0.0);
    if (out.spec.d < 0.0) throw ConfigError("d: must be >= 0");
    const double r = rd.require_num("r");
    if (!(r > 0.0)) throw ConfigError("r: must be positive");
    out.spec.r = r;
    out.T = rd.require_num("T");
    if (!(out.T > 0.0)) throw ConfigError("T: must be positive");

    // --- delay -------------------------------------------------------------
    const std::string dvar = rd.require("delay.variant");
    try {
        if (dvar == "constant") {
            out.spec.eta = DelayFunctional::constant(rd.require_num("delay.tau"), r);
        } else if (dvar == "point" || dvar == "multi_point") {
            const std::vector<std::string> pnames = parse_string_list(rd.require("delay.p"));
            const std::vector<double> as = parse_number_list("delay.a", rd.require("delay.a"));
            const std::vector<double> bs = parse_number_list("delay.b", rd.require("delay.b"));
            const std::vector<double> rks = parse_number_list("delay.r_k", rd.require("delay.r_k"));
            if (pnames.size() != rks.size() || as.size() != rks.size() || bs.size() != rks.size())
                throw ConfigError("delay.r_k: list lengths of delay.p/a/b/r_k must match");
            std::optional<double> eta_ign;
            if (rd.has("delay.eta_ign")) eta_ign = parse_number("delay.eta_ign", raw("delay.eta_ign"));
            if (eta_ign) {
                for (double rk : rks)
                    if (rk < *eta_ign)
                        throw ConfigError("delay.r_k: offset inside the ignore zone (r_k < eta_ign)");
            }
            std::vector<std::pair<InnerMap, double>> terms;
            for (std::size_t i = 0; i < rks.size(); ++i)
                terms.emplace_back(InnerMap::parse(pnames[i], as[i], bs[i]), rks[i]);
            out.spec.eta = DelayFunctional::multi_point(std::move(terms), r, eta_ign);
        } else if (dvar == "integral" || dvar == "p_of_integral") {
            const InnerMap p = InnerMap::parse(rd.require("delay.p"), rd.require_num("delay.a"),
                                               rd.require_num("delay.b"));
            const double eta_ign = rd.require_num("delay.eta_ign");
            out.spec.eta = dvar == "integral" ? DelayFunctional::integral_of_p(p, eta_ign, r)
                                              : DelayFunctional::p_of_integral(p, eta_ign, r);
        } else {
            throw ConfigError("delay.variant: unknown variant '" + dvar + "'");
        }
        if (rd.has(std::string("delay.eta_min")))
            out.spec.eta = out.spec.eta.with_floor(parse_number("delay.eta_min", raw("delay.eta_min")));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("delay.variant: ") + e.what());
    }

    // --- reaction ------------------------------------------------------------
    const std::string bvar = rd.require("b.variant");
    try {
        if (bvar == "nicholson")
            out.spec.b = BirthFunction::nicholson(rd.require_num("b.p"), rd.num_or("b.wmax", 50.0));
        else if (bvar == "linear")
            out.spec.b = BirthFunction::linear(rd.require_num("b.c"));
        else if (bvar == "zero")
            out.spec.b = BirthFunction::zero();
        else if (bvar == "tanh")
            out.spec.b = BirthFunction::bounded_tanh(rd.require_num("b.c"));
        else
            throw ConfigError("b.variant: unknown variant '" + bvar + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("b.variant: ") + e.what());
    }

    const std::string kvar = rd.require("kernel.variant");
    if (kvar == "gaussian")
        out.spec.f = Kernel::gaussian(rd.require_num("kernel.alpha"));
    else if (kvar == "dirac")
        out.spec.f = Kernel::dirac();
    else
        throw ConfigError("kernel.variant: unknown variant '" + kvar + "'");

    // --- initial function ----------------------------------------------------
    const std::string preset = rd.require("phi.preset");
    const auto cells = static_cast<std::size_t>(rd.num_or("phi.cells", 200));
    if (preset == "coeffs" || preset == "coeffs_ramp") {
        std::vector<double> coeffs = parse_number_list("phi.coeffs", rd.require("phi.coeffs"));
        const double scale = rd.num_or("phi.scale", 1.0);
        if (coeffs.size() > out.spec.op.n_modes())
            throw ConfigError("phi.coeffs: more coefficients than spectral.N modes");
        ModalVector v(out.spec.op.n_modes());
        for (std::size_t k = 0; k < coeffs.size(); ++k) v[k] = scale * coeffs[k];
        if (preset == "coeffs") {
            out.spec.phi = InitialFunction::from_function(r, cells, [v](double) { return v; });
        } else {
            const double ramp = rd.num_or("phi.ramp", 0.5);
            out.spec.phi = InitialFunction::from_function(r, cells, [v, ramp, r](double th) {
                ModalVector w = v;
                w *= ramp + (1.0 - ramp) * (th + r) / r;
                return w;
            });
        }
    } else if (preset == "csv") {
        out.spec.phi = InitialFunction::load_csv(rd.require("phi.path"), out.spec.op);
    } else {
        throw ConfigError("phi.preset: unknown preset '" + preset + "'");
    }

    // --- solver ----------------------------------------------------------------
    out.opts.h = rd.require_num("solver.h");
    if (!(out.opts.h > 0.0)) throw ConfigError("solver.h: must be positive");
    const std::string mode = rd.get_or("solver.mode", "etd1");
    if (mode == "etd1")
        out.opts.mode = SolverMode::Etd1;
    else if (mode == "etd2")
        out.opts.mode = SolverMode::Etd2;
    else if (mode == "picard")
        out.opts.mode = SolverMode::Picard;
    else
        throw ConfigError("solver.mode: unknown mode '" + mode + "'");
    out.opts.picard_tol = rd.num_or("solver.picard_tol", 1e-12);
    out.opts.picard_max_iter = static_cast<int>(rd.num_or("solver.picard_max_iter", 200));
    out.opts.macro_override = rd.num_or("solver.macro", 0.0);
    if (out.opts.macro_override < 0.0) throw ConfigError("solver.macro: must be >= 0");
    if (out.opts.macro_override > out.spec.eta.eta_ign())
        throw ConfigError("solver.macro: must not exceed the delay's eta_ign");

    out.output_path = rd.get_or("output.path", "out.csv");
    out.delta_list = parse_number_list("output.delta_list", rd.get_or("output.delta_list", "0,0.25"));
    for (double dl : out.delta_list)
        if (dl < 0.0 || dl > 1.0) throw ConfigError("output.delta_list: entries must lie in [0, 1]");
    if (rd.has("output.probes"))
        out.probes = parse_number_list("output.probes", raw("output.probes"));

    rd.check_all_consumed();

    try {
        out.spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return out;
}

std::string ScenarioConfig::print() const {
    std::ostringstream os;
    for (const std::string& key : order_) os << key << " = " << kv_.at(key) << "\n";
    return os.str();
}

namespace {

const char kNicholsonCfg[] = R"(# Diffusive birth-death model with a state-dependent point delay.
domain.L = 3.141592653589793
spectral.N = 32
spectral.grid = 64
d = 0.5
r = 1.0
T = 5.0
delay.variant = point
delay.p = affine_norm
delay.a = 0.2
delay.b = 0.3
delay.r_k = 0.6
delay.eta_ign = 0.4
b.variant = nicholson
b.p = 2.0
kernel.variant = gaussian
kernel.alpha = 0.1
phi.preset = coeffs
phi.coeffs = 1.0,0.25,0.0625
solver.h = 0.01
solver.mode = etd1
output.path = nicholson_out.csv
output.delta_list = 0,0.25
)";

const char kDecayCfg[] = R"(# Pure decay: zero reaction term, first eigenmode initial data.
domain.L = 3.141592653589793
spectral.N = 8
spectral.grid = 32
d = 0.0
r = 1.0
T = 2.0
delay.variant = constant
delay.tau = 0.3
b.variant = zero
kernel.variant = dirac
phi.preset = coeffs
phi.coeffs = 1.0
solver.h = 0.001
solver.mode = etd1
output.path = decay_out.csv
output.delta_list = 0,0.25
)";

const char kOracleCfg[] = R"(# Linear constant-delay local problem; every mode has a scalar reference.
domain.L = 3.141592653589793
spectral.N = 8
spectral.grid = 32
d = 0.0
r = 1.0
T = 3.0
delay.variant = constant
delay.tau = 0.5
b.variant = linear
b.c = 0.5
kernel.variant = dirac
phi.preset = coeffs
phi.coeffs = 1.0,0.25,0.1111111111111111,0.0625,0.04,0.027777777777777776,0.020408163265306121,0.015625
phi.scale = 0.001
solver.h = 0.001
solver.mode = etd1
output.path = oracle_out.csv
output.delta_list = 0,0.25
)";

}  // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_presets() {
    static const std::vector<std::pair<std::string, std::string>> presets = {
        {"nicholson", kNicholsonCfg},
        {"decay", kDecayCfg},
        {"oracle", kOracleCfg},
    };
    return presets;
}

std::string preset_text(const std::string& name) {
    for (const auto& [n, text] : bundled_presets())
        if (n == name) return text;
    throw ConfigError("unknown preset: " + name);
}

}  // namespace sdd
