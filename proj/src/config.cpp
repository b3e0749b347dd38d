#include "momentflow/config.hpp"

#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/states.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace momentflow {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object, rejecting any key not consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    template <class T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("field '" + field(key) + "' has the wrong type");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    const json& at(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown key '" + field(it.key()) + "'");
    }

private:
    std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("field '" + field + "' " + what);
}

bool parse_moment_key(const std::string& k, int& a, int& n) {
    if (k.size() < 5 || k.compare(0, 2, "G_") != 0) return false;
    const auto us = k.find('_', 2);
    if (us == std::string::npos) return false;
    try {
        std::size_t pa = 0, pn = 0;
        a = std::stoi(k.substr(2, us - 2), &pa);
        n = std::stoi(k.substr(us + 1), &pn);
        if (pa != us - 2 || pn != k.size() - us - 1) return false;
    } catch (const std::exception&) {
        return false;
    }
    return a >= 0 && n >= 2 && a <= n;
}

}  // namespace

void RunConfig::validate() const {
    static const std::set<std::string> models{"harmonic", "free", "quartic", "cosmology"};
    require(models.count(model) > 0, "model", "must be one of harmonic, free, quartic, cosmology (got '" + model + "')");
    const auto& P = params;
    require(P.hbar > 0.0 && std::isfinite(P.hbar), "params.hbar", "must be positive");
    if (model != "cosmology") {
        require(P.m > 0.0, "params.m", "must be positive");
        if (model != "free") require(P.omega > 0.0, "params.omega", "must be positive");
    } else {
        require(P.gamma > 0.0, "params.gamma", "must be positive");
        require(P.kappa > 0.0, "params.kappa", "must be positive");
        require(P.ell >= 0.0, "params.ell", "must be non-negative");
    }
    require(n_max >= 2 && n_max <= 12, "n_max", "must be in [2, 12]");
    try {
        parse_closure(closure);
    } catch (const ConfigError&) {
        throw ConfigError("field 'closure' must be zero or gaussian-factorize (got '" + closure + "')");
    }
    require(integrator.abs_tol > 0.0, "integrator.abs_tol", "must be positive");
    require(integrator.rel_tol >= 0.0, "integrator.rel_tol", "must be non-negative");
    require(integrator.dt > 0.0, "integrator.dt", "must be positive");
    static const std::set<std::string> kinds{"coherent", "squeezed", "moments", "cosmology"};
    require(kinds.count(initial.type) > 0, "initial.type", "must be coherent, squeezed, moments or cosmology");
    require((initial.type == "cosmology") == (model == "cosmology"), "initial.type",
            "cosmology initial states go with the cosmology model only");
    for (const auto& [k, v] : initial.moments) {
        int a = 0, n = 0;
        require(parse_moment_key(k, a, n), "initial.moments." + k, "is not a moment name G_a_n");
        require(n <= n_max, "initial.moments." + k, "exceeds n_max");
        require(std::isfinite(v), "initial.moments." + k, "must be finite");
    }
    require(time.samples >= 2, "time.samples", "must be at least 2");
    require(time.t1 != time.t0, "time.t1", "must differ from time.t0");
    require(oracle.D >= 8, "oracle.D", "must be at least 8");
    require(output.format == "csv" || output.format == "json", "output.format", "must be csv or json");
    try {
        adiabatic.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("field 'adiabatic': ") + e.what());
    }
    try {
        parse_embedding(order_check.embedding);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("field 'order_check.embedding': ") + e.what());
    }
    require(order_check.k >= 0, "order_check.k", "must be non-negative");
}

ClassicalHamiltonian RunConfig::hamiltonian() const {
    const auto& P = params;
    if (model == "harmonic") return ClassicalHamiltonian::harmonic(P.m, P.omega);
    if (model == "free") return ClassicalHamiltonian::free_particle(P.m);
    if (model == "quartic") return ClassicalHamiltonian::quartic(P.m, P.omega, P.delta);
    if (model == "cosmology") return ClassicalHamiltonian::cosmology(P.gamma, P.kappa, P.E);
    throw ConfigError("field 'model' is unknown: '" + model + "'");
}

CosmologyParams RunConfig::cosmology() const {
    CosmologyParams c;
    c.gamma = params.gamma;
    c.kappa = params.kappa;
    c.E = params.E;
    c.hbar = params.hbar;
    c.ell = params.ell;
    c.g0 = params.g0;
    c.g32 = params.g32;
    c.g3 = params.g3;
    return c;
}

OrderCheckOptions RunConfig::order_check_options() const {
    OrderCheckOptions o;
    o.embedding = parse_embedding(order_check.embedding);
    o.hbars = order_check.hbars;
    o.k = order_check.k;
    o.adiabatic = adiabatic;
    return o;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Reader r(j, "");
    r.get("model", c.model);
    if (r.has("params")) {
        Reader p(r.at("params"), "params");
        auto& P = c.params;
        p.get("m", P.m);
        p.get("omega", P.omega);
        p.get("delta", P.delta);
        p.get("hbar", P.hbar);
        p.get("gamma", P.gamma);
        p.get("kappa", P.kappa);
        p.get("E", P.E);
        p.get("ell", P.ell);
        p.get("g0", P.g0);
        p.get("g32", P.g32);
        p.get("g3", P.g3);
        p.finish();
    }
    r.get("n_max", c.n_max);
    r.get("closure", c.closure);
    if (r.has("integrator")) {
        Reader p(r.at("integrator"), "integrator");
        p.get("abs_tol", c.integrator.abs_tol);
        p.get("rel_tol", c.integrator.rel_tol);
        p.get("fixed_step", c.integrator.fixed_step);
        p.get("dt", c.integrator.dt);
        p.get("initial_dt", c.integrator.initial_dt);
        p.get("max_dt", c.integrator.max_dt);
        p.finish();
    }
    if (r.has("initial")) {
        Reader p(r.at("initial"), "initial");
        auto& I = c.initial;
        p.get("type", I.type);
        p.get("q", I.q);
        p.get("p", I.p);
        p.get("g", I.g);
        p.get("moments", I.moments);
        p.get("constraint", I.constraint);
        p.get("suitable_g0", I.suitable_g0);
        p.finish();
    }
    if (r.has("time")) {
        Reader p(r.at("time"), "time");
        p.get("t0", c.time.t0);
        p.get("t1", c.time.t1);
        p.get("samples", c.time.samples);
        p.finish();
    }
    if (r.has("oracle")) {
        Reader p(r.at("oracle"), "oracle");
        p.get("D", c.oracle.D);
        p.finish();
    }
    if (r.has("adiabatic")) {
        Reader p(r.at("adiabatic"), "adiabatic");
        p.get("e", c.adiabatic.e);
        p.get("k", c.adiabatic.k);
        p.get("C2", c.adiabatic.C2);
        p.get("Cn", c.adiabatic.Cn);
        std::string law = mass_law_name(c.adiabatic.mass_law);
        p.get("mass_law", law);
        try {
            c.adiabatic.mass_law = parse_mass_law(law);
        } catch (const ConfigError&) {
            throw ConfigError("field 'adiabatic.mass_law' must be linear or cubic");
        }
        p.finish();
    }
    if (r.has("order_check")) {
        Reader p(r.at("order_check"), "order_check");
        p.get("embedding", c.order_check.embedding);
        p.get("hbars", c.order_check.hbars);
        p.get("k", c.order_check.k);
        p.finish();
    }
    if (r.has("output")) {
        Reader p(r.at("output"), "output");
        p.get("dir", c.output.dir);
        p.get("prefix", c.output.prefix);
        p.get("format", c.output.format);
        p.finish();
    }
    r.get("seed", c.seed);
    r.finish();
    c.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    const auto& P = c.params;
    json j;
    j["model"] = c.model;
    j["params"] = {{"m", P.m},         {"omega", P.omega}, {"delta", P.delta}, {"hbar", P.hbar},
                   {"gamma", P.gamma}, {"kappa", P.kappa}, {"E", P.E},         {"ell", P.ell},
                   {"g0", P.g0},       {"g32", P.g32},     {"g3", P.g3}};
    j["n_max"] = c.n_max;
    j["closure"] = c.closure;
    j["integrator"] = {{"abs_tol", c.integrator.abs_tol},       {"rel_tol", c.integrator.rel_tol},
                       {"fixed_step", c.integrator.fixed_step}, {"dt", c.integrator.dt},
                       {"initial_dt", c.integrator.initial_dt}, {"max_dt", c.integrator.max_dt}};
    j["initial"] = {{"type", c.initial.type},
                    {"q", c.initial.q},
                    {"p", c.initial.p},
                    {"g", c.initial.g},
                    {"moments", c.initial.moments},
                    {"constraint", c.initial.constraint},
                    {"suitable_g0", c.initial.suitable_g0}};
    j["time"] = {{"t0", c.time.t0}, {"t1", c.time.t1}, {"samples", c.time.samples}};
    j["oracle"] = {{"D", c.oracle.D}};
    j["adiabatic"] = {{"e", c.adiabatic.e},
                      {"k", c.adiabatic.k},
                      {"C2", c.adiabatic.C2},
                      {"Cn", c.adiabatic.Cn},
                      {"mass_law", mass_law_name(c.adiabatic.mass_law)}};
    j["order_check"] = {{"embedding", c.order_check.embedding}, {"hbars", c.order_check.hbars}, {"k", c.order_check.k}};
    j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}, {"format", c.output.format}};
    j["seed"] = c.seed;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

SemiclassicalState initial_state(const RunConfig& c) {
    c.validate();
    const auto& P = c.params;
    const auto& I = c.initial;
    const double om = P.omega > 0.0 && c.model != "free" ? P.omega : 1.0;
    if (I.type == "coherent") return coherent_state(I.q, I.p, P.hbar, P.m, om, c.n_max);
    if (I.type == "squeezed") {
        Eigen::Matrix2d g;
        g << I.g[0], I.g[1], I.g[1], I.g[2];
        // Squeezed moments are built in m omega = 1 units, then rescaled.
        const double mw = P.m * om;
        SemiclassicalState s = squeezed_moments(SqueezeMatrix(g), Eigen::Vector2d(I.q * std::sqrt(mw), I.p / std::sqrt(mw)),
                                                c.n_max, P.hbar);
        s.x = {I.q, I.p};
        for (auto& [idx, v] : s.moments) v *= std::pow(mw, idx.a() - 0.5 * idx.order());
        return s;
    }
    if (I.type == "moments") {
        SemiclassicalState s;
        s.hbar = P.hbar;
        s.n_max = c.n_max;
        s.x = {I.q, I.p};
        for (int n = 2; n <= c.n_max; ++n)
            for (int a = 0; a <= n; ++a) s.set(a, n, 0.0);
        for (int a = 0; a <= 2; ++a)
            require(I.moments.count(moment_column(a, 2)) > 0, "initial.moments", "must list " + moment_column(a, 2));
        for (const auto& [k, v] : I.moments) {
            int a = 0, n = 0;
            parse_moment_key(k, a, n);
            s.set(a, n, v);
        }
        return s;
    }
    // cosmology: q is unused, p is the densitized triad, c from the constraint or initial.q
    CosmologyParams cp = c.cosmology();
    require(I.p > 0.0, "initial.p", "must be positive for cosmology");
    const double cc = I.constraint ? cosmology_constraint_c(cp, I.p) : I.q;
    if (I.suitable_g0) cp.g0 = cosmology_suitable_g0(cp, cc, I.p);
    SemiclassicalState s = cosmology_state(cp, cc, I.p);
    s.n_max = c.n_max;
    for (int n = 3; n <= c.n_max; ++n)
        for (int a = 0; a <= n; ++a) s.set(a, n, 0.0);
    return s;
}

}  // namespace momentflow
