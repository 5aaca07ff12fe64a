#include "branchwalk/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "branchwalk/walks.hpp"

namespace branchwalk {

using nlohmann::json;

namespace {

Rational get_rational(const json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError("missing field '" + field + "'");
    const json& v = j.at(field);
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
    } catch (const std::exception& e) {
        throw ConfigError("field '" + field + "': " + e.what());
    }
    throw ConfigError("field '" + field + "' must be a rational string or integer");
}

double get_real(const json& j, const std::string& field) {
    const json& v = j.at(field);
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    return v.get<double>();
}

char rho_code(const std::string& name) {
    if (name == "eta" || name == "e") return 'e';
    if (name == "sigma" || name == "s") return 's';
    if (name == "tau" || name == "t") return 't';
    throw ConfigError("unknown time scale '" + name + "' (want eta|sigma|tau)");
}

std::string rho_name(char code) {
    switch (code) {
        case 'e': return "eta";
        case 's': return "sigma";
        case 't': return "tau";
    }
    return "?";
}

}  // namespace

int ScenarioConfig::vertex_id(const std::string& name) const {
    for (size_t i = 0; i < vertex_names.size(); ++i)
        if (vertex_names[i] == name) return static_cast<int>(i);
    throw ConfigError("unknown vertex '" + name + "'");
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    cfg.name = j.value("name", "scenario");
    cfg.seed = j.value("seed", 1ull);

    if (!j.contains("graph")) throw ConfigError("missing 'graph' section");
    const json& jg = j.at("graph");
    if (!jg.contains("vertices") || jg.at("vertices").empty())
        throw ConfigError("graph needs a non-empty 'vertices' list");

    std::vector<Rational> birth, death;
    for (const json& jv : jg.at("vertices")) {
        cfg.vertex_names.push_back(jv.value("name", "v" + std::to_string(birth.size())));
        birth.push_back(get_rational(jv, "birth"));
        death.push_back(get_rational(jv, "death"));
    }
    std::vector<TraitGraph::Edge> edges;
    for (const json& je : jg.value("edges", json::array())) {
        TraitGraph::Edge e;
        auto endpoint = [&](const std::string& field) -> TraitId {
            const json& v = je.at(field);
            if (v.is_string()) {
                std::string name = v.get<std::string>();
                for (size_t i = 0; i < cfg.vertex_names.size(); ++i)
                    if (cfg.vertex_names[i] == name) return static_cast<int>(i);
                throw ConfigError("edge endpoint '" + name + "' is not a declared vertex");
            }
            return v.get<int>();
        };
        e.from = endpoint("from");
        e.to = endpoint("to");
        e.label = get_rational(je, "label");
        e.mu_limit = get_rational(je, "mu");
        edges.push_back(std::move(e));
    }
    const int num_vertices = static_cast<int>(birth.size());
    cfg.graph = make_graph(num_vertices, std::move(edges), std::move(birth), std::move(death));

    if (j.contains("scaling")) {
        const json& js = j.at("scaling");
        if (js.contains("n")) {
            cfg.n_values.clear();
            for (const json& n : js.at("n")) cfg.n_values.push_back(n.get<long long>());
        }
        if (js.contains("phi") && !js.at("phi").is_null()) cfg.phi_override = get_real(js, "phi");
        if (js.contains("psi") && !js.at("psi").is_null()) cfg.psi_override = get_real(js, "psi");
    }

    if (j.contains("run")) {
        const json& jr = j.at("run");
        cfg.replicates = jr.value("replicates", cfg.replicates);
        cfg.threads = jr.value("threads", cfg.threads);
        if (jr.contains("horizon") && !jr.at("horizon").is_null())
            cfg.horizon = get_real(jr, "horizon");
        cfg.budget = jr.value("budget", cfg.budget);
        cfg.walk_mode = jr.value("walk_mode", cfg.walk_mode);
        cfg.extra_visits = jr.value("extra_visits", cfg.extra_visits);
        cfg.snapshot_interval = jr.value("snapshot_interval", cfg.snapshot_interval);
        cfg.keep_event_log = jr.value("keep_event_log", cfg.keep_event_log);
        for (const json& jo : jr.value("det_obs", json::array()))
            cfg.det_obs.emplace_back(get_real(jo, "t"), jo.contains("s") ? get_real(jo, "s") : 0.0);
        for (const json& jo : jr.value("random_obs", json::array()))
            cfg.random_obs.push_back({rho_code(jo.at("rho").get<std::string>()), get_real(jo, "t"),
                                      jo.contains("s") ? get_real(jo, "s") : 0.0});
        auto thresholds = [&](const char* field, std::vector<double>& out) {
            for (const json& t : jr.value(field, json::array()))
                out.push_back(t.is_string() ? to_double(parse_rational(t.get<std::string>()))
                                            : t.get<double>());
        };
        thresholds("eta_thresholds", cfg.eta_thresholds);
        thresholds("sigma_thresholds", cfg.sigma_thresholds);
        thresholds("tau_thresholds", cfg.tau_thresholds);
    }

    if (j.contains("stats")) {
        const json& js = j.at("stats");
        cfg.ks_p_floor = js.value("ks_p_floor", cfg.ks_p_floor);
        cfg.ci_z = js.value("ci_z", cfg.ci_z);
        cfg.trend_se_slack = js.value("trend_se_slack", cfg.trend_se_slack);
        cfg.conditioning = js.value("conditioning", cfg.conditioning);
        if (cfg.conditioning != "survival" && cfg.conditioning != "all")
            throw ConfigError("stats.conditioning must be 'survival' or 'all'");
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);

    ValidationReport vr = validate(cfg.graph);
    if (!vr.ok()) {
        std::string msg = "invalid graph:";
        for (const auto& v : vr.violations) msg += "\n  - " + v;
        throw ConfigError(msg);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;

    json verts = json::array();
    for (int v = 0; v < cfg.graph.num_vertices; ++v)
        verts.push_back({{"name", cfg.vertex_names[v]},
                         {"birth", rational_to_string(cfg.graph.birth[v])},
                         {"death", rational_to_string(cfg.graph.death[v])}});
    json edges = json::array();
    for (const auto& e : cfg.graph.edges)
        edges.push_back({{"from", cfg.vertex_names[e.from]},
                         {"to", cfg.vertex_names[e.to]},
                         {"label", rational_to_string(e.label)},
                         {"mu", rational_to_string(e.mu_limit)}});
    j["graph"] = {{"vertices", verts}, {"edges", edges}};

    json scaling;
    scaling["n"] = cfg.n_values;
    if (cfg.phi_override) scaling["phi"] = *cfg.phi_override;
    if (cfg.psi_override) scaling["psi"] = *cfg.psi_override;
    j["scaling"] = scaling;

    json run;
    run["replicates"] = cfg.replicates;
    run["threads"] = cfg.threads;
    if (std::isfinite(cfg.horizon)) run["horizon"] = cfg.horizon;
    run["budget"] = cfg.budget;
    run["walk_mode"] = cfg.walk_mode;
    run["extra_visits"] = cfg.extra_visits;
    run["snapshot_interval"] = cfg.snapshot_interval;
    run["keep_event_log"] = cfg.keep_event_log;
    json det = json::array();
    for (const auto& [t, s] : cfg.det_obs) det.push_back({{"t", t}, {"s", s}});
    run["det_obs"] = det;
    json rnd = json::array();
    for (const auto& ro : cfg.random_obs)
        rnd.push_back({{"rho", rho_name(ro.rho)}, {"t", ro.t}, {"s", ro.s}});
    run["random_obs"] = rnd;
    run["eta_thresholds"] = cfg.eta_thresholds;
    run["sigma_thresholds"] = cfg.sigma_thresholds;
    run["tau_thresholds"] = cfg.tau_thresholds;
    j["run"] = run;

    j["stats"] = {{"ks_p_floor", cfg.ks_p_floor},
                  {"ci_z", cfg.ci_z},
                  {"trend_se_slack", cfg.trend_se_slack},
                  {"conditioning", cfg.conditioning}};
    j["out_dir"] = cfg.out_dir;
    return j.dump(2);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    std::string text = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

EnsembleConfig to_ensemble_config(const ScenarioConfig& cfg) {
    EnsembleConfig ec;
    ec.graph = cfg.graph;
    ec.n_values = cfg.n_values;
    ec.replicates = cfg.replicates;
    ec.root_seed = cfg.seed;
    ec.threads = cfg.threads;
    ec.det_obs = cfg.det_obs;
    ec.random_obs = cfg.random_obs;
    ec.eta_thresholds = cfg.eta_thresholds;
    ec.sigma_thresholds = cfg.sigma_thresholds;
    ec.horizon = cfg.horizon;
    ec.budget = cfg.budget;
    ec.walk_mode = cfg.walk_mode;
    ec.extra_visits = cfg.extra_visits;
    ec.ks_p_floor = cfg.ks_p_floor;
    ec.ci_z = cfg.ci_z;
    ec.trend_se_slack = cfg.trend_se_slack;
    ec.condition_on_survival = cfg.conditioning == "survival";
    ec.phi_override = cfg.phi_override;
    ec.psi_override = cfg.psi_override;
    return ec;
}

ScalingParams make_scaling_for_config(const ScenarioConfig& cfg, long long n) {
    int theta_max = 0;
    for (int v = 1; v < cfg.graph.num_vertices; ++v)
        theta_max = std::max(theta_max, admissible_set(cfg.graph, v).theta_v);
    return make_scaling(cfg.graph, n, theta_max, cfg.phi_override, cfg.psi_override);
}

RunConfig to_run_config(const ScenarioConfig& cfg) {
    RunConfig rc;
    rc.horizon = cfg.horizon;
    rc.budget = cfg.budget;
    rc.sim.walk_mode = cfg.walk_mode;
    rc.sim.extra_visits = cfg.extra_visits;
    rc.det_obs = cfg.det_obs;
    rc.random_obs = cfg.random_obs;
    rc.eta_thresholds = cfg.eta_thresholds;
    rc.sigma_thresholds = cfg.sigma_thresholds;
    rc.tau_thresholds = cfg.tau_thresholds;
    rc.snapshot_interval = cfg.snapshot_interval;
    rc.keep_event_log = cfg.keep_event_log;
    return rc;
}

}  // namespace branchwalk
