#include "branchwalk/report.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "branchwalk/walks.hpp"

namespace branchwalk {

using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

json polynomial_json(const Polynomial& p) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(rational_to_string(c));
    return coeffs;
}

json piecewise_json(const PiecewisePolynomial& f) {
    json out;
    json bps = json::array();
    for (const auto& b : f.breakpoints) bps.push_back(rational_to_string(b));
    out["breakpoints"] = bps;
    json pieces = json::array();
    for (const auto& p : f.pieces)
        pieces.push_back({{"coeffs", polynomial_json(p)}, {"text", p.to_string()}});
    out["pieces"] = pieces;
    return out;
}

json walk_json(const TraitGraph& graph, const std::vector<std::string>& names, const Walk& w) {
    json out;
    json verts = json::array();
    for (TraitId v : w.vertices) verts.push_back(names[v]);
    out["vertices"] = verts;
    out["t"] = rational_to_string(w.length());
    out["theta"] = w.theta();
    (void)graph;
    return out;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string analyze_report_json(const ScenarioConfig& cfg) {
    const TraitGraph& graph = cfg.graph;
    json out;
    out["scenario"] = cfg.name;
    out["config_hash"] = config_hash(cfg);
    out["non_increasing"] = check_non_increasing(graph);
    std::vector<GrowthClass> classes = classify(graph);

    json traits = json::array();
    for (int v = 0; v < graph.num_vertices; ++v) {
        json jt;
        jt["id"] = v;
        jt["name"] = cfg.vertex_names[v];
        jt["lambda"] = rational_to_string(graph.lambda(v));
        jt["class"] = growth_class_name(classes[v]);
        AdmissibleSet adm = admissible_set(graph, v);
        jt["t_v"] = rational_to_string(adm.t_v);
        jt["theta_v"] = adm.theta_v;
        json paths = json::array();
        for (const Walk& w : enumerate_simple_paths(graph, v))
            paths.push_back(walk_json(graph, cfg.vertex_names, w));
        jt["simple_paths"] = paths;
        json admissible = json::array();
        for (const Walk& w : adm.walks) {
            json jw = walk_json(graph, cfg.vertex_names, w);
            // zero-limit edges still count for path existence but annihilate
            // the weight; flagged rather than pruned
            bool zero_mu = false;
            for (size_t i = 1; i < w.vertices.size(); ++i)
                if (graph.edges[graph.edge_index(w.vertices[i - 1], w.vertices[i])].mu_limit == 0)
                    zero_mu = true;
            if (zero_mu) jw["zero_mu_edge"] = true;
            if (check_non_increasing(graph)) {
                WalkWeight ww = walk_weight(graph, w);
                jw["w_del"] = rational_to_string(ww.const_del);
                jw["w_neut"] = rational_to_string(ww.const_neut);
                jw["integral"] = piecewise_json(ww.integral);
                jw["weight"] = piecewise_json(ww.weight);
            }
            admissible.push_back(jw);
        }
        jt["admissible_walks"] = admissible;
        if (check_non_increasing(graph))
            jt["weight_sum"] = piecewise_json(trait_weight_sum(graph, v).w);
        traits.push_back(jt);
    }
    out["traits"] = traits;
    return out.dump(2) + "\n";
}

void write_analyze_report(const ScenarioConfig& cfg, const std::string& out_dir) {
    write_text(out_dir + "/analyze.json", analyze_report_json(cfg));
}

std::string exponents_report_json(const ScenarioConfig& cfg) {
    const TraitGraph& graph = cfg.graph;
    ExponentResult res = run_exponent_algorithm(graph);
    json out;
    out["scenario"] = cfg.name;
    out["config_hash"] = config_hash(cfg);

    json steps = json::array();
    for (const auto& d : res.step_times) steps.push_back(rational_to_string(d));
    out["step_times"] = steps;

    json events = json::array();
    for (const auto& ev : res.events) events.push_back(ev.describe());
    out["events"] = events;

    bool mono = static_cast<int>(graph.edges.size()) == graph.num_vertices - 1;
    for (int v = 0; mono && v + 1 < graph.num_vertices; ++v)
        if (graph.out_edges[v].size() != 1 || graph.edges[graph.out_edges[v][0]].to != v + 1)
            mono = false;
    if (mono && !graph.out_edges[graph.num_vertices - 1].empty()) mono = false;
    std::vector<PiecewiseLinear> mono_form, ni_form;
    if (mono) {
        std::vector<Rational> lambdas, labels;
        for (int v = 0; v < graph.num_vertices; ++v) lambdas.push_back(graph.lambda(v));
        for (int v = 0; v + 1 < graph.num_vertices; ++v)
            labels.push_back(graph.edges[graph.out_edges[v][0]].label);
        mono_form = closed_form_mono_directional(lambdas, labels);
    }
    bool non_increasing = check_non_increasing(graph);
    if (non_increasing) ni_form = closed_form_non_increasing(graph);

    json traits = json::array();
    for (int v = 0; v < graph.num_vertices; ++v) {
        json jt;
        jt["id"] = v;
        jt["name"] = cfg.vertex_names[v];
        json bps = json::array(), vals = json::array(), slopes = json::array();
        for (const auto& b : res.x[v].breakpoints) bps.push_back(rational_to_string(b));
        for (const auto& b : res.x[v].values) vals.push_back(rational_to_string(b));
        for (const auto& b : res.x[v].slopes) slopes.push_back(rational_to_string(b));
        jt["breakpoints"] = bps;
        jt["values"] = vals;
        jt["slopes"] = slopes;
        if (mono) jt["closed_form_mono_matches"] = mono_form[v] == res.x[v];
        if (non_increasing) jt["closed_form_non_increasing_matches"] = ni_form[v] == res.x[v];
        traits.push_back(jt);
    }
    out["traits"] = traits;
    return out.dump(2) + "\n";
}

void write_exponents_report(const ScenarioConfig& cfg, const std::string& out_dir) {
    write_text(out_dir + "/exponents.json", exponents_report_json(cfg));
}

std::string ensemble_csv(const EnsembleStats& stats) {
    std::ostringstream os;
    os << "replicate_id,n,scale,v,t,s,count,normalizer,ratio,survived\n";
    for (const auto& r : stats.rows) {
        os << r.replicate << ',' << r.n << ',' << r.scale << ',' << r.v << ','
           << format_double(r.t) << ',' << format_double(r.s) << ',' << r.count << ','
           << format_double(r.normalizer) << ',' << format_double(r.ratio) << ','
           << (r.scale == 'd' ? r.survived : r.valid) << '\n';
    }
    return os.str();
}

void write_ensemble_report(const ScenarioConfig& cfg, const EnsembleStats& stats,
                           const std::string& out_dir) {
    write_text(out_dir + "/ensemble.csv", ensemble_csv(stats));

    std::ostringstream cs;
    cs << "replicate_id,n,rho,t,time\n";
    for (const auto& c : stats.crossings)
        cs << c.replicate << ',' << c.n << ',' << c.rho << ',' << format_double(c.t) << ','
           << format_double(c.time) << '\n';
    write_text(out_dir + "/crossings.csv", cs.str());

    json out;
    out["scenario"] = cfg.name;
    out["config_hash"] = config_hash(cfg);
    json meta = json::array();
    for (const auto& m : stats.meta)
        meta.push_back({{"n", m.n},
                        {"replicate", m.replicate},
                        {"extinct", m.extinct},
                        {"budget_exceeded", m.budget_exceeded},
                        {"wild_alive_at_end", m.wild_alive_at_end},
                        {"events", m.events}});
    out["replicates"] = meta;

    if (check_non_increasing(cfg.graph)) {
        ComparisonReport cmp = compare_first_order(stats, to_ensemble_config(cfg));
        json cells = json::array();
        for (const auto& c : cmp.cells)
            cells.push_back({{"n", c.n},
                             {"v", c.v},
                             {"scale", std::string(1, c.scale)},
                             {"t", c.t},
                             {"s", c.s},
                             {"regime", c.regime},
                             {"total", c.total},
                             {"conditioned", c.conditioned},
                             {"mean_ratio", c.mean_ratio},
                             {"se_ratio", c.se_ratio},
                             {"predicted", c.predicted},
                             {"mean_law", c.mean_law},
                             {"rel_error", c.rel_error},
                             {"theta_v", c.theta_v},
                             {"regime2_exceeds_bound", c.regime2_exceeds_bound},
                             {"theta0_window", c.theta0_window}});
        json trends = json::array();
        for (const auto& t : cmp.trends)
            trends.push_back({{"v", t.v},
                              {"scale", std::string(1, t.scale)},
                              {"t", t.t},
                              {"s", t.s},
                              {"rel_errors", t.rel_errors},
                              {"decreasing", t.decreasing}});
        out["first_order"] = {{"cells", cells},
                                      {"trends", trends},
                                      {"all_trends_decreasing", cmp.all_trends_decreasing}};
    }
    write_text(out_dir + "/comparison.json", out.dump(2) + "\n");
}

void write_simulation_report(const ScenarioConfig& cfg, const Trajectory& traj,
                             const std::string& out_dir) {
    std::ostringstream os;
    os << "kind,rho,t,s,time,valid";
    for (int v = 0; v < cfg.graph.num_vertices; ++v) os << ",z_" << cfg.vertex_names[v];
    os << '\n';
    for (const auto& rec : traj.observations) {
        const char* kind = rec.kind == ObsRecord::Kind::Deterministic ? "det"
                           : rec.kind == ObsRecord::Kind::Random      ? "random"
                                                                      : "snapshot";
        os << kind << ',' << (rec.rho ? std::string(1, rec.rho) : std::string("-")) << ','
           << format_double(rec.t) << ',' << format_double(rec.s) << ','
           << format_double(rec.time) << ',' << rec.valid;
        for (long long c : rec.counts) os << ',' << c;
        os << '\n';
    }
    write_text(out_dir + "/observations.csv", os.str());

    json out;
    out["scenario"] = cfg.name;
    out["config_hash"] = config_hash(cfg);
    out["extinct"] = traj.extinct;
    out["budget_exceeded"] = traj.budget_exceeded;
    out["events"] = traj.events;
    out["end_time"] = traj.end_time;
    out["final_counts"] = traj.final_counts;
    json crossings = json::array();
    for (const auto& c : traj.crossings)
        crossings.push_back({{"rho", std::string(1, c.rho)},
                             {"t", c.t},
                             {"level", c.level},
                             {"time", std::isfinite(c.time) ? json(c.time) : json(nullptr)}});
    out["crossings"] = crossings;
    json kh = json::array();
    for (size_t e = 0; e < traj.k_one.size(); ++e)
        kh.push_back({{"from", cfg.vertex_names[cfg.graph.edges[e].from]},
                      {"to", cfg.vertex_names[cfg.graph.edges[e].to]},
                      {"one_mutant_events", traj.k_one[e]},
                      {"double_mutant_daughters", traj.h_two[e]}});
    out["mutation_counters"] = kh;
    if (!traj.species_walks.empty()) {
        json species = json::array();
        for (size_t s = 0; s < traj.species_walks.size(); ++s) {
            json names = json::array();
            for (TraitId v : traj.species_walks[s]) names.push_back(cfg.vertex_names[v]);
            species.push_back({{"walk", names},
                               {"remainder", static_cast<bool>(traj.species_remainder[s])},
                               {"count", traj.species_final[s]}});
        }
        out["species"] = species;
    }
    write_text(out_dir + "/simulation.json", out.dump(2) + "\n");

    if (!traj.event_log.empty()) write_event_log(out_dir + "/events.bwel", traj.event_log);
}

void write_manifest(const ScenarioConfig& cfg, const std::string& out_dir,
                    const std::string& command, int exit_code, bool budget_overflow) {
    json out;
    out["scenario"] = cfg.name;
    out["command"] = command;
    out["seed"] = cfg.seed;
    out["config_hash"] = config_hash(cfg);
    out["exit_code"] = exit_code;
    out["budget_overflow"] = budget_overflow;
    write_text(out_dir + "/manifest.json", out.dump(2) + "\n");
}

void write_event_log(const std::string& path, const std::vector<EventRec>& log) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    const char magic[4] = {'B', 'W', 'E', 'L'};
    std::uint16_t version = 1, pad = 0;
    std::uint64_t count = log.size();
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 2);
    out.write(reinterpret_cast<const char*>(&pad), 2);
    out.write(reinterpret_cast<const char*>(&count), 8);
    for (const auto& rec : log) {
        char buf[16];
        std::memset(buf, 0, sizeof(buf));
        std::memcpy(buf, &rec.time, 8);
        std::memcpy(buf + 8, &rec.trait, 4);
        std::memcpy(buf + 12, &rec.delta, 1);
        out.write(buf, 16);
    }
}

std::vector<EventRec> read_event_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    std::uint16_t version = 0, pad = 0;
    std::uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 2);
    in.read(reinterpret_cast<char*>(&pad), 2);
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in || std::memcmp(magic, "BWEL", 4) != 0 || version != 1)
        throw std::runtime_error("'" + path + "' is not a version-1 event log");
    std::vector<EventRec> log;
    log.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        char buf[16];
        in.read(buf, 16);
        if (!in) throw std::runtime_error("'" + path + "' is truncated");
        EventRec rec;
        std::memcpy(&rec.time, buf, 8);
        std::memcpy(&rec.trait, buf + 8, 4);
        std::memcpy(&rec.delta, buf + 12, 1);
        log.push_back(rec);
    }
    return log;
}

std::uint64_t file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace branchwalk
