#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "branchwalk/config.hpp"
#include "branchwalk/ensemble.hpp"
#include "branchwalk/exponents.hpp"
#include "branchwalk/report.hpp"
#include "branchwalk/verify.hpp"

namespace py = pybind11;
using namespace branchwalk;

namespace {

TraitGraph graph_from_lists(int num_vertices,
                            const std::vector<std::tuple<int, int, std::string, std::string>>& edges,
                            const std::vector<std::string>& birth,
                            const std::vector<std::string>& death) {
    std::vector<TraitGraph::Edge> es;
    for (const auto& [from, to, label, mu] : edges)
        es.push_back({from, to, parse_rational(label), parse_rational(mu)});
    std::vector<Rational> b, d;
    for (const auto& s : birth) b.push_back(parse_rational(s));
    for (const auto& s : death) d.push_back(parse_rational(s));
    return make_graph(num_vertices, std::move(es), std::move(b), std::move(d));
}

}  // namespace

PYBIND11_MODULE(_branchwalk, m) {
    m.doc() = "exact multitype birth-death-mutation simulation on trait graphs "
              "with power-law mutation scaling";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<MutationOverflow>(m, "MutationOverflow");
    py::register_exception<SelectiveVertexOnWalk>(m, "SelectiveVertexOnWalk");
    py::register_exception<NotNonIncreasing>(m, "NotNonIncreasing");

    py::class_<TraitGraph>(m, "TraitGraph")
        .def(py::init(&graph_from_lists), py::arg("num_vertices"), py::arg("edges"),
             py::arg("birth"), py::arg("death"))
        .def_readonly("num_vertices", &TraitGraph::num_vertices)
        .def("lambda0", [](const TraitGraph& g) { return to_double(g.lambda0()); })
        .def("lambda_of", [](const TraitGraph& g, int v) { return to_double(g.lambda(v)); })
        .def("validate",
             [](const TraitGraph& g) { return validate(g).violations; })
        .def("classify",
             [](const TraitGraph& g) {
                 std::vector<std::string> out;
                 for (auto c : classify(g)) out.push_back(growth_class_name(c));
                 return out;
             })
        .def("check_non_increasing", &check_non_increasing);

    py::class_<ScalingParams>(m, "ScalingParams")
        .def_readonly("n", &ScalingParams::n)
        .def_readonly("h_n", &ScalingParams::h_n)
        .def_readonly("psi_n", &ScalingParams::psi_n)
        .def_readonly("log_n", &ScalingParams::log_n)
        .def_readonly("edge_mu_n", &ScalingParams::edge_mu_n)
        .def_readonly("mu_bar", &ScalingParams::mu_bar);

    m.def("make_scaling",
          [](const TraitGraph& g, long long n, int theta_max) {
              return make_scaling(g, n, theta_max);
          },
          py::arg("graph"), py::arg("n"), py::arg("theta_max"));
    m.def("total_mutation_probability", &total_mutation_probability);

    m.def("admissible_set", [](const TraitGraph& g, int target) {
        AdmissibleSet adm = admissible_set(g, target);
        py::dict out;
        out["t_v"] = to_double(adm.t_v);
        out["t_v_exact"] = rational_to_string(adm.t_v);
        out["theta_v"] = adm.theta_v;
        std::vector<std::vector<int>> walks;
        for (const auto& w : adm.walks) walks.push_back(w.vertices);
        out["walks"] = walks;
        std::vector<std::vector<int>> minimal;
        for (const auto& w : adm.all_minimal) minimal.push_back(w.vertices);
        out["all_minimal"] = minimal;
        return out;
    });

    m.def("simple_paths", [](const TraitGraph& g, int target) {
        std::vector<std::vector<int>> out;
        for (const auto& w : enumerate_simple_paths(g, target)) out.push_back(w.vertices);
        return out;
    });

    m.def("walk_weight_eval",
          [](const TraitGraph& g, const std::vector<int>& vertices, double t) {
              return walk_weight(g, make_walk(g, vertices)).weight.eval(t);
          },
          "evaluate the exact walk weight at a time point");

    m.def("trait_weight_eval", [](const TraitGraph& g, int v, double t) {
        return trait_weight_sum(g, v).w.eval(t);
    });

    m.def("exponent_limits", [](const TraitGraph& g) {
        ExponentResult res = run_exponent_algorithm(g);
        py::list traits;
        for (const auto& f : res.x) {
            py::dict jt;
            std::vector<double> b, vals, slopes;
            for (const auto& x : f.breakpoints) b.push_back(to_double(x));
            for (const auto& x : f.values) vals.push_back(to_double(x));
            for (const auto& x : f.slopes) slopes.push_back(to_double(x));
            jt["breakpoints"] = b;
            jt["values"] = vals;
            jt["slopes"] = slopes;
            traits.append(jt);
        }
        py::list events;
        for (const auto& ev : res.events) events.append(ev.describe());
        py::dict out;
        out["traits"] = traits;
        out["events"] = events;
        return out;
    });

    m.def("exponent_limit_eval", [](const TraitGraph& g, int v, double t) {
        return run_exponent_algorithm(g).x[v].eval(t);
    });

    py::class_<WLaw>(m, "WLaw")
        .def_readonly("atom_at_zero", &WLaw::atom_at_zero)
        .def_readonly("exp_rate", &WLaw::exp_rate)
        .def("survival", &WLaw::survival)
        .def("conditional_mean", &WLaw::conditional_mean);
    m.def("w_law", &w_law);

    py::class_<TraitAsymptotics>(m, "TraitAsymptotics")
        .def_static("from_graph", &TraitAsymptotics::from_graph)
        .def_readonly("theta_v", &TraitAsymptotics::theta_v)
        .def_property_readonly("t_v",
                               [](const TraitAsymptotics& a) { return to_double(a.t_v); })
        .def("w_eval", [](const TraitAsymptotics& a, double t) { return a.w_v.eval(t); });

    m.def("normalizer", &normalizer);
    m.def("predict_deterministic", &predict_deterministic);
    m.def("predict_random_scale", &predict_random_scale);
    m.def("predicted_stopping_time", &predicted_stopping_time);
    m.def("sample_w", [](std::uint64_t seed, const WLaw& law, int count) {
        Rng rng(seed);
        std::vector<double> out;
        for (int i = 0; i < count; ++i) out.push_back(sample_W(rng, law));
        return out;
    });

    m.def("simulate",
          [](const TraitGraph& g, const ScalingParams& sc, std::uint64_t seed,
             const std::vector<std::pair<double, double>>& det_obs,
             const std::vector<double>& eta_thresholds, double horizon, bool walk_mode) {
              RunConfig rc;
              rc.det_obs = det_obs;
              rc.eta_thresholds = eta_thresholds;
              rc.horizon = horizon;
              rc.sim.walk_mode = walk_mode;
              if (horizon < std::numeric_limits<double>::infinity())
                  rc.stop_when_observed = det_obs.empty() && eta_thresholds.empty() ? false : true;
              Rng rng = replicate_stream(seed, 0);
              Trajectory traj = run(g, sc, rc, rng);
              py::dict out;
              out["extinct"] = traj.extinct;
              out["events"] = traj.events;
              out["final_counts"] = traj.final_counts;
              py::list obs;
              for (const auto& rec : traj.observations) {
                  py::dict jo;
                  jo["t"] = rec.t;
                  jo["s"] = rec.s;
                  jo["time"] = rec.time;
                  jo["counts"] = rec.counts;
                  obs.append(jo);
              }
              out["observations"] = obs;
              py::dict crossings;
              for (const auto& c : traj.crossings)
                  if (std::isfinite(c.time))
                      crossings[py::make_tuple(std::string(1, c.rho), c.t)] = c.time;
              out["crossings"] = crossings;
              return out;
          },
          py::arg("graph"), py::arg("scaling"), py::arg("seed"),
          py::arg("det_obs") = std::vector<std::pair<double, double>>{},
          py::arg("eta_thresholds") = std::vector<double>{},
          py::arg("horizon") = std::numeric_limits<double>::infinity(),
          py::arg("walk_mode") = false);

    m.def("load_scenario", [](const std::string& path) {
        ScenarioConfig cfg = load_config(path);
        py::dict out;
        out["name"] = cfg.name;
        out["vertex_names"] = cfg.vertex_names;
        out["n_values"] = cfg.n_values;
        out["seed"] = cfg.seed;
        out["graph"] = cfg.graph;
        return out;
    });

    m.def("analyze_scenario",
          [](const std::string& path) { return analyze_report_json(load_config(path)); });

    m.def("ks_test_exponential", [](const std::vector<double>& sample, double rate) {
        KsResult r = ks_test_exponential(sample, rate);
        return py::make_tuple(r.statistic, r.p_value);
    });
}
