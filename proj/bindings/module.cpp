#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boardcore/oracle.hpp"
#include "boardcore/pipeline.hpp"

namespace py = pybind11;
using namespace boardcore;

namespace {

BrokerMode mode_from(const std::string& s) {
    if (s == "middleman") return BrokerMode::Middleman;
    if (s == "reach") return BrokerMode::Reach;
    throw std::invalid_argument("unknown brokerage mode '" + s + "'");
}

py::dict stage_dict(const StageStatus& st) {
    py::dict d;
    d["name"] = st.name;
    d["cached"] = st.cached;
    d["seconds"] = st.seconds;
    return d;
}

py::dict result_dict(const PipelineResult& res) {
    py::dict d;
    d["out_dir"] = res.out_dir;
    py::list stages;
    for (const auto& st : res.stages) stages.append(stage_dict(st));
    d["stages"] = stages;
    d["broker_count_mean"] = res.broker_count_mean;
    d["degeneracy_mean_halfunits"] = res.degeneracy_mean_hu;
    d["core_size_mean"] = res.core_size_mean;
    if (res.coreness_ame)
        d["coreness_ame"] = *res.coreness_ame;
    else
        d["coreness_ame"] = py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_boardcore, m) {
    m.doc() = "board network core detection";

    m.def("default_config", [] { return PipelineConfig::defaults().to_json_text(); },
          "effective pipeline defaults as JSON");

    m.def(
        "run_pipeline",
        [](const std::string& config_json) {
            PipelineConfig cfg = PipelineConfig::from_json_text(config_json);
            Warnings warnings;
            PipelineResult res = run_pipeline(cfg, &warnings);
            py::dict d = result_dict(res);
            d["warnings"] = warnings;
            return d;
        },
        py::arg("config_json"), "run every stage; returns stage statuses and summary means");

    m.def(
        "sensitivity_sweep",
        [](const std::string& config_json, const std::string& key,
           const std::vector<std::string>& values) {
            PipelineConfig cfg = PipelineConfig::from_json_text(config_json);
            Warnings warnings;
            auto rows = sensitivity_sweep(cfg, key, values, &warnings);
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["key"] = r.key;
                d["value"] = r.value;
                d["broker_count_mean"] = r.broker_count_mean;
                d["degeneracy_mean_halfunits"] = r.degeneracy_mean_hu;
                d["core_size_mean"] = r.core_size_mean;
                if (r.coreness_ame)
                    d["coreness_ame"] = *r.coreness_ame;
                else
                    d["coreness_ame"] = py::none();
                out.append(d);
            }
            return out;
        },
        py::arg("config_json"), py::arg("key"), py::arg("values"),
        "re-run the pipeline per value; writes sweep.csv under the config's out_dir");

    m.def(
        "synthesize",
        [](const std::string& synth_json, const std::string& out_dir) {
            SynthConfig cfg = SynthConfig::from_json_text(synth_json);
            Warnings warnings;
            SynthRegistry reg = synthesize_dataset(cfg, out_dir, &warnings);
            py::dict d;
            d["directors"] = reg.directors.size();
            d["positions"] = reg.positions.size();
            d["planted_core"] = reg.truth.core_ids;
            d["warnings"] = warnings;
            return d;
        },
        py::arg("synth_json"), py::arg("out_dir"),
        "write a synthetic registry with planted ground truth");

    m.def(
        "brokerage_scores",
        [](std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
           const std::string& mode) {
            CoBoardGraph g = graph_from_edges(n, edges);
            auto scores = brokerage_scores(g, mode_from(mode));
            std::vector<std::string> out;
            out.reserve(scores.size());
            for (const auto& r : scores) out.push_back(r.to_string());
            return out;
        },
        py::arg("n"), py::arg("edges"), py::arg("mode") = "middleman",
        "exact local brokerage per node, as rational strings");

    m.def(
        "prune_brokers",
        [](std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
           const std::string& threshold, const std::string& mode) {
            auto thr = parse_rational(threshold);
            if (!thr) throw std::invalid_argument("bad threshold '" + threshold + "'");
            CoBoardGraph g = graph_from_edges(n, edges);
            BrokerageReport rep = prune_brokers(g, *thr, mode_from(mode));
            py::dict d;
            d["survivors"] = rep.survivors;
            py::list rounds;
            for (const auto& r : rep.rounds) {
                py::dict rd;
                rd["round"] = r.round;
                rd["removed"] = r.removed;
                rd["remaining"] = r.remaining;
                rd["remaining_fraction"] = r.remaining_fraction.to_double();
                rounds.append(rd);
            }
            d["rounds"] = rounds;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("threshold") = "1",
        py::arg("mode") = "middleman", "iterative batch pruning below the threshold");

    m.def(
        "weighted_kcore",
        [](std::uint32_t n,
           const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>& edges) {
            std::vector<WeightedEdge> es;
            es.reserve(edges.size());
            for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
            ReachGraph rg = reach_from_edges(n, es);
            CorenessTable t = weighted_kcore(rg);
            py::dict d;
            std::vector<long long> hu;
            hu.reserve(t.coreness.size());
            for (const auto& c : t.coreness) hu.push_back(c.hu);
            d["coreness_halfunits"] = hu;
            d["degeneracy_halfunits"] = t.degeneracy.hu;
            d["max_core"] = t.max_core;
            return d;
        },
        py::arg("n"), py::arg("edges"),
        "peel a half-unit-weighted graph; edges are (u, v, weight_halfunits)");

    m.def(
        "fit_logistic",
        [](const std::vector<std::vector<double>>& x, const std::vector<double>& y,
           std::vector<std::string> names, double ridge) {
            DesignMatrix d;
            d.n = y.size();
            if (x.size() != d.n) throw std::invalid_argument("x and y row counts differ");
            d.p = d.n == 0 ? 0 : static_cast<std::uint32_t>(x[0].size());
            d.x.reserve(d.n * d.p);
            for (const auto& row : x) {
                if (row.size() != d.p) throw std::invalid_argument("ragged design matrix");
                d.x.insert(d.x.end(), row.begin(), row.end());
            }
            d.y = y;
            for (std::uint32_t k = 0; k < d.p; ++k) {
                DesignColumn col;
                col.name = k < names.size() ? names[k] : "x" + std::to_string(k);
                if (k > 0) col.factors.push_back({0, -1});  // anything non-intercept
                d.cols.push_back(std::move(col));
            }
            FitOptions opt;
            opt.ridge = ridge;
            FitResult fit = fit_logistic(d, opt);
            py::dict out;
            out["beta"] = fit.beta;
            std::vector<double> se;
            for (std::uint32_t k = 0; k < d.p; ++k) se.push_back(fit.se_model(k, d.p));
            out["se"] = se;
            out["ll"] = fit.ll;
            out["ll_null"] = fit.ll_null;
            out["iterations"] = fit.iterations;
            out["converged"] = fit.converged;
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("names") = std::vector<std::string>{},
        py::arg("ridge") = 0.0,
        "logistic fit on a dense design matrix whose first column is the intercept");

    py::register_exception<PipelineError>(m, "PipelineError");
    py::register_exception<SeparationError>(m, "SeparationError");
    py::register_exception<RankDeficientError>(m, "RankDeficientError");
}
