#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "etmatch/cli.hpp"
#include "etmatch/error.hpp"
#include "etmatch/pipeline.hpp"
#include "etmatch/run_config.hpp"
#include "etmatch/string_metrics.hpp"
#include "etmatch/synthetic.hpp"
#include "etmatch/text.hpp"

namespace py = pybind11;
using namespace etmatch;

namespace {

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["tp"] = r.tp;
  d["fp"] = r.fp;
  d["fn"] = r.fn;
  d["precision"] = r.precision;
  d["recall"] = r.recall;
  d["f_half"] = r.f_half;
  d["f1"] = r.f1;
  d["f2"] = r.f2;
  return d;
}

py::dict stats_dict(const NormalizationStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["std_dev"] = s.std_dev;
  d["min_z"] = s.min_z;
  d["max_z"] = s.max_z;
  d["scope"] = s.scope;
  return d;
}

ReferenceAlignment to_reference(const std::vector<std::pair<std::string, std::string>>& pairs) {
  ReferenceAlignment ref;
  for (const auto& [a, b] : pairs) ref.pairs.insert({a, b});
  return ref;
}

RunConfig make_config(const std::map<std::string, std::string>& settings) {
  RunConfig config;
  for (const auto& [k, v] : settings) set_config_value(config, k, v);
  validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entity-type graph matching core";

  // Kept alive for the lifetime of the interpreter.
  static PyObject* error_type = PyErr_NewException("etmatch._core.EtmatchError", PyExc_RuntimeError, nullptr);
  m.add_object("EtmatchError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("exit_code") = exit_code(e.kind());
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  m.def("normalize_label", &normalize_label, py::arg("label"));
  m.def("levenshtein_sim", &levenshtein_sim, py::arg("a"), py::arg("b"));
  m.def("lcs_sim", &lcs_sim, py::arg("a"), py::arg("b"));
  m.def("ngram_sim", &ngram_sim, py::arg("a"), py::arg("b"), py::arg("n") = 2);
  m.def("sp", &sp, py::arg("weight"), py::arg("n_p"), py::arg("lambda_") = 0.1);
  m.def("l_spec", &l_spec, py::arg("weight"), py::arg("min_layer"), py::arg("theta"));
  m.def("f_beta", &f_beta, py::arg("precision"), py::arg("recall"), py::arg("beta"));

  m.def(
      "normalize_scores",
      [](const std::vector<double>& raw) {
        auto [out, stats] = normalize_scores(raw);
        return py::make_tuple(out, stats_dict(stats));
      },
      py::arg("raw"));

  py::class_<EtypeGraph>(m, "Graph")
      .def_property_readonly("id", &EtypeGraph::id)
      .def_property_readonly("max_depth", &EtypeGraph::max_depth)
      .def_property_readonly("etype_ids",
                             [](const EtypeGraph& g) {
                               std::vector<std::string> ids;
                               for (const auto& e : g.etypes()) ids.push_back(e.id);
                               return ids;
                             })
      .def("label", [](const EtypeGraph& g, const std::string& id) { return g.etype(id).label; })
      .def("layers", [](const EtypeGraph& g, bool include_inherited) { return compute_stats(g, include_inherited).layer_of; },
           py::arg("include_inherited") = true)
      .def("to_json", &serialize_graph)
      .def("__len__", [](const EtypeGraph& g) { return g.etypes().size(); });

  m.def(
      "load_graph", [](const std::string& path, bool strict) { return load_graph(path, {strict, {}}); },
      py::arg("path"), py::arg("strict") = true);
  m.def(
      "parse_graph", [](const std::string& text, bool strict) { return parse_graph(text, {strict, {}}); },
      py::arg("text"), py::arg("strict") = true);

  m.def(
      "score_alignment",
      [](const std::vector<std::pair<std::string, std::string>>& predicted,
         const std::vector<std::pair<std::string, std::string>>& reference) {
        std::vector<CandidatePair> pred;
        for (const auto& [a, b] : predicted) pred.push_back({a, b});
        return report_dict(score(pred, to_reference(reference)));
      },
      py::arg("predicted"), py::arg("reference"));

  m.def(
      "write_synthetic",
      [](const std::string& out_dir, int etypes, double label_noise, bool structure_noise, std::uint64_t seed) {
        SyntheticOptions opts;
        opts.etypes = etypes;
        opts.label_noise = label_noise;
        opts.structure_noise = structure_noise;
        opts.seed = seed;
        write_synthetic(generate_synthetic(opts), out_dir);
        return out_dir + "/task.json";
      },
      py::arg("out_dir"), py::arg("etypes") = 30, py::arg("label_noise") = 0.2, py::arg("structure_noise") = false,
      py::arg("seed") = 7);

  m.def(
      "train",
      [](const std::string& task_path, const std::string& mask, const std::map<std::string, std::string>& settings) {
        const auto config = make_config(settings);
        const auto task = load_task(task_path);
        py::gil_scoped_release release;
        return serialize_model(train_on_pairs(task.train, task.resources(), config.pipeline, FeatureMask::parse(mask)));
      },
      py::arg("task"), py::arg("mask") = "all", py::arg("settings") = std::map<std::string, std::string>{},
      "Trains on the task's train pairs and returns the model as JSON text.");

  m.def(
      "match",
      [](const std::string& model_json, const std::string& source, const std::string& target,
         const std::map<std::string, std::string>& settings) {
        const auto config = make_config(settings);
        const auto model = parse_model(model_json);
        const auto scored = score_candidates(model, load_graph(source), load_graph(target), {},
                                             config.pipeline.threshold, config.pipeline.workers);
        const auto alignment = extract_alignment(scored, config.pipeline.policy, config.pipeline.threshold);
        std::vector<std::tuple<std::string, std::string, double>> out;
        for (const auto& e : alignment.entries) out.emplace_back(e.pair.left, e.pair.right, e.score);
        return out;
      },
      py::arg("model"), py::arg("source"), py::arg("target"),
      py::arg("settings") = std::map<std::string, std::string>{},
      "Scores two graphs with a model and returns the accepted (left, right, score) triples.");

  m.def(
      "ablate",
      [](const std::string& task_path, const std::map<std::string, std::string>& settings) {
        const auto config = make_config(settings);
        const auto task = load_task(task_path);
        const auto variants = standard_ablation_variants();
        std::vector<NamedReport> rows;
        {
          py::gil_scoped_release release;
          rows = run_ablation(task, variants, config.pipeline);
        }
        py::list out;
        for (const auto& r : rows) {
          auto d = report_dict(r.report);
          d["name"] = r.name;
          out.append(d);
        }
        return out;
      },
      py::arg("task"), py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "etmatch");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");
}
