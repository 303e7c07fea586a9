// Python bindings for the rgc core. Labels cross the boundary as integer
// arrays in {-1, 0, +1}; 0 marks an unlabelled node.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rgc/bench.hpp"
#include "rgc/classify.hpp"
#include "rgc/config.hpp"
#include "rgc/data.hpp"
#include "rgc/error.hpp"
#include "rgc/graph.hpp"
#include "rgc/oos.hpp"
#include "rgc/spectral.hpp"

namespace py = pybind11;
using namespace rgc;

namespace {

using EdgeTuple = std::tuple<Index, Index, double>;

std::vector<Edge> to_edges(const std::vector<EdgeTuple>& in) {
  std::vector<Edge> out;
  out.reserve(in.size());
  for (const auto& [i, j, w] : in) out.push_back({i, j, w});
  return out;
}

std::vector<EdgeTuple> from_edges(const std::vector<Edge>& in) {
  std::vector<EdgeTuple> out;
  out.reserve(in.size());
  for (const auto& e : in) out.emplace_back(e.i, e.j, e.w);
  return out;
}

LabelVector to_labels(const std::vector<int>& y) { return LabelVector::from_ints(y); }

std::vector<int> from_labels(const LabelVector& labels) {
  std::vector<int> out(static_cast<std::size_t>(labels.size()));
  for (Index i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(i)] = labels[i];
  return out;
}

PointCloud to_points(const Matrix& coords) {
  PointCloud p{coords};
  p.validate();
  return p;
}

KeyValueConfig to_config(const std::vector<std::pair<std::string, std::string>>& entries) {
  KeyValueConfig cfg;
  for (const auto& [k, v] : entries) cfg.set(k, v);
  return cfg;
}

py::dict run_to_dict(const ExperimentRun& run) {
  py::list rows, agg;
  for (const auto& r : run.result.rows) {
    py::dict d;
    d["dataset"] = r.dataset;
    d["method"] = to_string(r.method);
    d["n_labels"] = r.n_labels;
    d["noise"] = r.noise;
    d["rep"] = r.rep;
    d["accuracy"] = r.accuracy;
    d["param"] = r.param;
    rows.append(d);
  }
  for (const auto& a : run.result.aggregate()) {
    py::dict d;
    d["dataset"] = a.dataset;
    d["method"] = to_string(a.method);
    d["n_labels"] = a.n_labels;
    d["noise"] = a.noise;
    d["mean"] = a.mean;
    d["std"] = a.std;
    d["min"] = a.min;
    d["max"] = a.max;
    agg.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["aggregate"] = agg;
  out["warnings"] = run.result.warnings;
  out["resolved"] = run.resolved.entries();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph-based semi-supervised classification with a robust concave loss";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      py::setattr(exc, "code", py::str(to_string(e.code())));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<WeightedGraph, std::shared_ptr<WeightedGraph>>(m, "Graph")
      .def_static(
          "from_edges",
          [](Index n, const std::vector<EdgeTuple>& edges) {
            const auto e = to_edges(edges);
            return WeightedGraph::from_edge_list(n, e);
          },
          py::arg("n"), py::arg("edges"))
      .def_static("from_dense", &WeightedGraph::from_dense, py::arg("weights"))
      .def_static(
          "kernel",
          [](const Matrix& coords, double sigma) {
            return kernel_graph(to_points(coords), KernelSpec{sigma});
          },
          py::arg("points"), py::arg("sigma"))
      .def_static(
          "knn", [](const Matrix& coords, int k) { return knn_graph(to_points(coords), k); },
          py::arg("points"), py::arg("k"))
      .def_property_readonly("size", &WeightedGraph::size)
      .def_property_readonly("degrees", &WeightedGraph::degrees)
      .def_property_readonly("is_dense", &WeightedGraph::is_dense)
      .def("weight", &WeightedGraph::weight)
      .def("to_dense", &WeightedGraph::to_dense)
      .def("edges", [](const WeightedGraph& g) { return from_edges(g.edges()); })
      .def("__len__", &WeightedGraph::size);

  py::class_<SpectralContext, std::shared_ptr<SpectralContext>>(m, "SpectralContext")
      .def(py::init([](const WeightedGraph& g) { return std::make_shared<SpectralContext>(g); }),
           py::arg("graph"))
      .def_property_readonly("size", &SpectralContext::size)
      .def_property_readonly("lambda1", &SpectralContext::lambda1)
      .def_property_readonly("v0", &SpectralContext::v0)
      .def_property_readonly("graph", &SpectralContext::graph)
      .def("apply_laplacian", &SpectralContext::apply_LN)
      .def("smoothness", &SpectralContext::smoothness);

  m.def(
      "eigenpairs",
      [](const SpectralContext& ctx, Index p) {
        EigenPairs e = smallest_eigenpairs(ctx, p);
        return std::make_pair(e.values, e.vectors);
      },
      py::arg("context"), py::arg("p"),
      "Smallest p eigenvalues and eigenvectors of the normalized Laplacian.");

  py::class_<ClassifierSolution>(m, "Solution")
      .def_readonly("scores", &ClassifierSolution::f_star)
      .def_readonly("param", &ClassifierSolution::param)
      .def_readonly("residual", &ClassifierSolution::residual)
      .def_readonly("iterations", &ClassifierSolution::iterations)
      .def_readonly("warnings", &ClassifierSolution::warnings)
      .def_property_readonly("method",
                             [](const ClassifierSolution& s) { return to_string(s.method); })
      .def("predict", [](const ClassifierSolution& s) { return predict(s); });

  m.def(
      "solve_robust",
      [](const SpectralContext& ctx, const std::vector<int>& y, double gamma) {
        return solve_robust_gc(ctx, to_labels(y), gamma);
      },
      py::arg("context"), py::arg("labels"), py::arg("gamma"));
  m.def(
      "solve_pf_robust",
      [](const SpectralContext& ctx, const std::vector<int>& y, double eta) {
        return solve_pf_robust_gc(ctx, to_labels(y), eta);
      },
      py::arg("context"), py::arg("labels"), py::arg("eta") = 0.9);
  m.def(
      "solve_zhou",
      [](const SpectralContext& ctx, const std::vector<int>& y, double gamma) {
        return solve_zhou_gc(ctx, to_labels(y), gamma);
      },
      py::arg("context"), py::arg("labels"), py::arg("gamma"));
  m.def(
      "solve_belkin",
      [](const SpectralContext& ctx, const std::vector<int>& y, Index p, bool skip_null) {
        if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be at least 1");
        const Index count = p + (skip_null ? 1 : 0);
        if (count > ctx.size()) {
          throw Error(ErrorCode::kPTooLarge, "p exceeds the number of eigenvectors");
        }
        return solve_belk_gc(ctx, to_labels(y), p, smallest_eigenpairs(ctx, count),
                             skip_null ? BelkinBasis::kSkipNullVector
                                       : BelkinBasis::kFromNullVector);
      },
      py::arg("context"), py::arg("labels"), py::arg("p"), py::arg("skip_null") = false);
  m.def("predict", py::overload_cast<const Vector&>(&predict), py::arg("scores"));
  m.def(
      "objective",
      [](const SpectralContext& ctx, const std::vector<int>& y, const Vector& f, double gamma) {
        return robust_objective(ctx, to_labels(y), f, gamma);
      },
      py::arg("context"), py::arg("labels"), py::arg("f"), py::arg("gamma"));
  m.def(
      "condition_bound",
      [](const SpectralContext& ctx, double gamma) {
        return condition_number_bound(ctx, gamma, weights_psd(ctx.graph()));
      },
      py::arg("context"), py::arg("gamma"));

  m.def(
      "sbm",
      [](const std::vector<Index>& sizes, const Matrix& connectivity, std::uint64_t seed,
         std::vector<int> class_map) {
        SbmSpec spec{sizes, connectivity, seed};
        SbmSample s = sbm_generate(spec, std::move(class_map));
        return std::make_tuple(std::move(s.graph), std::move(s.truth), s.seed_used);
      },
      py::arg("block_sizes"), py::arg("connectivity"), py::arg("seed"),
      py::arg("class_map") = std::vector<int>{},
      "Returns (graph, truth, seed_used).");
  m.def(
      "karate_club",
      [] {
        auto k = karate_club();
        return std::make_pair(std::move(k.graph), std::move(k.truth));
      });
  m.def(
      "chain_graph",
      [](Index n_per_side, double weak) {
        auto c = chain_graph(n_per_side, weak);
        return std::make_pair(std::move(c.graph), std::move(c.truth));
      },
      py::arg("n_per_side"), py::arg("weak") = 0.1);
  m.def(
      "moons",
      [](Index n_per_class, double noise, std::uint64_t seed) {
        auto p = moons_generate(n_per_class, noise, seed);
        return std::make_pair(p.points.coords, p.truth);
      },
      py::arg("n_per_class"), py::arg("noise"), py::arg("seed"));
  m.def(
      "sample_labels",
      [](const std::vector<int>& truth, Index count, std::uint64_t seed) {
        return from_labels(sample_labels(truth, count, seed));
      },
      py::arg("truth"), py::arg("count"), py::arg("seed"));
  m.def(
      "flip_labels",
      [](const std::vector<int>& y, double fraction, std::uint64_t seed) {
        return from_labels(flip_labels(to_labels(y), fraction, seed));
      },
      py::arg("labels"), py::arg("fraction"), py::arg("seed"));

  py::class_<OosModel>(m, "OutOfSampleModel")
      .def_static(
          "train",
          [](const Matrix& coords, double sigma, const std::vector<int>& y, double eta,
             bool self_inclusive) {
            return OosModel::train(to_points(coords), KernelSpec{sigma}, to_labels(y), eta,
                                   self_inclusive ? DegreeConvention::kSelfInclusive
                                                  : DegreeConvention::kLiteral);
          },
          py::arg("points"), py::arg("sigma"), py::arg("labels"), py::arg("eta") = 0.9,
          py::arg("self_inclusive") = false)
      .def_property_readonly("gamma", &OosModel::gamma)
      .def_property_readonly("scores", &OosModel::f_star)
      .def("degree", &OosModel::degree, py::arg("x"))
      .def("feasible", &OosModel::feasible, py::arg("x"))
      .def("score", &OosModel::score, py::arg("x"))
      .def(
          "predict",
          [](const OosModel& model, const Matrix& xs) {
            std::vector<int> out;
            out.reserve(static_cast<std::size_t>(xs.rows()));
            for (Index r = 0; r < xs.rows(); ++r) {
              out.push_back(static_cast<int>(model.predict(xs.row(r))));
            }
            return out;
          },
          py::arg("points"), "Labels in {-1, +1}, or 0 where the point is out of range.");

  m.def(
      "load_config",
      [](const std::filesystem::path& path) { return KeyValueConfig::load(path).entries(); },
      py::arg("path"), "Read a key = value config file into (key, value) pairs.");
  m.def(
      "run_experiment",
      [](const std::string& kind, const std::vector<std::pair<std::string, std::string>>& cfg,
         const std::filesystem::path& base_dir, int threads) {
        const KeyValueConfig config = to_config(cfg);
        ExperimentRun run;
        {
          py::gil_scoped_release release;
          if (kind == "noise") {
            run = run_noise_experiment(config, base_dir, threads);
          } else if (kind == "accuracy") {
            run = run_accuracy_experiment(config, base_dir, threads);
          } else {
            throw Error(ErrorCode::kInvalidArgument, "unknown experiment '" + kind + "'");
          }
        }
        return run_to_dict(run);
      },
      py::arg("kind"), py::arg("config"), py::arg("base_dir") = std::filesystem::path{},
      py::arg("threads") = 1,
      "Run the noise or accuracy experiment from key/value pairs.");
}
