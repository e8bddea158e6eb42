// Python bindings for the core operations: loading, spectra, distillation,
// evaluation, and diagnostics. Matrices cross the boundary as numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gdem/diagnostics.hpp"
#include "gdem/distill.hpp"
#include "gdem/evalzoo.hpp"
#include "gdem/graphio.hpp"

namespace py = pybind11;
using namespace gdem;

namespace {

std::vector<bool> mask_to_vector(const std::vector<std::uint8_t>& m) {
  return std::vector<bool>(m.begin(), m.end());
}

std::vector<std::uint8_t> vector_to_mask(const std::vector<bool>& m) {
  return std::vector<std::uint8_t>(m.begin(), m.end());
}

DistillConfig config_from_dict(const py::dict& d) {
  nlohmann::json j;
  for (auto item : d) {
    std::string key = py::cast<std::string>(item.first);
    if (key == "init_features" || key == "ratio_base")
      j[key] = py::cast<std::string>(item.second);
    else if (key == "epochs" || key == "k1" || key == "k2" || key == "tau1" ||
             key == "tau2")
      j[key] = py::cast<long>(item.second);
    else if (key == "seed")
      j[key] = py::cast<std::uint64_t>(item.second);
    else
      j[key] = py::cast<double>(item.second);
  }
  return DistillConfig::from_json(j);
}

}  // namespace

PYBIND11_MODULE(_gdem, m) {
  m.doc() = "Graph distillation by eigenbasis matching";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<RealGraph>(m, "RealGraph")
      .def(py::init([](const Mat& adjacency, const Mat& features,
                       const IVec& labels, int num_classes,
                       const std::vector<bool>& train,
                       const std::vector<bool>& val,
                       const std::vector<bool>& test) {
             RealGraph g;
             g.n = static_cast<int>(adjacency.rows());
             g.num_classes = num_classes;
             g.features = features;
             g.labels = labels;
             g.train_mask = vector_to_mask(train);
             g.val_mask = vector_to_mask(val);
             g.test_mask = vector_to_mask(test);
             std::vector<Eigen::Triplet<double>> trips;
             for (int i = 0; i < g.n; ++i)
               for (int j = 0; j < g.n; ++j)
                 if (i != j && adjacency(i, j) != 0.0)
                   trips.emplace_back(i, j, 1.0);
             g.adjacency.resize(g.n, g.n);
             g.adjacency.setFromTriplets(trips.begin(), trips.end());
             g.validate();
             return g;
           }),
           py::arg("adjacency"), py::arg("features"), py::arg("labels"),
           py::arg("num_classes"), py::arg("train_mask"), py::arg("val_mask"),
           py::arg("test_mask"))
      .def_property_readonly("n", [](const RealGraph& g) { return g.n; })
      .def_property_readonly("num_classes",
                             [](const RealGraph& g) { return g.num_classes; })
      .def_property_readonly("dim", &RealGraph::dim)
      .def_property_readonly(
          "adjacency", [](const RealGraph& g) { return Mat(g.adjacency); })
      .def_property_readonly("features",
                             [](const RealGraph& g) { return g.features; })
      .def_property_readonly("labels",
                             [](const RealGraph& g) { return g.labels; })
      .def_property_readonly(
          "train_mask",
          [](const RealGraph& g) { return mask_to_vector(g.train_mask); })
      .def_property_readonly(
          "val_mask",
          [](const RealGraph& g) { return mask_to_vector(g.val_mask); })
      .def_property_readonly(
          "test_mask",
          [](const RealGraph& g) { return mask_to_vector(g.test_mask); })
      .def("__repr__", [](const RealGraph& g) {
        return "RealGraph(n=" + std::to_string(g.n) +
               ", d=" + std::to_string(g.dim()) +
               ", classes=" + std::to_string(g.num_classes) + ")";
      });

  m.def("load_graph", &load_graph, py::arg("dataset_dir"));
  m.def("save_graph", &save_graph, py::arg("graph"), py::arg("dataset_dir"));
  m.def("extract_lcc", &extract_lcc, py::arg("graph"));
  m.def("normalized_laplacian", &normalized_laplacian, py::arg("graph"));
  m.def("predefine_labels", &predefine_labels, py::arg("graph"),
        py::arg("n_syn"));
  m.def("label_matrix", &label_matrix, py::arg("graph"));

  py::class_<SpectralBasis>(m, "SpectralBasis")
      .def_readonly("eigenvalues", &SpectralBasis::eigenvalues)
      .def_readonly("vectors", &SpectralBasis::vectors)
      .def_readonly("k1", &SpectralBasis::k1)
      .def_readonly("k2", &SpectralBasis::k2);

  m.def(
      "eig_symmetric",
      [](const Mat& l) {
        EigResult r = eig_symmetric(l);
        return py::make_tuple(r.values, r.vectors);
      },
      py::arg("matrix"), "Full symmetric eigendecomposition (ascending).");
  m.def(
      "select_principal_basis",
      [](const Mat& l, int k1, int k2) {
        return select_principal_basis(eig_symmetric(l), k1, k2);
      },
      py::arg("laplacian"), py::arg("k1"), py::arg("k2"));
  m.def(
      "total_variation",
      [](const Mat& l, const Mat& x) {
        TvProfile tv = total_variation(l, x);
        return py::make_tuple(tv.per_dim, tv.average);
      },
      py::arg("laplacian"), py::arg("features"),
      "Per-column total variation and its mean.");

  py::class_<SyntheticGraph>(m, "SyntheticGraph")
      .def_readonly("u_syn", &SyntheticGraph::u_syn)
      .def_readonly("x_syn", &SyntheticGraph::x_syn)
      .def_readonly("y_syn", &SyntheticGraph::y_syn)
      .def_readonly("eigenvalues", &SyntheticGraph::eigenvalues);

  m.def(
      "distill",
      [](const RealGraph& g, const py::dict& config) {
        DistillConfig cfg = config_from_dict(config);
        int n_syn = cfg.n_syn_for(g);
        cfg.validate(n_syn);
        auto [k1, k2] = cfg.resolve_k(n_syn);
        PrecomputedReal pre = precompute_real(g, k1, k2);
        DistillResult res = distill(g, pre, cfg);
        py::list trace;
        for (const TraceRow& row : res.trace)
          trace.append(py::make_tuple(row.epoch, row.l_e, row.l_o, row.l_d,
                                      row.l_total,
                                      std::string(1, row.updated)));
        return py::make_tuple(res.graph, trace);
      },
      py::arg("graph"), py::arg("config"),
      "Run the distillation loop; returns (synthetic_graph, trace).");
  m.def(
      "construct_synthetic",
      [](const SyntheticGraph& syn) {
        ConstructedGraph cg = construct_synthetic(syn);
        return py::make_tuple(cg.a_syn, cg.l_syn);
      },
      py::arg("synthetic"), "Reconstruct (A', L') from the learned basis.");
  m.def("save_synthetic",
        [](const SyntheticGraph& syn, const std::filesystem::path& dir) {
          save_synthetic(syn, {}, dir);
        },
        py::arg("synthetic"), py::arg("dir"));
  m.def("load_synthetic", &load_synthetic, py::arg("dir"));

  m.def(
      "losses",
      [](const RealGraph& g, const SyntheticGraph& syn, int k1, int k2) {
        PrecomputedReal pre = precompute_real(g, k1, k2);
        double le = loss_eigenbasis(pre, syn.u_syn, syn.x_syn);
        double lo = loss_orthogonality(syn.u_syn);
        double ld = loss_discrimination(pre, syn.u_syn, syn.x_syn, syn.y_syn,
                                        syn.eigenvalues);
        return py::make_tuple(le, ld, lo);
      },
      py::arg("graph"), py::arg("synthetic"), py::arg("k1"), py::arg("k2"),
      "Evaluate (L_e, L_d, L_o) for a synthetic graph.");

  m.def(
      "evaluate_models",
      [](const RealGraph& g, const SyntheticGraph& syn,
         const std::vector<std::string>& models, int seeds, int epochs) {
        TrainingGraph tg = training_graph_from(syn);
        std::vector<EvalModelSpec> specs;
        for (const std::string& name : models) {
          EvalModelSpec s = EvalModelSpec::defaults(model_kind_from_string(name));
          if (epochs > 0) s.epochs = epochs;
          specs.push_back(s);
        }
        std::vector<std::uint64_t> seed_list;
        for (int s = 0; s < seeds; ++s) seed_list.push_back(s);
        EvalReport report = cross_architecture_report(tg, g, specs, seed_list);
        py::dict out;
        py::dict per_model;
        for (std::size_t i = 0; i < report.kinds.size(); ++i)
          per_model[py::str(to_string(report.kinds[i]))] =
              py::make_tuple(report.per_model[i].first,
                             report.per_model[i].second);
        out["per_model"] = per_model;
        out["avg"] = report.avg;
        out["std_across_models"] = report.std_across_models;
        out["seeds_per_model"] = report.seeds_per_model;
        return out;
      },
      py::arg("graph"), py::arg("synthetic"), py::arg("models"),
      py::arg("seeds") = 10, py::arg("epochs") = -1,
      "Train the model zoo on the synthetic graph and test on the real one.");

  m.def(
      "random_coreset",
      [](const RealGraph& g, int n_syn, std::uint64_t seed) {
        Coreset cs = random_coreset(g, n_syn, seed);
        return py::make_tuple(cs.nodes, cs.a, cs.x, cs.y);
      },
      py::arg("graph"), py::arg("n_syn"), py::arg("seed") = 0);

  m.def(
      "dominance_profile",
      [](const Mat& laplacian, const std::string& filter, int t) {
        SpectralBasis basis =
            select_principal_basis(eig_symmetric(laplacian),
                                   static_cast<int>(laplacian.rows()), 0);
        FilterSpec f = filter == "highpass" ? FilterSpec::highpass()
                                            : FilterSpec::lowpass();
        DominanceProfile p = dominance_profile(basis, f, t);
        return py::make_tuple(p.eigenvalues, p.coefficients,
                              p.normalized_share);
      },
      py::arg("laplacian"), py::arg("filter") = "lowpass", py::arg("t") = 10);

  m.def(
      "rss_check",
      [](const RealGraph& g, const SyntheticGraph& syn, int k1, int k2) {
        PrecomputedReal pre = precompute_real(g, k1, k2);
        RssReport r = rss_check(pre.basis, normalized_laplacian_sparse(g),
                                g.features, syn);
        py::list cols;
        for (const RssColumn& c : r.per_column)
          cols.append(py::make_tuple(c.real_quad, c.syn_quad, c.gap, c.bound,
                                     c.delta_residual));
        return py::make_tuple(cols, r.epsilon);
      },
      py::arg("graph"), py::arg("synthetic"), py::arg("k1"), py::arg("k2"));

  m.def(
      "tv_compare",
      [](const RealGraph& g, const SyntheticGraph& syn) {
        TvComparison cmp = tv_compare(g, syn);
        return py::make_tuple(cmp.real.average, cmp.synthetic.average,
                              cmp.delta);
      },
      py::arg("graph"), py::arg("synthetic"));
}
