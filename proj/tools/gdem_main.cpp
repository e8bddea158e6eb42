// gdem: distill a small spectral surrogate of a graph, evaluate GNNs
// trained on it against the real graph, and run spectrum diagnostics.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdem/diagnostics.hpp"
#include "gdem/distill.hpp"
#include "gdem/evalzoo.hpp"
#include "gdem/graphio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gdem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start).count();
  }
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void set_threads(int threads) {
  // Must happen before the first BLAS call; fixed thread count keeps
  // results reproducible.
  std::string t = std::to_string(threads);
  setenv("OPENBLAS_NUM_THREADS", t.c_str(), 1);
  setenv("OMP_NUM_THREADS", t.c_str(), 1);
  Eigen::setNbThreads(threads);
}

void write_json_atomic(const fs::path& path, const json& j) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

json make_manifest(const std::string& cmdline, const json& config_echo,
                   std::uint64_t seed, const fs::path& data_dir,
                   double wall_seconds) {
  json m;
  m["command_line"] = cmdline;
  m["config"] = config_echo;
  m["seed"] = seed;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(dataset_checksum(data_dir)));
  m["dataset_checksum"] = buf;
  m["wall_seconds"] = wall_seconds;
  m["tool_version"] = kVersion;
  return m;
}

RealGraph load_data(const fs::path& dir, bool lcc) {
  RealGraph g = load_graph(dir);
  std::cerr << "loaded " << dir.string() << ": N=" << g.n << " d=" << g.dim()
            << " C=" << g.num_classes << "\n";
  if (lcc) {
    g = extract_lcc(g);
    std::cerr << "largest connected component: N=" << g.n << "\n";
  }
  return g;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// ------------------------------------------------------------- distill

int run_distill(const std::string& cmdline, const fs::path& data,
                const fs::path& config_path, const fs::path& out, bool lcc,
                std::int64_t seed_override) {
  Timer timer;
  DistillConfig cfg = DistillConfig::from_json_file(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

  RealGraph g = load_data(data, lcc);
  int n_syn = cfg.n_syn_for(g);
  cfg.validate(n_syn);
  auto [k1, k2] = cfg.resolve_k(n_syn);
  std::cerr << "distilling: n_syn=" << n_syn << " k1=" << k1 << " k2=" << k2
            << " epochs=" << cfg.epochs << " seed=" << cfg.seed << "\n";

  PrecomputedReal pre = precompute_real(g, k1, k2);
  DistillResult res = distill(g, pre, cfg);
  fs::create_directories(out);
  save_synthetic(res.graph, res.trace, out);

  json run = make_manifest(cmdline, cfg.to_json(), cfg.seed, data,
                           timer.seconds());
  run["n_syn"] = n_syn;
  run["resolved_k1"] = k1;
  run["resolved_k2"] = k2;
  run["lcc"] = lcc;
  run["final_loss"] = res.trace.empty() ? 0.0 : res.trace.back().l_total;
  write_json_atomic(out / "run.json", run);

  std::cerr << "distilled in " << format_double(timer.seconds())
            << "s; final total loss "
            << format_double(res.trace.back().l_total) << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

int run_eval(const std::string& cmdline, const fs::path& data,
             const fs::path& synthetic, const std::string& models, int seeds,
             const fs::path& out, bool lcc) {
  Timer timer;
  RealGraph g = load_data(data, lcc);
  SyntheticGraph syn = load_synthetic(synthetic);
  TrainingGraph tg = training_graph_from(syn);

  std::vector<EvalModelSpec> specs;
  for (const std::string& name : split_list(models))
    specs.push_back(EvalModelSpec::defaults(model_kind_from_string(name)));
  std::vector<std::uint64_t> seed_list;
  for (int s = 0; s < seeds; ++s) seed_list.push_back(s);

  EvalReport report = cross_architecture_report(tg, g, specs, seed_list);

  json j;
  j["seeds_per_model"] = report.seeds_per_model;
  j["avg"] = report.avg;
  j["std_across_models"] = report.std_across_models;
  json per_model = json::object();
  for (std::size_t i = 0; i < report.kinds.size(); ++i) {
    per_model[to_string(report.kinds[i])] = {
        {"mean", report.per_model[i].first},
        {"std", report.per_model[i].second}};
  }
  j["per_model"] = per_model;
  json runs = json::array();
  for (const RunRecord& r : report.runs)
    runs.push_back({{"model", to_string(r.kind)},
                    {"seed", r.seed},
                    {"val_acc", r.val_acc},
                    {"test_acc", r.test_acc}});
  j["runs"] = runs;
  j["manifest"] = make_manifest(cmdline, {{"models", models}, {"seeds", seeds}},
                                0, data, timer.seconds());
  fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
  write_json_atomic(out, j);

  for (std::size_t i = 0; i < report.kinds.size(); ++i)
    std::cerr << to_string(report.kinds[i]) << ": "
              << format_double(100.0 * report.per_model[i].first) << " +- "
              << format_double(100.0 * report.per_model[i].second) << "\n";
  std::cerr << "avg " << format_double(100.0 * report.avg) << ", std across models "
            << format_double(100.0 * report.std_across_models) << "\n";
  return 0;
}

// ------------------------------------------------------------------ tv

int run_tv(const std::string& cmdline, const fs::path& data,
           const fs::path& out, bool lcc) {
  Timer timer;
  RealGraph g = load_data(data, lcc);
  TvProfile tv = total_variation(normalized_laplacian_sparse(g), g.features);
  fs::create_directories(out);
  {
    std::ofstream f(out / "tv_profile.csv", std::ios::binary);
    f << "dim,tv\n";
    for (int i = 0; i < tv.per_dim.size(); ++i)
      f << i << ',' << format_double(tv.per_dim(i)) << "\n";
    f << "average," << format_double(tv.average) << "\n";
  }
  write_json_atomic(out / "run.json",
                    make_manifest(cmdline, {{"mode", "tv"}, {"lcc", lcc}}, 0,
                                  data, timer.seconds()));
  std::cerr << "average TV " << format_double(tv.average) << "\n";
  return 0;
}

// ------------------------------------------------------------ diagnose

std::pair<int, int> rss_split(const fs::path& synthetic, int k, int k1_flag,
                              int k2_flag) {
  if (k1_flag >= 0 && k2_flag >= 0) return {k1_flag, k2_flag};
  fs::path run = synthetic / "run.json";
  if (fs::exists(run)) {
    std::ifstream in(run);
    json j;
    in >> j;
    if (j.contains("resolved_k1") && j.contains("resolved_k2"))
      return {j["resolved_k1"].get<int>(), j["resolved_k2"].get<int>()};
  }
  throw ValidationError(
      "cannot infer the k1/k2 split: pass --k1/--k2 or keep run.json next to "
      "the synthetic files");
}

int run_diagnose(const std::string& cmdline, const std::string& mode,
                 const fs::path& data, const fs::path& synthetic,
                 const fs::path& out, const std::string& filter_name, int t,
                 int n_syn, int steps, double lr, std::uint64_t seed, bool lcc,
                 int k1_flag, int k2_flag) {
  Timer timer;
  RealGraph g = load_data(data, lcc);
  fs::create_directories(out);
  json extra;

  if (mode == "dominance") {
    FilterSpec filter = filter_name == "highpass" ? FilterSpec::highpass()
                                                  : FilterSpec::lowpass();
    int k1 = k1_flag >= 0 ? k1_flag : g.n;
    int k2 = k2_flag >= 0 ? k2_flag : 0;
    SpectralBasis basis =
        principal_basis(normalized_laplacian_sparse(g), k1, k2);
    DominanceProfile prof = dominance_profile(basis, filter, t);
    std::ofstream f(out / "dominance.csv", std::ios::binary);
    f << "k,lambda,coef,share\n";
    for (int i = 0; i < prof.eigenvalues.size(); ++i)
      f << i << ',' << format_double(prof.eigenvalues(i)) << ','
        << format_double(prof.coefficients(i)) << ','
        << format_double(prof.normalized_share(i)) << "\n";
    extra = {{"mode", mode}, {"filter", filter_name}, {"t", t}};
  } else if (mode == "bias-toy") {
    FilterKind filter = filter_name == "highpass" ? FilterKind::highpass
                                                  : FilterKind::lowpass;
    ToyOptions opts;
    opts.steps = steps;
    opts.lr = lr;
    opts.seed = seed;
    ToyResult toy = toy_gradient_matching(g, filter, n_syn, opts);
    TvComparison cmp = tv_compare(g, toy.a_syn, toy.x_syn);
    json j;
    j["filter"] = filter_name;
    j["n_syn"] = n_syn;
    j["steps"] = steps;
    j["lr"] = lr;
    j["seed"] = seed;
    j["real_avg_tv"] = cmp.real.average;
    j["synthetic_avg_tv"] = cmp.synthetic.average;
    j["delta"] = cmp.delta;
    j["matching_loss_first"] = toy.loss_trace.front();
    j["matching_loss_final"] = toy.loss_trace.back();
    write_json_atomic(out / "bias_toy.json", j);
    std::cerr << "real TV " << format_double(cmp.real.average) << ", synthetic TV "
              << format_double(cmp.synthetic.average) << "\n";
    extra = j;
  } else if (mode == "tv") {
    SyntheticGraph syn = load_synthetic(synthetic);
    TvComparison cmp = tv_compare(g, syn);
    std::ofstream f(out / "tv_compare.csv", std::ios::binary);
    f << "dim,real_tv,syn_tv\n";
    for (int i = 0; i < cmp.real.per_dim.size(); ++i)
      f << i << ',' << format_double(cmp.real.per_dim(i)) << ','
        << format_double(cmp.synthetic.per_dim(i)) << "\n";
    f << "average," << format_double(cmp.real.average) << ','
      << format_double(cmp.synthetic.average) << "\n";
    std::cerr << "TV real " << format_double(cmp.real.average) << " vs synthetic "
              << format_double(cmp.synthetic.average) << " (delta "
              << format_double(cmp.delta) << ")\n";
    extra = {{"mode", mode}, {"delta", cmp.delta}};
  } else if (mode == "rss") {
    SyntheticGraph syn = load_synthetic(synthetic);
    auto [k1, k2] = rss_split(synthetic, syn.k(), k1_flag, k2_flag);
    if (k1 + k2 != syn.k())
      throw ValidationError("k1+k2 does not match the synthetic basis width");
    SpectralBasis basis =
        principal_basis(normalized_laplacian_sparse(g), k1, k2);
    RssReport report =
        rss_check(basis, normalized_laplacian_sparse(g), g.features, syn);
    std::ofstream f(out / "rss_report.csv", std::ios::binary);
    f << "dim,real_quad,syn_quad,gap,bound,delta_residual\n";
    for (std::size_t i = 0; i < report.per_column.size(); ++i) {
      const RssColumn& c = report.per_column[i];
      f << i << ',' << format_double(c.real_quad) << ','
        << format_double(c.syn_quad) << ',' << format_double(c.gap) << ','
        << format_double(c.bound) << ',' << format_double(c.delta_residual)
        << "\n";
    }
    std::cerr << "restricted spectral approximation epsilon = "
              << format_double(report.epsilon) << "\n";
    extra = {{"mode", mode}, {"epsilon", report.epsilon}};
  } else {
    throw ValidationError("unknown diagnose mode '" + mode + "'");
  }

  write_json_atomic(out / "run.json",
                    make_manifest(cmdline, extra, seed, data, timer.seconds()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph distillation by eigenbasis matching"};
  app.require_subcommand(1);
  std::string cmdline = join_args(argc, argv);

  int threads = 1;
  app.add_option("--threads", threads, "compute threads (default 1)")
      ->capture_default_str();

  // distill
  auto* sc_distill = app.add_subcommand("distill", "distill a synthetic graph");
  fs::path d_data, d_config, d_out;
  bool d_lcc = false;
  std::int64_t d_seed = -1;
  sc_distill->add_option("--data", d_data, "dataset directory")->required();
  sc_distill->add_option("--config", d_config, "distill config JSON")->required();
  sc_distill->add_option("--out", d_out, "output directory")->required();
  sc_distill->add_option("--seed", d_seed, "seed override");
  sc_distill->add_flag("--lcc", d_lcc, "restrict to the largest component");

  // eval
  auto* sc_eval = app.add_subcommand("eval", "train GNNs on a synthetic graph "
                                             "and test on the real one");
  fs::path e_data, e_syn, e_out = "report.json";
  std::string e_models = "sgc,gcn,ppnp,cheby,bern,gpr";
  int e_seeds = 10;
  bool e_lcc = false;
  sc_eval->add_option("--data", e_data, "dataset directory")->required();
  sc_eval->add_option("--synthetic", e_syn, "distill output directory")->required();
  sc_eval->add_option("--models", e_models, "comma-separated model kinds")
      ->capture_default_str();
  sc_eval->add_option("--seeds", e_seeds, "seeds per model")->capture_default_str();
  sc_eval->add_option("--out", e_out, "report path")->capture_default_str();
  sc_eval->add_flag("--lcc", e_lcc, "restrict to the largest component");

  // tv
  auto* sc_tv = app.add_subcommand("tv", "total-variation profile of a dataset");
  fs::path t_data, t_out;
  bool t_lcc = false;
  sc_tv->add_option("--data", t_data, "dataset directory")->required();
  sc_tv->add_option("--out", t_out, "output directory")->required();
  sc_tv->add_flag("--lcc", t_lcc, "restrict to the largest component");

  // diagnose
  auto* sc_diag = app.add_subcommand("diagnose", "spectrum-bias, TV and RSS "
                                                 "diagnostics");
  fs::path g_data, g_syn, g_out;
  std::string g_mode, g_filter = "lowpass";
  int g_t = 10, g_nsyn = 64, g_steps = 300, g_k1 = -1, g_k2 = -1;
  double g_lr = 0.05;
  std::uint64_t g_seed = 0;
  bool g_lcc = false;
  sc_diag->add_option("--mode", g_mode, "dominance|bias-toy|tv|rss")->required();
  sc_diag->add_option("--data", g_data, "dataset directory")->required();
  sc_diag->add_option("--synthetic", g_syn, "distill output directory (tv/rss)");
  sc_diag->add_option("--out", g_out, "output directory")->required();
  sc_diag->add_option("--filter", g_filter, "lowpass|highpass")
      ->capture_default_str();
  sc_diag->add_option("--t", g_t, "filter power")->capture_default_str();
  sc_diag->add_option("--n-syn", g_nsyn, "toy synthetic size")
      ->capture_default_str();
  sc_diag->add_option("--steps", g_steps, "toy optimization steps")
      ->capture_default_str();
  sc_diag->add_option("--lr", g_lr, "toy learning rate")->capture_default_str();
  sc_diag->add_option("--seed", g_seed, "rng seed")->capture_default_str();
  sc_diag->add_option("--k1", g_k1, "low-end basis size");
  sc_diag->add_option("--k2", g_k2, "high-end basis size");
  sc_diag->add_flag("--lcc", g_lcc, "restrict to the largest component");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  set_threads(threads);
  try {
    if (sc_distill->parsed())
      return run_distill(cmdline, d_data, d_config, d_out, d_lcc, d_seed);
    if (sc_eval->parsed())
      return run_eval(cmdline, e_data, e_syn, e_models, e_seeds, e_out, e_lcc);
    if (sc_tv->parsed()) return run_tv(cmdline, t_data, t_out, t_lcc);
    if (sc_diag->parsed())
      return run_diagnose(cmdline, g_mode, g_data, g_syn, g_out, g_filter, g_t,
                          g_nsyn, g_steps, g_lr, g_seed, g_lcc, g_k1, g_k2);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
