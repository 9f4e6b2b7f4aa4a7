#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "hsc/consistency.hpp"
#include "hsc/dataio.hpp"
#include "hsc/error.hpp"
#include "hsc/metrics.hpp"
#include "hsc/pipelines.hpp"
#include "hsc/report.hpp"

namespace hsc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return kExitUsage;
    case ErrorKind::Domain:
    case ErrorKind::Parse:
    case ErrorKind::Io: return kExitData;
    default: return kExitNumeric;
  }
}

double parse_epsilon(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0)) fail(ErrorKind::InvalidInput, "--epsilon must be a positive number or 'inf', got '" + text + "'");
  return v;
}

KernelKind kernel_kind(const std::string& name) {
  if (name == "gaussian") return KernelKind::GaussianHyperbolic;
  if (name == "poisson") return KernelKind::PoissonHyperbolic;
  fail(ErrorKind::InvalidInput, "--kernel must be 'gaussian' or 'poisson'");
}

const char* kernel_letter(const std::string& name) { return name == "gaussian" ? "G" : "P"; }

Metric parse_space(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "hyperbolic" || name == "poincare") return Metric::PoincareDisc;
  fail(ErrorKind::InvalidInput, "--space must be 'euclidean' or 'hyperbolic'");
}

int count_distinct(const Labels& labels) { return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size()); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Metrics for a finished run: extrinsic against `truth` when given, intrinsic in
// the geometry the algorithm clustered in.
EvaluationReport run_metrics(const Matrix& input, const PipelineResult& result, bool hyperbolic, const Labels* truth) {
  const Matrix& pts = hyperbolic ? result.embedded_points : input;
  try {
    return evaluate(pts, result.clustering.labels, truth, hyperbolic ? Metric::PoincareDisc : Metric::Euclidean);
  } catch (const Error& e) {
    EvaluationReport r;
    r.space = hyperbolic ? Metric::PoincareDisc : Metric::Euclidean;
    if (truth) {
      r.ari = ari(result.clustering.labels, *truth);
      r.nmi = nmi(result.clustering.labels, *truth);
    }
    r.flags.push_back(std::string("intrinsic-metrics-failed: ") + e.what());
    return r;
  }
}

struct ClusterOptions {
  std::string input;
  std::string algo = "hsca";
  std::string kernel = "gaussian";
  int k = 0;
  double sigma = 0.1;
  std::optional<double> sigma2;
  std::string epsilon = "inf";
  double delta = 0.01;
  std::optional<int> m;
  std::uint64_t seed = 42;
  std::string labels_out;
  std::string report_out;
  std::string label_column;
  bool zscore = false;
  bool timings = false;
  bool landmark_fast = false;
  bool no_metrics = false;
};

PipelineConfig make_config(const std::string& algo, const std::string& kernel, int k, double sigma,
                           std::optional<double> sigma2, double epsilon, double delta, std::optional<int> m,
                           std::uint64_t seed, bool landmark_fast) {
  const auto algorithm = parse_algorithm(algo);
  if (!algorithm) fail(ErrorKind::InvalidInput, "--algo must be one of hsca, esca, hlsc-k, elsc-k, fhsc, fesc");
  PipelineConfig cfg;
  cfg.algorithm = *algorithm;
  cfg.kernel.kind = kernel_kind(kernel);
  cfg.kernel.sigma = sigma;
  cfg.kernel.epsilon = epsilon;
  cfg.k = k;
  cfg.m = m;
  cfg.sigma2 = sigma2;
  cfg.delta = delta;
  cfg.seed = seed;
  cfg.landmark_fast = landmark_fast;
  return cfg;
}

EuclideanDataset load_input(const std::string& path, const std::string& label_column, bool standardise) {
  EuclideanDataset data = load_csv(path, label_column.empty() ? std::nullopt : std::optional<std::string>(label_column));
  if (data.dropped_rows > 0)
    std::cerr << "note: dropped " << data.dropped_rows << " row(s) with missing values from " << path << "\n";
  if (standardise) data.points = zscore(data.points);
  return data;
}

int cmd_cluster(const ClusterOptions& o) {
  const PipelineConfig cfg = make_config(o.algo, o.kernel, o.k, o.sigma, o.sigma2, parse_epsilon(o.epsilon), o.delta,
                                         o.m, o.seed, o.landmark_fast);
  const EuclideanDataset data = load_input(o.input, o.label_column, o.zscore);
  if (o.k > data.size())
    fail(ErrorKind::InvalidInput, "--k " + std::to_string(o.k) + " exceeds the number of points " + std::to_string(data.size()));
  const PipelineResult result = run_pipeline(data.points, cfg);

  RunReport report = make_run_report(cfg, result, data.name, data.size(), data.dim(), o.timings);
  if (!o.no_metrics)
    report.metrics = run_metrics(data.points, result, is_hyperbolic(cfg.algorithm), data.labels ? &*data.labels : nullptr);
  if (!o.labels_out.empty()) save_labels(o.labels_out, result.clustering.labels);
  const json j = to_json(report);
  if (!o.report_out.empty()) save_report(o.report_out, j);
  if (o.labels_out.empty() && o.report_out.empty()) std::cout << dump_json(j);
  return 0;
}

struct EvaluateOptions {
  std::string points;
  std::string labels;
  std::string truth;
  std::string space = "euclidean";
  std::string output;
  bool embed = false;
  double delta = 0.01;
};

int cmd_evaluate(const EvaluateOptions& o) {
  const Metric space = parse_space(o.space);
  EuclideanDataset data = load_csv(o.points);
  if (o.embed) data.points = embed_rows(data.points, o.delta);
  const Labels labels = load_labels(o.labels);
  if (static_cast<Index>(labels.size()) != data.size())
    fail(ErrorKind::InvalidInput, "--labels has " + std::to_string(labels.size()) + " rows but --points has " +
                                      std::to_string(data.size()));
  std::optional<Labels> truth;
  if (!o.truth.empty()) {
    truth = load_labels(o.truth);
    if (truth->size() != labels.size()) fail(ErrorKind::InvalidInput, "--truth and --labels differ in length");
  }
  const EvaluationReport r = evaluate(data.points, labels, truth ? &*truth : nullptr, space);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["points"] = data.name;
  j["n"] = data.size();
  j["metrics"] = to_json(r);
  std::cout << dump_json(j);
  if (!o.output.empty()) save_report(o.output, j);
  return 0;
}

struct BenchOptions {
  std::string datasets_dir;
  std::string suite = "extrinsic";
  std::string output;
  std::string datasets;
  std::string algos = "hsca,esca,hlsc-k,elsc-k,fhsc,fesc";
  std::string kernels = "gaussian";
  double sigma = 0.1;
  bool grid_search = false;
  std::optional<int> k;
  std::optional<Index> subsample;
  std::uint64_t seed = 42;
  bool zscore = false;
};

std::string cell_name(const std::string& algo, const std::string& kernel) {
  std::string upper;
  for (char c : algo) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return upper + "(" + kernel_letter(kernel) + ")";
}

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << *v;
  return os.str();
}

int cmd_bench(const BenchOptions& o) {
  if (o.suite != "extrinsic" && o.suite != "intrinsic" && o.suite != "ablation")
    fail(ErrorKind::InvalidInput, "--suite must be extrinsic, intrinsic or ablation");
  if (!fs::is_directory(o.datasets_dir)) fail(ErrorKind::Io, "--datasets-dir '" + o.datasets_dir + "' is not a directory");
  const std::vector<std::string> algos = split_list(o.algos);
  const std::vector<std::string> kernels = split_list(o.kernels);
  for (const auto& a : algos)
    if (!parse_algorithm(a)) fail(ErrorKind::InvalidInput, "unknown algorithm in --algos: " + a);
  for (const auto& k : kernels) kernel_kind(k);

  std::vector<fs::path> files;
  const std::vector<std::string> wanted = split_list(o.datasets);
  for (const auto& entry : fs::directory_iterator(o.datasets_dir))
    if (entry.path().extension() == ".csv") {
      const std::string stem = entry.path().stem().string();
      if (wanted.empty() || std::find(wanted.begin(), wanted.end(), stem) != wanted.end()) files.push_back(entry.path());
    }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorKind::Io, "no matching CSV datasets in '" + o.datasets_dir + "'");

  const fs::path out_dir = o.output.empty() ? fs::path("bench-out") : fs::path(o.output);
  fs::create_directories(out_dir);

  std::vector<std::string> dataset_names;
  std::map<std::string, std::map<std::string, EvaluationReport>> table;  // cell -> dataset -> metrics
  std::map<std::string, std::map<std::string, std::string>> errors;
  std::ostringstream curves;
  curves << "dataset,kernel,hyperparameter,sigma,ari,nmi,error\n";

  for (const fs::path& file : files) {
    EuclideanDataset data = load_input(file.string(), "", o.zscore);
    if (o.subsample) data = reservoir_subsample(data, *o.subsample, derive_seed(o.seed, 7));
    const bool needs_truth = o.suite != "intrinsic";
    if (needs_truth && !data.labels) {
      std::cerr << "skip " << data.name << ": no label column\n";
      continue;
    }
    const int k = o.k ? *o.k : (data.labels ? count_distinct(*data.labels) : 0);
    if (k < 1) {
      std::cerr << "skip " << data.name << ": no labels, pass --k\n";
      continue;
    }
    dataset_names.push_back(data.name);
    const Labels* truth = data.labels ? &*data.labels : nullptr;

    if (o.suite == "ablation") {
      for (const auto& kernel : kernels) {
        const PipelineConfig cfg = make_config("hsca", kernel, k, o.sigma, std::nullopt,
                                               std::numeric_limits<double>::infinity(), 0.01, std::nullopt, o.seed, false);
        const GridSearchResult g = sigma_grid_search(data.points, *truth, cfg);
        for (const GridPoint& p : g.curve)
          curves << data.name << ',' << kernel << ',' << p.hyper << ',' << p.sigma << ',' << csv_number(p.ari) << ','
                 << csv_number(p.nmi) << ',' << (p.error.empty() ? "" : "failed") << '\n';
        PipelineConfig best_cfg = cfg;
        best_cfg.kernel.sigma = g.curve[g.best].sigma;
        best_cfg.sigma2 = g.curve[g.best].sigma;
        RunReport rep = make_run_report(best_cfg, g.best_run, data.name, data.size(), data.dim(), false);
        rep.sigma_source = "grid-search";
        rep.metrics = run_metrics(data.points, g.best_run, true, truth);
        save_report((out_dir / (data.name + "__hsca__" + kernel + ".json")).string(), to_json(rep));
        table[cell_name("hsca", kernel)][data.name] = *rep.metrics;
      }
      continue;
    }

    for (const auto& algo : algos)
      for (const auto& kernel : kernels) {
        const std::string cell = cell_name(algo, kernel);
        PipelineConfig cfg = make_config(algo, kernel, k, o.sigma, std::nullopt, std::numeric_limits<double>::infinity(),
                                         0.01, std::nullopt, o.seed, false);
        try {
          PipelineResult result;
          std::string source = "flag";
          if (o.grid_search && truth) {
            GridSearchResult g = sigma_grid_search(data.points, *truth, cfg);
            cfg.kernel.sigma = g.curve[g.best].sigma;
            cfg.sigma2 = g.curve[g.best].sigma;
            result = std::move(g.best_run);
            source = "grid-search";
          } else {
            result = run_pipeline(data.points, cfg);
          }
          RunReport rep = make_run_report(cfg, result, data.name, data.size(), data.dim(), false);
          rep.sigma_source = source;
          rep.metrics = run_metrics(data.points, result, is_hyperbolic(cfg.algorithm), truth);
          save_report((out_dir / (data.name + "__" + algo + "__" + kernel + ".json")).string(), to_json(rep));
          table[cell][data.name] = *rep.metrics;
        } catch (const Error& e) {
          errors[cell][data.name] = e.what();
          std::cerr << data.name << ' ' << cell << ": " << e.what() << "\n";
        }
      }
  }

  // summary: one row per algorithm(kernel), metric columns per dataset
  const std::vector<std::string> metric_names = o.suite == "intrinsic"
                                                    ? std::vector<std::string>{"S", "DB", "CH"}
                                                    : std::vector<std::string>{"ARI", "NMI"};
  std::ostringstream summary;
  summary << "method";
  for (const auto& ds : dataset_names)
    for (const auto& m : metric_names) summary << ',' << ds << ' ' << m;
  summary << '\n';
  std::vector<std::string> rows;
  if (o.suite == "ablation") {
    for (const auto& kernel : kernels) rows.push_back(cell_name("hsca", kernel));
  } else {
    for (const auto& algo : algos)
      for (const auto& kernel : kernels) rows.push_back(cell_name(algo, kernel));
  }
  for (const auto& row : rows) {
    summary << row;
    for (const auto& ds : dataset_names) {
      const auto it = table[row].find(ds);
      for (const auto& m : metric_names) {
        summary << ',';
        if (it == table[row].end()) continue;
        const EvaluationReport& r = it->second;
        if (m == "ARI") summary << csv_number(r.ari);
        else if (m == "NMI") summary << csv_number(r.nmi);
        else if (m == "S") summary << csv_number(r.silhouette);
        else if (m == "DB") summary << csv_number(r.davies_bouldin);
        else summary << csv_number(r.calinski_harabasz);
      }
    }
    summary << '\n';
  }
  write_text_file((out_dir / "summary.csv").string(), summary.str());
  if (o.suite == "ablation") write_text_file((out_dir / "ablation.csv").string(), curves.str());
  std::cout << summary.str();
  return 0;
}

struct ConsistencyOptions {
  std::string check;
  std::uint64_t seed = 42;
  std::string output;
  int dim = 2;
  double a = 1.0;
  std::int64_t samples = 0;
  std::string kernel = "gaussian";
  int grid_size = 256;
  double extent = 1.2;
  int rotations = 20;
  std::string ns = "100,200,400,800,1600";
  int trials = 10;
  int k = 5;
  std::string distribution = "mixture";
};

int cmd_consistency(const ConsistencyOptions& o) {
  ConsistencyReport rep;
  if (o.check == "lemma51") {
    const DominationKernel kind = o.kernel == "poisson" ? DominationKernel::Poisson : DominationKernel::Gaussian;
    if (o.kernel != "gaussian" && o.kernel != "poisson") fail(ErrorKind::InvalidInput, "--kernel must be gaussian or poisson");
    rep = check_kernel_domination(o.dim, o.samples > 0 ? o.samples : 1000000, o.a, kind, o.seed);
  } else if (o.check == "lemma52") {
    rep = check_l1_bound(o.dim, o.samples > 0 ? o.samples : 1000000, o.a, o.seed);
  } else if (o.check == "lemma53") {
    rep = check_radial_ft(o.grid_size, o.extent, o.a, o.rotations, o.seed);
  } else if (o.check == "lemma54") {
    rep = check_ft_decay(o.grid_size, o.extent, o.a, o.seed);
  } else if (o.check == "rate") {
    RateConfig cfg;
    cfg.ns.clear();
    for (const auto& s : split_list(o.ns)) {
      try {
        cfg.ns.push_back(std::stol(s));
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "--ns must be a comma-separated list of integers");
      }
    }
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.k = o.k;
    cfg.a = o.a;
    cfg.dim = o.dim;
    if (o.distribution == "mixture") cfg.distribution = SampleDistribution::BlobMixture;
    else if (o.distribution == "uniform") cfg.distribution = SampleDistribution::UniformH;
    else fail(ErrorKind::InvalidInput, "--distribution must be mixture or uniform");
    rep = check_convergence_rate(cfg);
  } else {
    fail(ErrorKind::InvalidInput, "--check must be one of lemma51, lemma52, lemma53, lemma54, rate");
  }
  const json j = to_json(rep);
  std::cout << dump_json(j);
  if (!o.output.empty()) save_report(o.output, j);
  return rep.passed ? 0 : kExitFailedCheck;
}

struct GenerateOptions {
  std::string kind = "blobs";
  std::string output;
  int n_per_cluster = 50;
  std::string centers = "0,0;5,5";
  double spread = 0.5;
  int depth = 3;
  int branching = 2;
  double scale_decay = 0.3;
  int dim = 2;
  std::uint64_t seed = 42;
};

Matrix parse_centers(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<double> values;
    for (const auto& cell : split_list(row)) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "--centers must look like 'x,y;x,y'");
      }
    }
    if (!values.empty()) rows.push_back(values);
  }
  if (rows.empty()) fail(ErrorKind::InvalidInput, "--centers is empty");
  Matrix c(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) fail(ErrorKind::InvalidInput, "--centers rows differ in dimension");
    for (std::size_t col = 0; col < rows[r].size(); ++col) c(static_cast<Index>(r), static_cast<Index>(col)) = rows[r][col];
  }
  return c;
}

int cmd_generate(const GenerateOptions& o) {
  EuclideanDataset data;
  if (o.kind == "blobs") {
    data = generate_blobs(o.n_per_cluster, parse_centers(o.centers), o.spread, o.seed);
  } else if (o.kind == "tree") {
    TreeBlobsConfig cfg;
    cfg.depth = o.depth;
    cfg.branching = o.branching;
    cfg.scale_decay = o.scale_decay;
    cfg.n_leaf = o.n_per_cluster;
    cfg.dim = o.dim;
    cfg.seed = o.seed;
    data = generate_tree_blobs(cfg);
  } else {
    fail(ErrorKind::InvalidInput, "--kind must be blobs or tree");
  }
  save_csv(o.output, data);
  return 0;
}

struct PlotOptions {
  std::string points;
  std::string labels;
  std::string output;
  std::string title;
};

int cmd_plot(const PlotOptions& o) {
  const EuclideanDataset data = load_csv(o.points);
  const Labels labels = load_labels(o.labels);
  if (static_cast<Index>(labels.size()) != data.size())
    fail(ErrorKind::InvalidInput, "--labels has " + std::to_string(labels.size()) + " rows but --points has " +
                                      std::to_string(data.size()));
  write_text_file(o.output, scatter_svg(data.points, labels, o.title.empty() ? data.name : o.title));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Hyperbolic spectral clustering toolkit"};
  app.name(args.empty() ? "hsc" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  ClusterOptions co;
  auto* cluster = app.add_subcommand("cluster", "Cluster a CSV dataset");
  cluster->add_option("--input", co.input, "Input CSV with a header row")->required();
  cluster->add_option("--algo", co.algo, "hsca | esca | hlsc-k | elsc-k | fhsc | fesc");
  cluster->add_option("--kernel", co.kernel, "gaussian | poisson");
  cluster->add_option("--k", co.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--sigma", co.sigma, "Kernel bandwidth")->check(CLI::PositiveNumber);
  cluster->add_option("--sigma2", co.sigma2, "Bandwidth of the modified affinity (default: --sigma)")->check(CLI::PositiveNumber);
  cluster->add_option("--epsilon", co.epsilon, "Distance cutoff, or inf");
  cluster->add_option("--delta", co.delta, "Embedding margin")->check(CLI::PositiveNumber);
  cluster->add_option("--m", co.m, "Landmarks / pre-clusters")->check(CLI::PositiveNumber);
  cluster->add_option("--seed", co.seed, "Random seed");
  cluster->add_option("--labels-out", co.labels_out, "Labels CSV to write");
  cluster->add_option("--report-out", co.report_out, "RunReport JSON to write");
  cluster->add_option("--label-column", co.label_column, "Ground-truth column (default: 'label' if present)");
  cluster->add_flag("--zscore", co.zscore, "Standardise columns first");
  cluster->add_flag("--timings", co.timings, "Include stage timings in the report (not reproducible)");
  cluster->add_flag("--landmark-fast", co.landmark_fast, "hlsc-k/elsc-k: singular vectors of Z instead of the N x N problem");
  cluster->add_flag("--no-metrics", co.no_metrics, "Skip the metric evaluation");

  EvaluateOptions eo;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a labeling");
  evaluate_cmd->add_option("--points", eo.points, "Points CSV")->required();
  evaluate_cmd->add_option("--labels", eo.labels, "Labels CSV")->required();
  evaluate_cmd->add_option("--truth", eo.truth, "Ground-truth labels CSV");
  evaluate_cmd->add_option("--space", eo.space, "euclidean | hyperbolic");
  evaluate_cmd->add_option("--output", eo.output, "EvaluationReport JSON to write");
  evaluate_cmd->add_flag("--embed", eo.embed, "Embed the points into the disc before scoring");
  evaluate_cmd->add_option("--delta", eo.delta, "Embedding margin for --embed")->check(CLI::PositiveNumber);

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Run the benchmark suites over a directory of CSV files");
  bench->add_option("--datasets-dir", bo.datasets_dir, "Directory of CSV datasets")->required();
  bench->add_option("--suite", bo.suite, "extrinsic | intrinsic | ablation");
  bench->add_option("--output", bo.output, "Output directory (default bench-out)");
  bench->add_option("--datasets", bo.datasets, "Comma-separated dataset names (file stems)");
  bench->add_option("--algos", bo.algos, "Comma-separated algorithms");
  bench->add_option("--kernels", bo.kernels, "Comma-separated kernels");
  bench->add_option("--sigma", bo.sigma, "Kernel bandwidth")->check(CLI::PositiveNumber);
  bench->add_flag("--grid-search", bo.grid_search, "Pick sigma per cell by grid search against the labels");
  bench->add_option("--k", bo.k, "Clusters for unlabeled datasets")->check(CLI::PositiveNumber);
  bench->add_option("--subsample", bo.subsample, "Reservoir-subsample each dataset to this size")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bo.seed, "Random seed");
  bench->add_flag("--zscore", bo.zscore, "Standardise columns first");

  ConsistencyOptions so;
  auto* consistency = app.add_subcommand("consistency", "Numerical consistency checks");
  consistency->add_option("--check", so.check, "lemma51 | lemma52 | lemma53 | lemma54 | rate")->required();
  consistency->add_option("--seed", so.seed, "Random seed");
  consistency->add_option("--output", so.output, "ConsistencyReport JSON to write");
  consistency->add_option("--dim", so.dim, "Dimension")->check(CLI::PositiveNumber);
  consistency->add_option("--a", so.a, "Kernel parameter a")->check(CLI::PositiveNumber);
  consistency->add_option("--samples", so.samples, "Monte Carlo samples / pairs")->check(CLI::PositiveNumber);
  consistency->add_option("--kernel", so.kernel, "lemma51: gaussian | poisson");
  consistency->add_option("--grid-size", so.grid_size, "Fourier grid size")->check(CLI::PositiveNumber);
  consistency->add_option("--extent", so.extent, "Fourier grid half-width")->check(CLI::PositiveNumber);
  consistency->add_option("--rotations", so.rotations, "Equal-modulus groups compared")->check(CLI::PositiveNumber);
  consistency->add_option("--ns", so.ns, "Comma-separated sample sizes for rate");
  consistency->add_option("--trials", so.trials, "Trials per sample size for rate")->check(CLI::PositiveNumber);
  consistency->add_option("--k", so.k, "Eigenvalues compared for rate")->check(CLI::PositiveNumber);
  consistency->add_option("--distribution", so.distribution, "rate: mixture | uniform");

  GenerateOptions go;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--kind", go.kind, "blobs | tree");
  generate->add_option("--output", go.output, "CSV to write")->required();
  generate->add_option("--n-per-cluster", go.n_per_cluster, "Points per blob / leaf")->check(CLI::PositiveNumber);
  generate->add_option("--centers", go.centers, "blobs: centres as 'x,y;x,y'");
  generate->add_option("--spread", go.spread, "blobs: standard deviation")->check(CLI::NonNegativeNumber);
  generate->add_option("--depth", go.depth, "tree: depth")->check(CLI::PositiveNumber);
  generate->add_option("--branching", go.branching, "tree: children per node")->check(CLI::PositiveNumber);
  generate->add_option("--scale-decay", go.scale_decay, "tree: offset ratio between levels");
  generate->add_option("--dim", go.dim, "tree: dimension")->check(CLI::PositiveNumber);
  generate->add_option("--seed", go.seed, "Random seed");

  PlotOptions po;
  auto* plot = app.add_subcommand("plot", "Scatter plot of a labeling as SVG");
  plot->add_option("--points", po.points, "Points CSV")->required();
  plot->add_option("--labels", po.labels, "Labels CSV")->required();
  plot->add_option("--output", po.output, "SVG to write")->required();
  plot->add_option("--title", po.title, "Plot title");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: kind=invalid-flags: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (cluster->parsed()) return cmd_cluster(co);
    if (evaluate_cmd->parsed()) return cmd_evaluate(eo);
    if (bench->parsed()) return cmd_bench(bo);
    if (consistency->parsed()) return cmd_consistency(so);
    if (generate->parsed()) return cmd_generate(go);
    if (plot->parsed()) return cmd_plot(po);
  } catch (const Error& e) {
    std::cerr << "error: kind=" << to_string(e.kind());
    if (!e.stage().empty()) std::cerr << " stage=" << e.stage();
    std::cerr << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: kind=io: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace hsc::cli
