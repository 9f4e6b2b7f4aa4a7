// Acceptance runner. One PASS/FAIL line per criterion; `--criterion N` runs a
// single one and sets the exit status from it.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsc/consistency.hpp"
#include "hsc/dataio.hpp"
#include "hsc/geometry.hpp"
#include "hsc/types.hpp"
#include "hsc/metrics.hpp"
#include "hsc/pipelines.hpp"
#include "hsc/rng.hpp"
#include "hsc/spectral.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using hsc::Labels;
using hsc::Matrix;
using hsc::Vector;

namespace {

// Tolerances and budgets.
constexpr std::int64_t kDominationPairs = 1'000'000;
constexpr double kDominationBudgetS = 60.0;
constexpr int kAxiomTriples = 100'000;
constexpr double kSymmetryTol = 1e-12;
constexpr double kTriangleSlack = 1e-9;
constexpr double kDiscFormsTol = 1e-12;
constexpr int kSpectrumDatasets = 100;
constexpr double kSpectrumTol = 1e-8;
constexpr int kNcutGraphs = 50;
constexpr double kNcutTol = 1e-9;
constexpr double kOracleTol = 1e-12;
constexpr int kEigenMatrices = 1000;
constexpr double kEigenValueTol = 1e-9;
constexpr double kEigenAngleTol = 1e-6;
constexpr double kSt900Ari = 0.57;
constexpr double kSt900Nmi = 0.61;
constexpr double kSt900BudgetS = 120.0;
constexpr double k2d20cAri = 0.61;
constexpr double k2d20cBudgetS = 300.0;
constexpr int kTreeSeeds = 20;
constexpr double kRateSlope = -0.35;
constexpr double kRateBudgetS = 300.0;
constexpr int kFourierGrid = 256;
constexpr double kFourierExtent = 1.2;
constexpr int kFourierRotations = 20;
constexpr std::int64_t kL1Samples = 1'000'000;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome kernel_domination() {
  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t violations = 0, checked = 0;
  std::uint64_t seed = 1;
  for (int dim : {2, 5, 10})
    for (double a : {0.5, 1.0, 2.0})
      for (auto kind : {hsc::DominationKernel::Gaussian, hsc::DominationKernel::Poisson}) {
        const auto rep = hsc::check_kernel_domination(dim, kDominationPairs, a, kind, seed++);
        violations += rep.violations;
        checked += rep.samples;
      }
  const double elapsed = seconds_since(t0);
  return {violations == 0 && elapsed < kDominationBudgetS,
          std::to_string(violations) + " violations over " + std::to_string(checked) + " checked pairs, " +
              fmt(elapsed) + " s"};
}

// 2 -------------------------------------------------------------------------

Outcome metric_axioms() {
  hsc::Rng rng(2);
  std::map<std::string, int> failures;
  double worst_sym = 0.0, worst_tri = 0.0, worst_forms = 0.0;
  const double radius = 1.0 - hsc::kTruncationMargin;

  auto check = [&](const std::string& model, auto dist, const Vector& x, const Vector& y, const Vector& z) {
    const double dxy = dist(x, y), dyx = dist(y, x), dyz = dist(y, z), dxz = dist(x, z);
    const double sym = std::abs(dxy - dyx);
    const double tri = dxz - dxy - dyz;
    worst_sym = std::max(worst_sym, sym);
    worst_tri = std::max(worst_tri, tri);
    if (sym > kSymmetryTol || tri > kTriangleSlack || dxy < 0.0 || dist(x, x) != 0.0) ++failures[model];
  };

  for (int t = 0; t < kAxiomTriples; ++t) {
    const int dim = 2 + t % 4;
    const Vector x = rng.uniform_in_ball(dim, radius), y = rng.uniform_in_ball(dim, radius),
                 z = rng.uniform_in_ball(dim, radius);
    check("euclidean", [](const Vector& a, const Vector& b) { return (a - b).norm(); }, x, y, z);
    check("poincare", [](const Vector& a, const Vector& b) { return hsc::dist_disc(a, b); }, x, y, z);
    check("klein", [](const Vector& a, const Vector& b) { return hsc::dist_klein(a, b); }, x, y, z);
    check("hyperboloid", [](const Vector& a, const Vector& b) { return hsc::dist_hyperboloid(a, b); },
          hsc::disc_to_hyperboloid(x), hsc::disc_to_hyperboloid(y), hsc::disc_to_hyperboloid(z));

    auto half_space_point = [&] {
      Vector p(dim);
      for (int i = 0; i + 1 < dim; ++i) p(i) = rng.uniform(-5.0, 5.0);
      p(dim - 1) = std::exp(rng.uniform(std::log(1e-3), std::log(5.0)));
      return p;
    };
    const Vector u = half_space_point(), v = half_space_point(), w = half_space_point();
    check("half-space", [](const Vector& a, const Vector& b) { return hsc::dist_half_space(a, b); }, u, v, w);

    const double forms = std::abs(hsc::dist_disc(x, y) - hsc::dist_disc_cosh(x, y));
    worst_forms = std::max(worst_forms, forms);
    if (forms > kDiscFormsTol) ++failures["disc-forms"];
  }
  int total = 0;
  std::string per_model;
  for (const auto& [name, count] : failures) {
    total += count;
    per_model += " " + name + "=" + std::to_string(count);
  }
  return {total == 0, std::to_string(kAxiomTriples) + " triples x 5 models, failures " + std::to_string(total) +
                          per_model + "; max asymmetry " + fmt(worst_sym) + ", max triangle excess " +
                          fmt(worst_tri) + ", max disc-form gap " + fmt(worst_forms)};
}

// 3 -------------------------------------------------------------------------

int count_components(const Matrix& w) {
  const Eigen::Index n = w.rows();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Eigen::Index> stack{s};
    comp[static_cast<std::size_t>(s)] = count;
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j)
        if (w(i, j) > 0.0 && comp[static_cast<std::size_t>(j)] < 0) {
          comp[static_cast<std::size_t>(j)] = count;
          stack.push_back(j);
        }
    }
    ++count;
  }
  return count;
}

Outcome laplacian_spectrum() {
  hsc::Rng rng(3);
  int failures = 0;
  double lowest = 0.0, highest = 0.0;
  for (int t = 0; t < kSpectrumDatasets; ++t) {
    const int n = 10 + static_cast<int>(rng.index(191));
    const int blobs = 1 + static_cast<int>(rng.index(5));
    Matrix centers(blobs, 2);
    for (int b = 0; b < blobs; ++b) centers.row(b) = 6.0 * rng.normal_vector(2).transpose();
    Matrix p(n, 2);
    for (int i = 0; i < n; ++i) p.row(i) = centers.row(i % blobs) + 0.5 * rng.normal_vector(2).transpose();

    hsc::KernelSpec spec;
    spec.kind = hsc::KernelKind::GaussianEuclidean;
    spec.sigma = 0.3 + rng.uniform();
    spec.epsilon = spec.sigma;  // thresholded graph, kept weights >= exp(-1)
    const Matrix w = hsc::build_affinity(p, spec).entries;
    const Matrix l = hsc::build_laplacian(w).normalized;
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(l, Eigen::EigenvaluesOnly).eigenvalues();
    lowest = std::min(lowest, ev.minCoeff());
    highest = std::max(highest, ev.maxCoeff());
    const int zeros = static_cast<int>((ev.array().abs() <= kSpectrumTol).count());
    const bool ok = ev.minCoeff() >= -kSpectrumTol && ev.maxCoeff() <= 2.0 + kSpectrumTol &&
                    ev.minCoeff() <= kSpectrumTol && zeros == count_components(w);
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(kSpectrumDatasets) + " datasets, " + std::to_string(failures) +
                             " failures; eigenvalue range [" + fmt(lowest) + ", " + fmt(highest) + "]"};
}

// 4 -------------------------------------------------------------------------

Outcome ncut_bound() {
  hsc::Rng rng(4);
  int failures = 0;
  double tightest = 1e300;
  for (int g = 0; g < kNcutGraphs; ++g) {
    const int n = 3 + static_cast<int>(rng.index(8));
    Matrix w = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.6) w(i, j) = w(j, i) = rng.uniform(0.05, 1.0);
    for (int i = 0; i < n; ++i)
      if (w.row(i).sum() == 0.0) {
        const int j = (i + 1) % n;
        w(i, j) = w(j, i) = rng.uniform(0.05, 1.0);
      }
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(hsc::build_laplacian(w).normalized).eigenvalues();
    double best = 1e300;
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
      std::vector<int> side(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n - 1; ++i) side[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      best = std::min(best, hsc::ncut(w, side));
    }
    tightest = std::min(tightest, best - ev(1));
    if (best < ev(1) - kNcutTol) ++failures;
  }
  return {failures == 0, std::to_string(kNcutGraphs) + " graphs, " + std::to_string(failures) +
                             " violations; smallest min-Ncut minus lambda2 " + fmt(tightest)};
}

// 5 -------------------------------------------------------------------------

Outcome label_oracles() {
  std::int64_t pairs = 0, failures = 0;
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const auto all = oracle::all_labelings(n, 3);
    for (const auto& a : all)
      for (const auto& b : all) {
        const double da = std::abs(hsc::ari(a, b) - oracle::ari_pairs(a, b));
        const double dn = std::abs(hsc::nmi(a, b) - oracle::nmi_entropy(a, b));
        worst = std::max({worst, da, dn});
        if (!(da <= kOracleTol && dn <= kOracleTol)) ++failures;
        ++pairs;
      }
  }
  return {failures == 0, std::to_string(pairs) + " labeling pairs, " + std::to_string(failures) +
                             " mismatches; max deviation " + fmt(worst)};
}

// 6 -------------------------------------------------------------------------

Outcome eigensolver_oracle() {
  hsc::Rng rng(6);
  int failures = 0;
  double worst_value = 0.0, worst_angle = 0.0;
  for (int t = 0; t < kEigenMatrices; ++t) {
    const int n = 1 + static_cast<int>(rng.index(12));
    const int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
    const auto [values, vectors] = oracle::jacobi_eigen(a);
    const hsc::SpectralEmbedding e = hsc::smallest_eigenpairs(a, k);
    const double dv = (e.eigenvalues - values.head(k)).cwiseAbs().maxCoeff();
    const double angle = oracle::principal_angle(e.vectors, vectors.leftCols(k));
    worst_value = std::max(worst_value, dv);
    worst_angle = std::max(worst_angle, angle);
    if (!(dv <= kEigenValueTol && angle <= kEigenAngleTol)) ++failures;
  }
  return {failures == 0, std::to_string(kEigenMatrices) + " matrices, " + std::to_string(failures) +
                             " failures; max value error " + fmt(worst_value) + ", max principal angle " +
                             fmt(worst_angle)};
}

// 7, 8 ----------------------------------------------------------------------

std::optional<hsc::EuclideanDataset> find_dataset(const std::string& stem, std::string& where) {
  const fs::path path = fs::path(HSC_DATA_DIR) / (stem + ".csv");
  where = path.string();
  if (!fs::exists(path)) return std::nullopt;
  return hsc::load_csv(path.string());
}

hsc::GridSearchResult grid_search(const hsc::EuclideanDataset& data, hsc::Algorithm algo, int k) {
  hsc::PipelineConfig cfg;
  cfg.algorithm = algo;
  cfg.kernel.kind = hsc::KernelKind::GaussianHyperbolic;
  cfg.k = k;
  return hsc::sigma_grid_search(data.points, *data.labels, cfg);
}

int distinct(const Labels& l) { return static_cast<int>(std::set<int>(l.begin(), l.end()).size()); }

Outcome st900() {
  std::string where;
  const auto data = find_dataset("st900", where);
  if (!data || !data->labels) return {false, "labelled dataset not available at " + where};
  const auto t0 = std::chrono::steady_clock::now();
  const int k = distinct(*data->labels);
  const auto h = grid_search(*data, hsc::Algorithm::HSCA, k);
  const auto e = grid_search(*data, hsc::Algorithm::ESCA, k);
  const double elapsed = seconds_since(t0);
  const auto& hb = h.curve[h.best];
  const auto& eb = e.curve[e.best];
  const bool ok = hb.ari >= kSt900Ari && hb.nmi >= kSt900Nmi && hb.ari > eb.ari && elapsed < kSt900BudgetS;
  return {ok, "HSCA(G) ARI " + fmt(hb.ari) + " NMI " + fmt(hb.nmi) + " (h=" + fmt(hb.hyper) + "), ESCA(G) ARI " +
                  fmt(eb.ari) + ", " + fmt(elapsed) + " s"};
}

Outcome second_dataset() {
  std::string where;
  const auto data = find_dataset("2d-20c-no0", where);
  if (!data || !data->labels) return {false, "labelled dataset not available at " + where};
  const auto t0 = std::chrono::steady_clock::now();
  const auto h = grid_search(*data, hsc::Algorithm::HSCA, 20);
  const double elapsed = seconds_since(t0);
  const auto& hb = h.curve[h.best];
  return {hb.ari >= k2d20cAri && elapsed < k2d20cBudgetS,
          "HSCA(G) ARI " + fmt(hb.ari) + " (h=" + fmt(hb.hyper) + "), " + fmt(elapsed) + " s"};
}

// 9 -------------------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

Outcome tree_hierarchy() {
  std::vector<double> h, e;
  for (int s = 0; s < kTreeSeeds; ++s) {
    hsc::TreeBlobsConfig cfg;
    cfg.depth = 3;
    cfg.branching = 2;
    cfg.scale_decay = 0.3;
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto data = hsc::generate_tree_blobs(cfg);
    const int k = distinct(*data.labels);
    const auto hr = grid_search(data, hsc::Algorithm::HSCA, k);
    const auto er = grid_search(data, hsc::Algorithm::ESCA, k);
    h.push_back(hr.curve[hr.best].ari);
    e.push_back(er.curve[er.best].ari);
  }
  const double mh = median(h), me = median(e);
  return {mh >= me, std::to_string(kTreeSeeds) + " seeds, median ARI HSCA(G) " + fmt(mh) + " vs ESCA(G) " + fmt(me)};
}

// 10 ------------------------------------------------------------------------

Outcome convergence_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  hsc::RateConfig cfg;  // ns 100..1600, 10 trials
  const auto rep = hsc::check_convergence_rate(cfg);
  const double elapsed = seconds_since(t0);
  const double slope = rep.statistics.at("slope");
  std::string devs;
  for (auto n : cfg.ns) devs += " " + fmt(rep.statistics.at("deviation_n" + std::to_string(n)));
  return {slope <= kRateSlope && elapsed < kRateBudgetS,
          "slope " + fmt(slope) + " (r2 " + fmt(rep.statistics.at("r2")) + "), deviations" + devs + ", " +
              fmt(elapsed) + " s"};
}

// 11 ------------------------------------------------------------------------

Outcome fourier() {
  const auto decay = hsc::check_ft_decay(kFourierGrid, kFourierExtent, 1.0, 11);
  const auto radial = hsc::check_radial_ft(kFourierGrid, kFourierExtent, 1.0, kFourierRotations, 11);
  bool l1_ok = true;
  std::string l1;
  for (int dim : {2, 3, 5}) {
    const auto rep = hsc::check_l1_bound(dim, kL1Samples, 1.0, 11 + static_cast<std::uint64_t>(dim));
    l1_ok = l1_ok && rep.passed;
    l1 += " d" + std::to_string(dim) + " " + fmt(rep.statistics.at("estimate")) + "<=" + fmt(rep.statistics.at("bound"));
  }
  return {decay.passed && radial.passed && l1_ok,
          "decay l " + fmt(decay.statistics.at("decay_l")) + " r2 " + fmt(decay.statistics.at("r2")) +
              "; radial max discrepancy " + fmt(radial.statistics.at("max_discrepancy")) + " over " +
              fmt(radial.statistics.at("groups_tested")) + " groups; L1" + l1};
}

// 12 ------------------------------------------------------------------------

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "hsc_acceptance_determinism";
  fs::create_directories(dir);
  Matrix centers(3, 2);
  centers << -4, 0, 4, 0, 0, 6;
  const std::string input = (dir / "blobs.csv").string();
  hsc::save_csv(input, hsc::generate_blobs(40, centers, 1.0, 12));
  int mismatches = 0, runs = 0;
  std::string errors;
  for (std::string algo : {"hsca", "esca", "hlsc-k", "elsc-k", "fhsc", "fesc"})
    for (std::string kernel : {"gaussian", "poisson"}) {
      std::string outputs[2];
      for (int t = 0; t < 2; ++t) {
        const std::string stem = (dir / (algo + "_" + kernel + "_" + std::to_string(t))).string();
        const std::string cmd = std::string(HSC_CLI_PATH) + " cluster --input " + input + " --algo " + algo +
                                " --kernel " + kernel + " --k 3 --sigma 5 --m 30 --seed 7 --labels-out " + stem +
                                ".labels.csv --report-out " + stem + ".json > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
          errors += " " + algo + "/" + kernel;
          break;
        }
        outputs[t] = hsc::read_text_file(stem + ".labels.csv") + hsc::read_text_file(stem + ".json");
      }
      ++runs;
      if (outputs[0].empty() || outputs[0] != outputs[1]) ++mismatches;
    }
  return {mismatches == 0, std::to_string(runs) + " flag sets run twice, " + std::to_string(mismatches) +
                               " differing" + (errors.empty() ? "" : "; failed runs:" + errors)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "kernel domination", kernel_domination},
      {2, "metric axioms", metric_axioms},
      {3, "laplacian spectrum", laplacian_spectrum},
      {4, "ncut relaxation bound", ncut_bound},
      {5, "ari/nmi oracles", label_oracles},
      {6, "eigensolver oracle", eigensolver_oracle},
      {7, "st900 reproduction", st900},
      {8, "2d-20c-no0 reproduction", second_dataset},
      {9, "tree hierarchy advantage", tree_hierarchy},
      {10, "convergence rate", convergence_rate},
      {11, "fourier decay, radiality, L1 bound", fourier},
      {12, "cli determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  bool all_passed = true;
  bool matched = false;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    matched = true;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    all_passed = all_passed && out.passed;
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << out.detail
              << std::endl;
  }
  if (!matched) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return all_passed ? 0 : 1;
}
