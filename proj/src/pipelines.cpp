#include "hsc/pipelines.hpp"

#include <chrono>
#include <cmath>

#include "hsc/geometry.hpp"
#include "hsc/metrics.hpp"

namespace hsc {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::HSCA: return "hsca";
    case Algorithm::ESCA: return "esca";
    case Algorithm::HLSCK: return "hlsc-k";
    case Algorithm::ELSCK: return "elsc-k";
    case Algorithm::FHSC: return "fhsc";
    case Algorithm::FESC: return "fesc";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::HSCA, Algorithm::ESCA, Algorithm::HLSCK, Algorithm::ELSCK, Algorithm::FHSC, Algorithm::FESC})
    if (name == to_string(a)) return a;
  return std::nullopt;
}

bool is_hyperbolic(Algorithm a) { return a == Algorithm::HSCA || a == Algorithm::HLSCK || a == Algorithm::FHSC; }

bool uses_landmarks(Algorithm a) { return a != Algorithm::HSCA && a != Algorithm::ESCA; }

int PipelineConfig::resolved_m(Index n) const {
  if (m) return *m;
  return static_cast<int>(std::min<Index>(n, std::max(10 * k, 100)));
}

void PipelineConfig::validate(Index n) const {
  kernel.validate();
  if (k < 1) fail(ErrorKind::InvalidInput, "k must be >= 1");
  if (n < k) fail(ErrorKind::InvalidInput, "k = " + std::to_string(k) + " exceeds the number of points " + std::to_string(n));
  if (n < 2) fail(ErrorKind::InvalidInput, "need at least 2 points");
  if (!(resolved_sigma2() > 0.0) || !std::isfinite(resolved_sigma2())) fail(ErrorKind::InvalidInput, "sigma2 must be positive");
  if (is_hyperbolic(algorithm) && !(delta > 0.0)) fail(ErrorKind::InvalidInput, "delta must be positive");
  if (uses_landmarks(algorithm)) {
    const int mm = resolved_m(n);
    if (mm < k || mm > n)
      fail(ErrorKind::InvalidInput, "m = " + std::to_string(mm) + " must satisfy k <= m <= N (k = " + std::to_string(k) +
                                        ", N = " + std::to_string(n) + ")");
  }
}

Matrix embed_rows(const Matrix& points, double delta) {
  Matrix out(points.rows(), points.cols());
  for (Index i = 0; i < points.rows(); ++i) out.row(i) = embed_to_disc(points.row(i).transpose(), delta).transpose();
  return out;
}

namespace {

class StageRunner {
 public:
  explicit StageRunner(PipelineResult& result) : result_(result) {}

  template <class F>
  auto operator()(const char* stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record(stage, start);
      } else {
        auto value = body();
        record(stage, start);
        return value;
      }
    } catch (const Error& e) {
      if (!e.stage().empty()) throw;
      throw Error(e.kind(), std::string("stage '") + stage + "': " + e.what(), stage);
    }
  }

 private:
  void record(const char* stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    result_.timings.push_back({stage, ms.count()});
  }

  PipelineResult& result_;
};

KMeansConfig stage_kmeans(const PipelineConfig& cfg, int k, Metric metric, std::uint64_t stream) {
  KMeansConfig km = cfg.kmeans;
  km.k = k;
  km.metric = metric;
  km.seed = derive_seed(cfg.seed, stream);
  return km;
}

// Steps 3 to 9 of the spectral algorithm, starting from an affinity matrix.
void spectral_tail(const AffinityMatrix& w, const PipelineConfig& cfg, StageRunner& stage, PipelineResult& r) {
  const AffinityMatrix wp = stage("modified_affinity", [&] { return build_modified_affinity(w, cfg.resolved_sigma2()); });
  const LaplacianBundle lap = stage("laplacian", [&] { return build_laplacian(wp); });
  r.spectral_size = wp.size();
  r.embedding = stage("eigen", [&] { return smallest_eigenpairs(lap.normalized, cfg.k); });
  stage("row_normalize", [&] {
    for (Index z : r.embedding.zero_rows) raise_flag(&r.flags, "zero-spectral-row:" + std::to_string(z));
  });
  r.clustering = stage("kmeans", [&] { return kmeans(r.embedding.rows, stage_kmeans(cfg, cfg.k, Metric::Euclidean, 2)); });
}

PipelineResult run_full(const Matrix& points, const PipelineConfig& cfg, bool hyperbolic) {
  PipelineResult r;
  r.kernel = cfg.kernel.with_geometry(hyperbolic);
  StageRunner stage(r);
  const Matrix* x = &points;
  if (hyperbolic) {
    r.embedded_points = stage("embed", [&] { return embed_rows(points, cfg.delta); });
    x = &r.embedded_points;
  }
  const AffinityMatrix w = stage("affinity", [&] { return build_affinity(*x, r.kernel, cfg.threads); });
  spectral_tail(w, cfg, stage, r);
  return r;
}

PipelineResult run_landmark(const Matrix& points, const PipelineConfig& cfg, bool hyperbolic) {
  PipelineResult r;
  r.kernel = cfg.kernel.with_geometry(hyperbolic);
  StageRunner stage(r);
  const Matrix* x = &points;
  if (hyperbolic) {
    r.embedded_points = stage("embed", [&] { return embed_rows(points, cfg.delta); });
    x = &r.embedded_points;
  }
  const Metric metric = hyperbolic ? Metric::PoincareDisc : Metric::Euclidean;
  const int m = cfg.resolved_m(points.rows());
  r.preclustering = stage("landmarks", [&] { return kmeans(*x, stage_kmeans(cfg, m, metric, 1)); });
  const Matrix v = stage("landmark_affinity", [&] { return build_landmark_affinity(r.preclustering->centroids, *x, r.kernel); });

  if (cfg.landmark_fast) {
    const Matrix z = stage("landmark_normalize", [&] { return landmark_factor(v, &r.flags); });
    r.spectral_size = z.rows();
    r.embedding = stage("svd", [&] {
      if (cfg.k > std::min(z.rows(), z.cols()))
        fail(ErrorKind::InvalidInput, "fast landmark mode needs k <= min(m, N)");
      Eigen::BDCSVD<Matrix> svd(z, Eigen::ComputeThinV);
      SpectralEmbedding e;
      e.eigenvalues = svd.singularValues().head(cfg.k);
      e.vectors = svd.matrixV().leftCols(cfg.k);
      for (Index c = 0; c < e.vectors.cols(); ++c) {
        const double peak = e.vectors.col(c).cwiseAbs().maxCoeff();
        for (Index i = 0; i < e.vectors.rows(); ++i)
          if (std::abs(e.vectors(i, c)) > 1e-8 * peak) {
            if (e.vectors(i, c) < 0) e.vectors.col(c) *= -1.0;
            break;
          }
      }
      e.rows = row_normalize(e.vectors, &e.zero_rows);
      return e;
    });
    for (Index zr : r.embedding.zero_rows) raise_flag(&r.flags, "zero-spectral-row:" + std::to_string(zr));
    r.clustering = stage("kmeans", [&] { return kmeans(r.embedding.rows, stage_kmeans(cfg, cfg.k, Metric::Euclidean, 2)); });
    return r;
  }

  const AffinityMatrix f = stage("landmark_normalize", [&] { return landmark_normalize(v, &r.flags); });
  spectral_tail(f, cfg, stage, r);
  return r;
}

PipelineResult run_fast(const Matrix& points, const PipelineConfig& cfg, bool hyperbolic) {
  PipelineResult r;
  r.kernel = cfg.kernel.with_geometry(hyperbolic);
  StageRunner stage(r);
  const Matrix* x = &points;
  if (hyperbolic) {
    r.embedded_points = stage("embed", [&] { return embed_rows(points, cfg.delta); });
    x = &r.embedded_points;
  }
  const Metric metric = hyperbolic ? Metric::PoincareDisc : Metric::Euclidean;
  const int m = cfg.resolved_m(points.rows());
  r.preclustering = stage("preclustering", [&] { return kmeans(*x, stage_kmeans(cfg, m, metric, 1)); });
  const AffinityMatrix w = stage("affinity", [&] { return build_affinity(r.preclustering->centroids, r.kernel, cfg.threads); });
  spectral_tail(w, cfg, stage, r);

  const Clustering on_centroids = r.clustering;
  stage("broadcast", [&] {
    Labels labels(static_cast<std::size_t>(points.rows()));
    for (std::size_t i = 0; i < labels.size(); ++i)
      labels[i] = on_centroids.labels[static_cast<std::size_t>(r.preclustering->labels[i])];
    r.clustering.labels = std::move(labels);
  });
  return r;
}

PipelineResult run_as(const Matrix& points, PipelineConfig cfg, Algorithm algorithm) {
  cfg.algorithm = algorithm;
  return run_pipeline(points, cfg);
}

}  // namespace

PipelineResult run_pipeline(const Matrix& points, const PipelineConfig& cfg) {
  try {
    cfg.validate(points.rows());
    if (!points.allFinite()) fail(ErrorKind::InvalidInput, "input contains non-finite values");
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage 'validate': ") + e.what(), "validate");
  }
  switch (cfg.algorithm) {
    case Algorithm::HSCA: return run_full(points, cfg, true);
    case Algorithm::ESCA: return run_full(points, cfg, false);
    case Algorithm::HLSCK: return run_landmark(points, cfg, true);
    case Algorithm::ELSCK: return run_landmark(points, cfg, false);
    case Algorithm::FHSC: return run_fast(points, cfg, true);
    case Algorithm::FESC: return run_fast(points, cfg, false);
  }
  fail(ErrorKind::InvalidInput, "unknown algorithm");
}

PipelineResult run_hsca(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::HSCA); }
PipelineResult run_esca(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::ESCA); }
PipelineResult run_hlsck(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::HLSCK); }
PipelineResult run_elsck(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::ELSCK); }
PipelineResult run_fhsc(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::FHSC); }
PipelineResult run_fesc(const Matrix& points, PipelineConfig cfg) { return run_as(points, std::move(cfg), Algorithm::FESC); }

double sigma_from_hyper(bool gaussian, double h) { return gaussian ? 1.0 / std::sqrt(h) : 1.0 / (2.0 * h); }

double hyper_from_sigma(bool gaussian, double sigma) { return gaussian ? 1.0 / (sigma * sigma) : 1.0 / (2.0 * sigma); }

std::vector<double> default_hyper_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 4; ++e) grid.push_back(std::pow(10.0, e / 2.0));
  return grid;
}

GridSearchResult sigma_grid_search(const Matrix& points, const Labels& truth, const PipelineConfig& cfg,
                                   const std::vector<double>& hyper_grid) {
  if (hyper_grid.empty()) fail(ErrorKind::InvalidInput, "sigma_grid_search: empty grid");
  GridSearchResult out;
  bool have_best = false;
  for (double h : hyper_grid) {
    GridPoint p;
    p.hyper = h;
    p.sigma = sigma_from_hyper(cfg.kernel.gaussian(), h);
    PipelineConfig run_cfg = cfg;
    run_cfg.kernel.sigma = p.sigma;
    run_cfg.sigma2 = p.sigma;
    try {
      PipelineResult r = run_pipeline(points, run_cfg);
      p.ari = ari(r.clustering.labels, truth);
      p.nmi = nmi(r.clustering.labels, truth);
      if (!have_best || p.ari > out.curve[out.best].ari) {
        out.best = out.curve.size();
        out.best_run = std::move(r);
        have_best = true;
      }
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.curve.push_back(p);
  }
  if (!have_best) fail(ErrorKind::NumericalDegeneracy, "sigma_grid_search: every grid value failed: " + out.curve.back().error);
  return out;
}

}  // namespace hsc
