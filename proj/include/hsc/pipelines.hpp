#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsc/affinity.hpp"
#include "hsc/kmeans.hpp"
#include "hsc/spectral.hpp"
#include "hsc/types.hpp"

namespace hsc {

enum class Algorithm { HSCA, ESCA, HLSCK, ELSCK, FHSC, FESC };

const char* to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(const std::string& name);
bool is_hyperbolic(Algorithm algorithm);
bool uses_landmarks(Algorithm algorithm);  // HLSCK, ELSCK, FHSC, FESC

struct PipelineConfig {
  Algorithm algorithm = Algorithm::HSCA;
  KernelSpec kernel;  // geometry is taken from the algorithm, only the kernel family matters
  int k = 2;
  std::optional<int> m;           // landmarks / pre-clusters; default min(N, max(10k, 100))
  std::optional<double> sigma2;   // bandwidth of W'; defaults to kernel.sigma
  double delta = 1e-2;
  KMeansConfig kmeans;            // k, seed and metric are set per stage
  std::uint64_t seed = 42;
  bool landmark_fast = false;     // HLSCK/ELSCK: top-k right singular vectors of Z instead of the N x N problem
  int threads = 1;

  int resolved_m(Index n) const;
  double resolved_sigma2() const { return sigma2.value_or(kernel.sigma); }
  void validate(Index n) const;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct PipelineResult {
  Clustering clustering;              // labels for every input row, input order
  SpectralEmbedding embedding;
  Matrix embedded_points;             // disc coordinates; empty for Euclidean algorithms
  std::optional<Clustering> preclustering;  // landmark / pre-cluster k-means
  std::vector<StageTiming> timings;
  Flags flags;
  Index spectral_size = 0;            // order of the eigenproblem actually solved
  KernelSpec kernel;                  // as applied
};

/// Embeds every row with embed_to_disc.
Matrix embed_rows(const Matrix& points, double delta);

/// Dispatches on cfg.algorithm. Errors escaping a stage are rethrown with the stage name.
PipelineResult run_pipeline(const Matrix& points, const PipelineConfig& cfg);

PipelineResult run_hsca(const Matrix& points, PipelineConfig cfg);
PipelineResult run_esca(const Matrix& points, PipelineConfig cfg);
PipelineResult run_hlsck(const Matrix& points, PipelineConfig cfg);
PipelineResult run_elsck(const Matrix& points, PipelineConfig cfg);
PipelineResult run_fhsc(const Matrix& points, PipelineConfig cfg);
PipelineResult run_fesc(const Matrix& points, PipelineConfig cfg);

/// Kernel hyperparameter h and the bandwidth it stands for: h = 1/sigma^2
/// (Gaussian) or h = 1/(2 sigma) (Poisson).
double sigma_from_hyper(bool gaussian, double h);
double hyper_from_sigma(bool gaussian, double sigma);

/// Hyperparameter values swept by the grid search, 1e-3 .. 1e2 in half decades.
std::vector<double> default_hyper_grid();

struct GridPoint {
  double hyper = 0.0;
  double sigma = 0.0;
  double ari = 0.0;
  double nmi = 0.0;
  std::string error;  // non-empty when the run failed at this bandwidth
};

struct GridSearchResult {
  std::vector<GridPoint> curve;
  std::size_t best = 0;       // index into curve; highest ARI, ties to the earlier point
  PipelineResult best_run;
};

/// Runs cfg once per grid value (sigma and sigma2 both set from it) and keeps
/// the run with the best ARI against `truth`. Throws if every value fails.
GridSearchResult sigma_grid_search(const Matrix& points, const Labels& truth, const PipelineConfig& cfg,
                                   const std::vector<double>& hyper_grid = default_hyper_grid());

}  // namespace hsc
