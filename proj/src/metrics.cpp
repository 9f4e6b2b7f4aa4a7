#include "hsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace hsc {

namespace {

// Relabels to 0..k-1 in order of first appearance.
Labels compact(const Labels& labels, int* k) {
  std::map<int, int> ids;
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = ids.emplace(labels[i], static_cast<int>(ids.size())).first;
    out[i] = it->second;
  }
  *k = static_cast<int>(ids.size());
  return out;
}

struct Contingency {
  std::vector<std::vector<long long>> table;
  std::vector<long long> rows, cols;
  long long n = 0;
};

Contingency contingency(const Labels& a, const Labels& b, const char* who) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidInput, std::string(who) + ": label vectors differ in length");
  if (a.size() < 2) fail(ErrorKind::InvalidInput, std::string(who) + ": need at least 2 labels");
  int ka = 0, kb = 0;
  const Labels ca = compact(a, &ka);
  const Labels cb = compact(b, &kb);
  Contingency c;
  c.table.assign(static_cast<std::size_t>(ka), std::vector<long long>(static_cast<std::size_t>(kb), 0));
  c.rows.assign(static_cast<std::size_t>(ka), 0);
  c.cols.assign(static_cast<std::size_t>(kb), 0);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    ++c.table[static_cast<std::size_t>(ca[i])][static_cast<std::size_t>(cb[i])];
    ++c.rows[static_cast<std::size_t>(ca[i])];
    ++c.cols[static_cast<std::size_t>(cb[i])];
  }
  c.n = static_cast<long long>(a.size());
  return c;
}

long long pairs(long long x) { return x * (x - 1) / 2; }

double entropy(const std::vector<long long>& counts, long long n) {
  double h = 0.0;
  for (long long c : counts)
    if (c > 0) {
      const double p = static_cast<double>(c) / static_cast<double>(n);
      h -= p * std::log(p);
    }
  return h;
}

struct Groups {
  int k = 0;
  Labels labels;
  std::vector<std::vector<Index>> members;
};

Groups group(const Matrix& points, const Labels& labels, const char* who) {
  if (static_cast<Index>(labels.size()) != points.rows())
    fail(ErrorKind::InvalidInput, std::string(who) + ": labels length differs from number of points");
  Groups g;
  g.labels = compact(labels, &g.k);
  if (g.k < 2) fail(ErrorKind::InvalidInput, std::string(who) + ": need at least 2 clusters");
  g.members.resize(static_cast<std::size_t>(g.k));
  for (std::size_t i = 0; i < g.labels.size(); ++i)
    g.members[static_cast<std::size_t>(g.labels[i])].push_back(static_cast<Index>(i));
  return g;
}

Vector centre(const Matrix& points, const std::vector<Index>& members, Metric space) {
  Matrix sub(static_cast<Index>(members.size()), points.cols());
  for (std::size_t r = 0; r < members.size(); ++r) sub.row(static_cast<Index>(r)) = points.row(members[r]);
  if (space == Metric::Euclidean) return sub.colwise().mean().transpose();
  return frechet_mean(sub, Vector());
}

double distance(const Vector& a, const Vector& b, Metric space) {
  return space == Metric::Euclidean ? (a - b).norm() : dist_disc(a, b);
}

}  // namespace

double ari(const Labels& a, const Labels& b) {
  const Contingency c = contingency(a, b, "ari");
  // pair confusion counts: same/same, same/diff, diff/same, diff/diff
  long long same_both = 0;
  for (const auto& row : c.table)
    for (long long v : row) same_both += pairs(v);
  long long same_a = 0, same_b = 0;
  for (long long v : c.rows) same_a += pairs(v);
  for (long long v : c.cols) same_b += pairs(v);
  const long long total = pairs(c.n);
  const long long tp = same_both;
  const long long fn = same_a - same_both;
  const long long fp = same_b - same_both;
  const long long tn = total - tp - fn - fp;
  if (fn == 0 && fp == 0) return 1.0;
  const double num = 2.0 * (static_cast<double>(tp) * static_cast<double>(tn) - static_cast<double>(fn) * static_cast<double>(fp));
  const double den = static_cast<double>(tp + fn) * static_cast<double>(fn + tn) +
                     static_cast<double>(tp + fp) * static_cast<double>(fp + tn);
  return num / den;
}

double nmi(const Labels& a, const Labels& b) {
  const Contingency c = contingency(a, b, "nmi");
  const double ha = entropy(c.rows, c.n);
  const double hb = entropy(c.cols, c.n);
  if (c.rows.size() < 2 || c.cols.size() < 2) return 0.0;
  const double n = static_cast<double>(c.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < c.rows.size(); ++i)
    for (std::size_t j = 0; j < c.cols.size(); ++j) {
      const long long v = c.table[i][j];
      if (v == 0) continue;
      const double p = static_cast<double>(v) / n;
      mi += p * std::log(n * static_cast<double>(v) / (static_cast<double>(c.rows[i]) * static_cast<double>(c.cols[j])));
    }
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

Matrix pairwise_distances(const Matrix& points, Metric space) {
  const Index n = points.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double v = space == Metric::Euclidean ? (points.row(i) - points.row(j)).norm()
                                                  : dist_disc(points.row(i), points.row(j));
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

double silhouette(const Matrix& points, const Labels& labels, Metric space) {
  const Groups g = group(points, labels, "silhouette");
  const Matrix d = pairwise_distances(points, space);
  const Index n = points.rows();
  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(g.k));
  for (Index i = 0; i < n; ++i) {
    const int own = g.labels[static_cast<std::size_t>(i)];
    const std::size_t own_size = g.members[static_cast<std::size_t>(own)].size();
    if (own_size < 2) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Index j = 0; j < n; ++j) sums[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(j)])] += d(i, j);
    const double a = sums[static_cast<std::size_t>(own)] / static_cast<double>(own_size - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < g.k; ++c)
      if (c != own) b = std::min(b, sums[static_cast<std::size_t>(c)] / static_cast<double>(g.members[static_cast<std::size_t>(c)].size()));
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

double davies_bouldin(const Matrix& points, const Labels& labels, Metric space) {
  const Groups g = group(points, labels, "davies_bouldin");
  std::vector<Vector> centres;
  std::vector<double> scatter;
  for (const auto& mem : g.members) {
    centres.push_back(centre(points, mem, space));
    double s = 0.0;
    for (Index i : mem) s += distance(points.row(i).transpose(), centres.back(), space);
    scatter.push_back(s / static_cast<double>(mem.size()));
  }
  double total = 0.0;
  for (int i = 0; i < g.k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < g.k; ++j) {
      if (i == j) continue;
      const double sep = distance(centres[static_cast<std::size_t>(i)], centres[static_cast<std::size_t>(j)], space);
      if (!(sep > 0.0))
        fail(ErrorKind::DegenerateMetric,
             "davies_bouldin: clusters " + std::to_string(i) + " and " + std::to_string(j) + " have coincident centroids");
      worst = std::max(worst, (scatter[static_cast<std::size_t>(i)] + scatter[static_cast<std::size_t>(j)]) / sep);
    }
    total += worst;
  }
  return total / static_cast<double>(g.k);
}

double calinski_harabasz(const Matrix& points, const Labels& labels, Metric space, Flags* flags) {
  const Groups g = group(points, labels, "calinski_harabasz");
  const Index n = points.rows();
  if (n <= g.k) fail(ErrorKind::InvalidInput, "calinski_harabasz: need more points than clusters");
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  const Vector global = centre(points, all, space);
  double between = 0.0, within = 0.0;
  for (const auto& mem : g.members) {
    const Vector c = centre(points, mem, space);
    const double dc = distance(c, global, space);
    between += static_cast<double>(mem.size()) * dc * dc;
    for (Index i : mem) {
      const double di = distance(points.row(i).transpose(), c, space);
      within += di * di;
    }
  }
  if (!(within > 0.0)) {
    raise_flag(flags, "zero-within-dispersion");
    return std::numeric_limits<double>::infinity();
  }
  return (between / static_cast<double>(g.k - 1)) / (within / static_cast<double>(n - g.k));
}

EvaluationReport evaluate(const Matrix& points, const Labels& labels, const Labels* truth, Metric space) {
  EvaluationReport r;
  r.space = space;
  if (static_cast<Index>(labels.size()) != points.rows())
    fail(ErrorKind::InvalidInput, "evaluate: labels length differs from number of points");
  if (truth) {
    r.ari = ari(labels, *truth);
    r.nmi = nmi(labels, *truth);
  }
  int k = 0;
  compact(labels, &k);
  if (k < 2) {
    r.flags.push_back("intrinsic-metrics-need-two-clusters");
    return r;
  }
  r.silhouette = silhouette(points, labels, space);
  try {
    r.davies_bouldin = davies_bouldin(points, labels, space);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateMetric) throw;
    r.flags.push_back("davies-bouldin-coincident-centroids");
  }
  if (points.rows() > k) r.calinski_harabasz = calinski_harabasz(points, labels, space, &r.flags);
  else r.flags.push_back("calinski-harabasz-needs-more-points-than-clusters");
  return r;
}

}  // namespace hsc
