#include "hsc/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "hsc/rng.hpp"

namespace hsc {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "?";
}

bool parse_double(const std::string& cell, double* out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, *out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(*out);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << contents;
  if (!out) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

EuclideanDataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, path + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_row(line);

  const std::string wanted = label_column.value_or("label");
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == wanted) label_col = static_cast<int>(c);
  if (label_column && label_col < 0) fail(ErrorKind::Parse, path + ": no column named '" + wanted + "'");

  EuclideanDataset data;
  data.name = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  if (const auto dot = data.name.rfind('.'); dot != std::string::npos) data.name.erase(dot);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (static_cast<int>(c) != label_col) data.feature_names.push_back(header[c]);
  const std::size_t d = data.feature_names.size();
  if (d == 0) fail(ErrorKind::Parse, path + ": no feature columns");

  std::vector<double> values;
  Labels labels;
  std::map<std::string, int> label_ids;
  bool labels_numeric = true;
  std::vector<std::string> raw_labels;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size())
      fail(ErrorKind::Parse, path + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()));
    std::vector<double> row;
    row.reserve(d);
    bool missing = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == label_col) continue;
      if (is_missing(cells[c])) {
        missing = true;
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[c], &v))
        fail(ErrorKind::Parse, path + ": row " + std::to_string(line_no) + ", column " + std::to_string(c + 1) + " ('" +
                                   header[c] + "'): not a number: '" + cells[c] + "'");
      row.push_back(v);
    }
    if (missing) {
      ++data.dropped_rows;
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    if (label_col >= 0) {
      const std::string& cell = cells[static_cast<std::size_t>(label_col)];
      raw_labels.push_back(cell);
      int iv = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), iv);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) labels_numeric = false;
    }
    ++rows;
  }

  data.points.resize(static_cast<Index>(rows), static_cast<Index>(d));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < d; ++c) data.points(static_cast<Index>(r), static_cast<Index>(c)) = values[r * d + c];
  if (label_col >= 0) {
    for (const std::string& s : raw_labels) {
      if (labels_numeric) {
        labels.push_back(std::stoi(s));
      } else {
        labels.push_back(label_ids.emplace(s, static_cast<int>(label_ids.size())).first->second);
      }
    }
    data.labels = std::move(labels);
  }
  return data;
}

void save_csv(const std::string& path, const EuclideanDataset& data) {
  std::ostringstream os;
  for (Index c = 0; c < data.dim(); ++c) {
    if (c) os << ',';
    if (static_cast<std::size_t>(c) < data.feature_names.size()) os << data.feature_names[static_cast<std::size_t>(c)];
    else os << 'x' << c;
  }
  if (data.labels) os << ",label";
  os << '\n';
  for (Index r = 0; r < data.size(); ++r) {
    for (Index c = 0; c < data.dim(); ++c) {
      if (c) os << ',';
      os << format_double(data.points(r, c));
    }
    if (data.labels) os << ',' << (*data.labels)[static_cast<std::size_t>(r)];
    os << '\n';
  }
  write_text_file(path, os.str());
}

void save_labels(const std::string& path, const Labels& labels) {
  std::ostringstream os;
  os << "label\n";
  for (int l : labels) os << l << '\n';
  write_text_file(path, os.str());
}

Labels load_labels(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, path + ": empty labels file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_row(line);
  int col = 0;
  if (header.size() > 1) {
    col = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == "label") col = static_cast<int>(c);
    if (col < 0) fail(ErrorKind::Parse, path + ": no 'label' column");
  }
  Labels out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (static_cast<std::size_t>(col) >= cells.size())
      fail(ErrorKind::Parse, path + ": row " + std::to_string(line_no) + " is too short");
    const std::string& cell = cells[static_cast<std::size_t>(col)];
    int v = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      fail(ErrorKind::Parse, path + ": row " + std::to_string(line_no) + ": label is not an integer: '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

EuclideanDataset generate_blobs(int n_per_cluster, const Matrix& centers, double spread, std::uint64_t seed) {
  if (n_per_cluster < 1) fail(ErrorKind::InvalidInput, "generate_blobs: n_per_cluster must be >= 1");
  if (centers.rows() < 1) fail(ErrorKind::InvalidInput, "generate_blobs: need at least one center");
  if (!(spread >= 0.0)) fail(ErrorKind::InvalidInput, "generate_blobs: spread must be nonnegative");
  Rng rng(seed);
  EuclideanDataset data;
  data.name = "blobs";
  data.points.resize(centers.rows() * n_per_cluster, centers.cols());
  Labels labels;
  for (Index c = 0; c < centers.rows(); ++c)
    for (int i = 0; i < n_per_cluster; ++i) {
      data.points.row(c * n_per_cluster + i) = centers.row(c) + spread * rng.normal_vector(centers.cols()).transpose();
      labels.push_back(static_cast<int>(c));
    }
  data.labels = std::move(labels);
  return data;
}

void TreeBlobsConfig::validate() const {
  if (depth < 1) fail(ErrorKind::InvalidInput, "generate_tree_blobs: depth must be >= 1");
  if (branching < 1) fail(ErrorKind::InvalidInput, "generate_tree_blobs: branching must be >= 1");
  if (!(scale_decay > 0.0 && scale_decay < 1.0)) fail(ErrorKind::InvalidInput, "generate_tree_blobs: scale_decay must be in (0,1)");
  if (n_leaf < 1) fail(ErrorKind::InvalidInput, "generate_tree_blobs: n_leaf must be >= 1");
  if (dim < 2) fail(ErrorKind::InvalidInput, "generate_tree_blobs: dim must be >= 2");
  if (!(root_scale > 0.0)) fail(ErrorKind::InvalidInput, "generate_tree_blobs: root_scale must be positive");
  if (!(spread >= 0.0)) fail(ErrorKind::InvalidInput, "generate_tree_blobs: spread must be nonnegative");
}

EuclideanDataset generate_tree_blobs(const TreeBlobsConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const Index dim = cfg.dim;

  struct Node {
    Vector centre;
    std::vector<int> path;
  };
  std::vector<Node> level{{Vector::Zero(dim), {}}};
  double offset = cfg.root_scale;
  for (int l = 1; l <= cfg.depth; ++l) {
    std::vector<Node> next;
    for (const Node& parent : level) {
      // random orthonormal pair spanning the plane the children are spread in
      Vector u = rng.normal_vector(dim).normalized();
      Vector v = rng.normal_vector(dim);
      v -= v.dot(u) * u;
      v.normalize();
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (int b = 0; b < cfg.branching; ++b) {
        const double angle = phase + 2.0 * std::numbers::pi * b / cfg.branching;
        Node child{parent.centre + offset * (std::cos(angle) * u + std::sin(angle) * v), parent.path};
        child.path.push_back(b);
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
    if (l < cfg.depth) offset *= cfg.scale_decay;
  }

  const double spread = cfg.spread > 0.0 ? cfg.spread : 0.25 * offset;
  Hierarchy h;
  h.leaf_centers.resize(static_cast<Index>(level.size()), dim);
  for (std::size_t i = 0; i < level.size(); ++i) {
    h.leaf_centers.row(static_cast<Index>(i)) = level[i].centre.transpose();
    h.paths.push_back(level[i].path);
  }
  EuclideanDataset data = generate_blobs(cfg.n_leaf, h.leaf_centers, spread, derive_seed(cfg.seed, 1));
  data.name = "tree-blobs";
  data.hierarchy = std::move(h);
  return data;
}

EuclideanDataset reservoir_subsample(const EuclideanDataset& data, Index n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::InvalidInput, "reservoir_subsample: n must be >= 1");
  if (n >= data.size()) return data;
  Rng rng(seed);
  std::vector<Index> keep(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = i;
  for (Index i = n; i < data.size(); ++i) {
    const auto j = static_cast<Index>(rng.index(static_cast<std::size_t>(i + 1)));
    if (j < n) keep[static_cast<std::size_t>(j)] = i;
  }
  std::sort(keep.begin(), keep.end());
  EuclideanDataset out;
  out.name = data.name;
  out.feature_names = data.feature_names;
  out.points.resize(n, data.dim());
  Labels labels;
  for (Index r = 0; r < n; ++r) {
    out.points.row(r) = data.points.row(keep[static_cast<std::size_t>(r)]);
    if (data.labels) labels.push_back((*data.labels)[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])]);
  }
  if (data.labels) out.labels = std::move(labels);
  return out;
}

Matrix zscore(const Matrix& points) {
  if (points.rows() < 1) return points;
  const Eigen::RowVectorXd mean = points.colwise().mean();
  Matrix out = points.rowwise() - mean;
  for (Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows()));
    if (sd > 0.0) out.col(c) /= sd;
  }
  return out;
}

}  // namespace hsc
