#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace hsc::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string colour(std::size_t i) {
  static const char* base[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  if (i < 10) return base[i];
  // golden-angle hues past the fixed palette
  const double hue = std::fmod(static_cast<double>(i) * 137.508, 360.0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "hsl(%.1f,65%%,45%%)", hue);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scatter_svg(const Eigen::MatrixXd& points, const std::vector<int>& labels, const std::string& title) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd xy(n, 2);
  std::string heading = title;
  if (points.cols() > 2) {
    const Eigen::MatrixXd centred = points.rowwise() - points.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    Eigen::MatrixXd v = svd.matrixV().leftCols(2);
    for (Eigen::Index c = 0; c < 2; ++c) {
      Eigen::Index at = 0;
      v.col(c).cwiseAbs().maxCoeff(&at);
      if (v(at, c) < 0) v.col(c) *= -1.0;
    }
    xy = centred * v;
    heading += " (PCA-reduced: first two principal components)";
  } else if (points.cols() == 2) {
    xy = points;
  } else {
    xy.col(0) = points.col(0);
    xy.col(1).setZero();
  }

  std::vector<int> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < distinct.size(); ++i) index[distinct[i]] = i;

  const double width = 640, height = 480, left = 60, right = 140, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  double x0 = n ? xy.col(0).minCoeff() : 0.0, x1 = n ? xy.col(0).maxCoeff() : 1.0;
  double y0 = n ? xy.col(1).minCoeff() : 0.0, y1 = n ? xy.col(1).maxCoeff() : 1.0;
  if (x1 - x0 <= 0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 <= 0) { y0 -= 0.5; y1 += 0.5; }
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
     << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(heading) << "</text>\n";
  // axes
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = x0 + (x1 - x0) * t / 4.0, fy = y0 + (y1 - y0) * t / 4.0;
    os << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(fy) + 3) << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }
  os << "</g>\n";
  // points, one group per label
  for (std::size_t g = 0; g < distinct.size(); ++g) {
    os << "<g class=\"cluster\" data-label=\"" << distinct[g] << "\" fill=\"" << colour(g) << "\">\n";
    for (Eigen::Index i = 0; i < n; ++i)
      if (index[labels[static_cast<std::size_t>(i)]] == g)
        os << "<circle cx=\"" << fmt(sx(xy(i, 0))) << "\" cy=\"" << fmt(sy(xy(i, 1))) << "\" r=\"3\"/>\n";
    os << "</g>\n";
  }
  // legend
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t g = 0; g < distinct.size(); ++g) {
    const double y = top + 14.0 * static_cast<double>(g);
    os << "<rect x=\"" << fmt(width - right + 16) << "\" y=\"" << fmt(y) << "\" width=\"10\" height=\"10\" fill=\"" << colour(g)
       << "\"/>\n";
    os << "<text x=\"" << fmt(width - right + 32) << "\" y=\"" << fmt(y + 9) << "\">label " << distinct[g] << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace hsc::cli
