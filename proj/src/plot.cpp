#include "spkl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "spkl/stats.hpp"

namespace spkl {

namespace {

constexpr double kWidth = 800, kHeight = 600, kMargin = 60;

const char* const kGroupColors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};
const char* const kTopicColors[] = {"#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
                                    "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string header(double w, double h, const std::string& title) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
    << w << ' ' << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
    << escape(title) << "</text>\n";
  return o.str();
}

bool is_topic(const std::string& group) { return group.starts_with("topic:"); }

}  // namespace

std::string plot_landscape(const Layout2D& layout, const std::string& title) {
  std::ostringstream o;
  o << header(kWidth, kHeight, title);

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (layout.coords.rows() > 0) {
    xmin = layout.coords.col(0).minCoeff();
    xmax = layout.coords.col(0).maxCoeff();
    ymin = layout.coords.col(1).minCoeff();
    ymax = layout.coords.col(1).maxCoeff();
  }
  if (xmax - xmin < 1e-12) { xmin -= 1; xmax += 1; }
  if (ymax - ymin < 1e-12) { ymin -= 1; ymax += 1; }
  const double plot_w = kWidth - 2 * kMargin - 160, plot_h = kHeight - 2 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return kMargin + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  // Colour assignment: speaker groups first (in order of appearance), then topics.
  std::vector<std::string> groups, topics;
  for (const auto& g : layout.groups) {
    auto& list = is_topic(g) ? topics : groups;
    if (std::find(list.begin(), list.end(), g) == list.end()) list.push_back(g);
  }
  std::sort(groups.begin(), groups.end());
  std::sort(topics.begin(), topics.end());
  std::map<std::string, std::string> color;
  for (std::size_t i = 0; i < groups.size(); ++i) color[groups[i]] = kGroupColors[i % 4];
  for (std::size_t i = 0; i < topics.size(); ++i) color[topics[i]] = kTopicColors[i % 12];

  o << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot_w << "\" height=\"" << plot_h
    << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  o << "<g class=\"points\">\n";
  for (Eigen::Index i = 0; i < layout.coords.rows(); ++i) {
    const auto& g = layout.groups[static_cast<std::size_t>(i)];
    const bool topic = is_topic(g);
    o << "<circle class=\"" << (topic ? "keyword" : "marker") << "\" data-group=\"" << escape(g) << "\" cx=\""
      << fmt(sx(layout.coords(i, 0))) << "\" cy=\"" << fmt(sy(layout.coords(i, 1))) << "\" r=\""
      << (topic ? 2.5 : 3.5) << "\" fill=\"" << color[g] << "\" fill-opacity=\"0.75\"><title>"
      << escape(layout.tokens[static_cast<std::size_t>(i)]) << "</title></circle>\n";
  }
  o << "</g>\n<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = kMargin + 10;
  for (const auto* list : {&groups, &topics}) {
    for (const auto& g : *list) {
      o << "<g class=\"legend-entry\"><circle cx=\"" << kWidth - 200 << "\" cy=\"" << ly << "\" r=\"5\" fill=\""
        << color[g] << "\"/><text x=\"" << kWidth - 188 << "\" y=\"" << ly + 4 << "\">" << escape(g)
        << "</text></g>\n";
      ly += 18;
    }
  }
  o << "</g>\n";
  o << "<text class=\"caption\" x=\"" << kMargin << "\" y=\"" << kHeight - 20
    << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">" << kAxesCaveat << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::vector<std::pair<double, double>> density_curve(std::span<const double> values, double lo, double hi,
                                                     std::size_t points) {
  std::vector<std::pair<double, double>> curve;
  if (points < 2) points = 2;
  const double n = static_cast<double>(values.size());
  double h = 0.01;
  if (values.size() >= 2) {
    const double sd = stddev(values);
    if (sd > 0.0) h = 1.06 * sd * std::pow(n, -0.2);
  }
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    double density = 0.0;
    if (!values.empty()) {
      for (double v : values) {
        const double z = (x - v) / h;
        density += std::exp(-0.5 * z * z);
      }
      density *= norm;
    }
    curve.emplace_back(x, density);
  }
  return curve;
}

std::string plot_distributions(std::span<const SimilarityDistribution> distributions, const std::string& title) {
  std::ostringstream o;
  o << header(kWidth, kHeight, title);
  const double plot_w = kWidth - 2 * kMargin - 160, plot_h = kHeight - 2 * kMargin;

  std::vector<std::vector<std::pair<double, double>>> curves;
  double ymax = 0.0;
  for (const auto& d : distributions) {
    curves.push_back(density_curve(d.values));
    for (const auto& [x, y] : curves.back()) ymax = std::max(ymax, y);
  }
  if (ymax <= 0.0) ymax = 1.0;
  auto sx = [&](double x) { return kMargin + (x + 1.0) / 2.0 * plot_w; };
  auto sy = [&](double y) { return kMargin + plot_h - y / ymax * plot_h; };

  o << "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + plot_h << "\" x2=\"" << kMargin + plot_w << "\" y2=\""
    << kMargin + plot_h << "\" stroke=\"black\"/>\n";
  for (double t = -1.0; t <= 1.0001; t += 0.5) {
    o << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << kMargin + plot_h + 16 << "\" text-anchor=\"middle\">"
      << fmt(t) << "</text>\n";
  }
  o << "<text x=\"" << kMargin + plot_w / 2 << "\" y=\"" << kMargin + plot_h + 36
    << "\" text-anchor=\"middle\">cosine similarity</text>\n</g>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::ostringstream path;
    for (std::size_t j = 0; j < curves[i].size(); ++j) {
      path << (j ? " L" : "M") << fmt(sx(curves[i][j].first)) << ',' << fmt(sy(curves[i][j].second));
    }
    const char* colour = kTopicColors[(2 * i + 1) % 12];
    o << "<path class=\"density\" data-label=\"" << escape(distributions[i].label) << "\" d=\"" << path.str()
      << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    o << "<g class=\"legend-entry\" font-family=\"sans-serif\" font-size=\"12\"><line x1=\"" << kWidth - 200
      << "\" y1=\"" << kMargin + 10 + 18 * static_cast<double>(i) << "\" x2=\"" << kWidth - 185 << "\" y2=\""
      << kMargin + 10 + 18 * static_cast<double>(i) << "\" stroke=\"" << colour
      << "\" stroke-width=\"2\"/><text x=\"" << kWidth - 180 << "\" y=\""
      << kMargin + 14 + 18 * static_cast<double>(i) << "\">" << escape(distributions[i].label) << "</text></g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string plot_affinity(std::span<const AffinityRow> rows, const std::string& title) {
  std::vector<std::string> groups, topics;
  for (const auto& r : rows) {
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
    if (std::find(topics.begin(), topics.end(), r.topic) == topics.end()) topics.push_back(r.topic);
  }
  const double cell = 48, left = 140, top = 60;
  const double w = left + cell * static_cast<double>(topics.size()) + 40;
  const double h = top + cell * static_cast<double>(groups.size()) + 120;
  double lo = 1.0, hi = -1.0;
  for (const auto& r : rows) {
    if (std::isfinite(r.affinity)) {
      lo = std::min(lo, r.affinity);
      hi = std::max(hi, r.affinity);
    }
  }
  if (hi <= lo) { lo -= 0.5; hi += 0.5; }

  std::ostringstream o;
  o << header(w, h, title);
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& r : rows) {
    const auto gi = static_cast<double>(std::find(groups.begin(), groups.end(), r.group) - groups.begin());
    const auto ti = static_cast<double>(std::find(topics.begin(), topics.end(), r.topic) - topics.begin());
    std::string fill = "#eeeeee";
    if (std::isfinite(r.affinity)) {
      const double t = (r.affinity - lo) / (hi - lo);
      char buf[16];
      std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 - 200 * t), static_cast<int>(255 - 120 * t),
                    255);
      fill = buf;
    }
    o << "<rect class=\"cell\" x=\"" << left + ti * cell << "\" y=\"" << top + gi * cell << "\" width=\"" << cell
      << "\" height=\"" << cell << "\" fill=\"" << fill << "\" stroke=\"white\"><title>" << escape(r.group)
      << " / " << escape(r.topic) << ": " << (std::isfinite(r.affinity) ? fmt(r.affinity) : "n/a")
      << "</title></rect>\n";
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    o << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * (static_cast<double>(i) + 0.55)
      << "\" text-anchor=\"end\">" << escape(groups[i]) << "</text>\n";
  }
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const double x = left + cell * (static_cast<double>(i) + 0.5);
    const double y = top + cell * static_cast<double>(groups.size()) + 12;
    o << "<text x=\"" << x << "\" y=\"" << y << "\" transform=\"rotate(45 " << x << ' ' << y << ")\">"
      << escape(topics[i]) << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace spkl
