#include "layerscope/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "layerscope/degree_rips.hpp"

namespace layerscope {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::vector<std::string> data_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) lines.push_back(t);
  }
  return lines;
}

Rational parse_field(const std::string& field, std::size_t row, std::size_t col) {
  auto value = parse_decimal(field);
  if (!value) {
    throw Error(ErrorCode::parse, "row " + std::to_string(row) + ", column " +
                                      std::to_string(col) + ": '" + field +
                                      "' is not a decimal number");
  }
  return *value;
}

std::optional<Rational> exact_sqrt(const Rational& sq) {
  BigInt num = boost::multiprecision::numerator(sq);
  BigInt den = boost::multiprecision::denominator(sq);
  BigInt rn = boost::multiprecision::sqrt(num);
  if (rn * rn != num) return std::nullopt;
  BigInt rd = boost::multiprecision::sqrt(den);
  if (rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<Rational> distances)
    : labels_(std::move(labels)), dist_(std::move(distances)) {
  std::size_t n = labels_.size();
  if (n == 0) throw Error(ErrorCode::validation, "metric space must be nonempty");
  if (dist_.size() != n * n) {
    throw Error(ErrorCode::validation, "distance matrix is not " + std::to_string(n) +
                                           "x" + std::to_string(n));
  }
  {
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) {
        throw Error(ErrorCode::validation, "duplicate label '" + l + "'");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i * n + i] != 0) {
      throw Error(ErrorCode::validation, "nonzero diagonal at '" + labels_[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (dist_[i * n + j] < 0) {
        throw Error(ErrorCode::validation, "negative distance between '" + labels_[i] +
                                               "' and '" + labels_[j] + "'");
      }
      if (dist_[i * n + j] != dist_[j * n + i]) {
        throw Error(ErrorCode::validation, "asymmetric distances between '" + labels_[i] +
                                               "' and '" + labels_[j] + "'");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist_[i * n + k] > dist_[i * n + j] + dist_[j * n + k]) {
          throw Error(ErrorCode::validation,
                      "triangle inequality fails on ('" + labels_[i] + "', '" + labels_[j] +
                          "', '" + labels_[k] + "'): d=" + format_exact(dist_[i * n + k]) +
                          " > " + format_exact(dist_[i * n + j]) + " + " +
                          format_exact(dist_[j * n + k]));
        }
      }
    }
  }
}

std::optional<PointMetric> point_metric_from_name(std::string_view name) {
  if (name == "euclidean") return PointMetric::euclidean;
  if (name == "manhattan") return PointMetric::manhattan;
  if (name == "chebyshev") return PointMetric::chebyshev;
  return std::nullopt;
}

FiniteMetricSpace load_matrix_csv(std::istream& in) {
  auto lines = data_lines(in);
  if (lines.empty()) throw Error(ErrorCode::parse, "empty distance matrix input");
  std::vector<std::string> labels = split_csv_line(lines[0]);
  std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorCode::parse, "header row has no labels");
  if (lines.size() != n + 1) {
    throw Error(ErrorCode::parse, "expected " + std::to_string(n) + " matrix rows, got " +
                                      std::to_string(lines.size() - 1));
  }
  std::vector<Rational> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto fields = split_csv_line(lines[i + 1]);
    if (fields.size() != n) {
      throw Error(ErrorCode::parse, "row " + std::to_string(i + 1) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = parse_field(fields[j], i + 1, j + 1);
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace load_matrix_csv_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_matrix_csv(in);
}

FiniteMetricSpace load_points_csv(std::istream& in, PointMetric metric) {
  auto lines = data_lines(in);
  if (lines.empty()) throw Error(ErrorCode::parse, "empty point table input");
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> points;
  std::size_t dim = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    auto fields = split_csv_line(lines[r]);
    if (fields.size() < 2) {
      throw Error(ErrorCode::parse, "row " + std::to_string(r + 1) +
                                        ": need a label and at least one coordinate");
    }
    if (r == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() - 1 != dim) {
      throw Error(ErrorCode::parse, "row " + std::to_string(r + 1) + " has " +
                                        std::to_string(fields.size() - 1) +
                                        " coordinates, expected " + std::to_string(dim));
    }
    labels.push_back(fields[0]);
    std::vector<Rational> coords(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      coords[c] = parse_field(fields[c + 1], r + 1, c + 2);
    }
    points.push_back(std::move(coords));
  }

  std::size_t n = points.size();
  std::vector<Rational> dist(n * n, Rational(0));
  auto set_pair = [&](std::size_t i, std::size_t j, const Rational& v) {
    dist[i * n + j] = v;
    dist[j * n + i] = v;
  };

  if (metric == PointMetric::manhattan || metric == PointMetric::chebyshev ||
      (metric == PointMetric::euclidean && dim == 1)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational v(0);
        for (std::size_t c = 0; c < dim; ++c) {
          Rational diff = boost::multiprecision::abs(points[i][c] - points[j][c]);
          if (metric == PointMetric::chebyshev) {
            if (diff > v) v = diff;
          } else {
            v += diff;
          }
        }
        set_pair(i, j, v);
      }
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
  }

  // Euclidean in dimension >= 2: work on exact squared distances, take exact
  // square roots where they exist and snap the rest to the 1e-12 grid. The
  // input is rejected when distinct squared distances end up closer than one
  // grid step, since no downstream comparison could then be trusted.
  std::map<Rational, Rational> root_of;
  std::vector<std::vector<Rational>> sq(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational s(0);
      for (std::size_t c = 0; c < dim; ++c) {
        Rational diff = points[i][c] - points[j][c];
        s += diff * diff;
      }
      sq[i][j] = s;
      root_of.emplace(s, Rational(0));
    }
  }
  for (auto& [square, root] : root_of) {
    if (auto exact = exact_sqrt(square)) {
      root = *exact;
    } else {
      root = quantize(std::sqrt(to_double(square)));
    }
  }
  const Rational* prev_root = nullptr;
  const Rational* prev_square = nullptr;
  for (const auto& [square, root] : root_of) {
    if (prev_root && root - *prev_root < quantum()) {
      throw Error(ErrorCode::validation,
                  "euclidean distances for squared values " + format_exact(*prev_square) +
                      " and " + format_exact(square) +
                      " differ by less than 1e-12 after snapping; rescale the input");
    }
    prev_root = &root;
    prev_square = &square;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      set_pair(i, j, root_of.at(sq[i][j]));
    }
  }
  try {
    return FiniteMetricSpace(std::move(labels), std::move(dist));
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " (after snapping euclidean distances)");
  }
}

FiniteMetricSpace load_points_csv_text(std::string_view text, PointMetric metric) {
  std::istringstream in{std::string(text)};
  return load_points_csv(in, metric);
}

Subsample Subsample::of(const FiniteMetricSpace& parent, std::vector<index_t> indices) {
  if (indices.empty()) throw Error(ErrorCode::argument, "subsample must be nonempty");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= parent.size()) {
      throw Error(ErrorCode::argument,
                  "subsample index " + std::to_string(indices[i]) + " out of range");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw Error(ErrorCode::argument, "subsample indices must be strictly increasing");
    }
  }
  return Subsample{std::move(indices)};
}

Subsample Subsample::full(const FiniteMetricSpace& parent) {
  std::vector<index_t> all(parent.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<index_t>(i);
  return Subsample{std::move(all)};
}

FiniteMetricSpace Subsample::restricted(const FiniteMetricSpace& parent) const {
  std::size_t m = indices.size();
  std::vector<std::string> labels(m);
  std::vector<Rational> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    labels[a] = parent.label(indices[a]);
    for (std::size_t b = 0; b < m; ++b) {
      dist[a * m + b] = parent.d(indices[a], indices[b]);
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

PhaseChangeProfile phase_change_profile(const FiniteMetricSpace& space) {
  std::size_t n = space.size();
  std::map<Rational, std::vector<std::pair<index_t, index_t>>> buckets;
  buckets[Rational(0)];
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 1; j < n; ++j) {
      buckets[space.d(i, j)].emplace_back(i, j);
    }
  }
  PhaseChangeProfile profile;
  profile.merge_index = 0;
  UnionFind uf(n);
  std::size_t components = n;
  std::size_t idx = 0;
  for (const auto& [value, pairs] : buckets) {
    profile.values.push_back(value);
    for (const auto& [i, j] : pairs) {
      if (uf.unite(i, j)) --components;
    }
    if (components == 1 && profile.merge_index == 0 && idx > 0) profile.merge_index = idx;
    ++idx;
  }
  // A single point (or all-zero distances) is connected from the start.
  if (components != 1) {
    throw Error(ErrorCode::validation, "phase change profile did not reach one component");
  }
  return profile;
}

Rational directional_hausdorff(const FiniteMetricSpace& parent, const Subsample& sample) {
  Rational worst(0);
  for (index_t y = 0; y < parent.size(); ++y) {
    const Rational* best = nullptr;
    for (index_t x : sample.indices) {
      const Rational& v = parent.d(y, x);
      if (!best || v < *best) best = &v;
    }
    if (*best > worst) worst = *best;
  }
  return worst;
}

Rational density_radius(const Subsample& sample, const FiniteMetricSpace& ambient, int k) {
  if (k < 0) throw Error(ErrorCode::argument, "k must be nonnegative");
  if (static_cast<std::size_t>(k) + 1 > ambient.size()) {
    throw Error(ErrorCode::argument, "k = " + std::to_string(k) + " needs at least " +
                                         std::to_string(k + 1) + " ambient points");
  }
  Rational worst(0);
  std::vector<Rational> dists(ambient.size());
  for (index_t x : sample.indices) {
    for (index_t y = 0; y < ambient.size(); ++y) dists[y] = ambient.d(x, y);
    std::nth_element(dists.begin(), dists.begin() + k, dists.end());
    if (dists[k] > worst) worst = dists[k];
  }
  return worst;
}

NearestPointMap nearest_point_map(const FiniteMetricSpace& parent, const Subsample& sample) {
  NearestPointMap result;
  result.to_sample.resize(parent.size());
  std::vector<bool> in_sample(parent.size(), false);
  for (index_t x : sample.indices) in_sample[x] = true;
  for (index_t y = 0; y < parent.size(); ++y) {
    if (in_sample[y]) {
      // A sample point maps to itself even when a duplicate sits at distance 0.
      result.to_sample[y] = y;
      for (index_t x : sample.indices) {
        if (x != y && parent.d(y, x) == 0) {
          result.warnings.push_back("sample point '" + parent.label(y) +
                                    "' duplicates sample point '" + parent.label(x) + "'");
          break;
        }
      }
      continue;
    }
    index_t best = sample.indices[0];
    bool tie = false;
    for (index_t x : sample.indices) {
      if (parent.d(y, x) < parent.d(y, best)) {
        best = x;
        tie = false;
      } else if (x != best && parent.d(y, x) == parent.d(y, best)) {
        tie = true;
      }
    }
    result.to_sample[y] = best;
    if (tie) {
      result.warnings.push_back("point '" + parent.label(y) +
                                "' is equidistant to several sample points; chose '" +
                                parent.label(best) + "'");
    }
  }
  return result;
}

Subsample farthest_point_sample(const FiniteMetricSpace& space, std::size_t count,
                                std::uint64_t seed) {
  std::size_t n = space.size();
  if (count == 0 || count > n) {
    throw Error(ErrorCode::argument, "farthest point sample size must be in [1, " +
                                         std::to_string(n) + "]");
  }
  std::vector<index_t> chosen;
  chosen.push_back(static_cast<index_t>(seed % n));
  std::vector<Rational> min_dist(n);
  for (index_t y = 0; y < n; ++y) min_dist[y] = space.d(y, chosen[0]);
  while (chosen.size() < count) {
    index_t best = 0;
    for (index_t y = 1; y < n; ++y) {
      if (min_dist[y] > min_dist[best]) best = y;
    }
    chosen.push_back(best);
    for (index_t y = 0; y < n; ++y) {
      if (space.d(y, best) < min_dist[y]) min_dist[y] = space.d(y, best);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return Subsample{std::move(chosen)};
}

}  // namespace layerscope
