// Command-line front end. Everything substantive lives behind the C API in
// layerscope.h; this file only does argument plumbing and file I/O.

#include <layerscope.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitError = 2;

const char* status_name(ls_status status) {
  switch (status) {
    case LS_OK: return "ok";
    case LS_ERROR_PARSE: return "parse";
    case LS_ERROR_VALIDATION: return "validation";
    case LS_ERROR_ARGUMENT: return "argument";
    case LS_ERROR_INTERNAL: return "internal";
  }
  return "internal";
}

// Machine-readable error object on stderr, one line.
int emit_error(const std::string& status, const std::string& message) {
  std::string escaped;
  for (char ch : message) {
    switch (ch) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      case '\t': escaped += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          escaped += buf;
        } else {
          escaped += ch;
        }
    }
  }
  std::cerr << "{\"schema\": \"layerscope/error/1\", \"status\": \"" << status
            << "\", \"message\": \"" << escaped << "\"}\n";
  return kExitError;
}

int emit_ls_error(ls_status status) { return emit_error(status_name(status), ls_last_error()); }

struct StringDeleter {
  void operator()(char* s) const { ls_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct SpaceDeleter {
  void operator()(ls_space* s) const { ls_space_free(s); }
};
using OwnedSpace = std::unique_ptr<ls_space, SpaceDeleter>;

struct ClusteringDeleter {
  void operator()(ls_clustering* c) const { ls_clustering_free(c); }
};
using OwnedClustering = std::unique_ptr<ls_clustering, ClusteringDeleter>;

struct InputOptions {
  std::string matrix_path;
  std::string points_path;
  std::string metric = "euclidean";
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  auto* matrix = cmd->add_option("--matrix", in.matrix_path,
                                 "Distance-matrix CSV (header row of labels, square matrix)");
  auto* points = cmd->add_option("--points", in.points_path,
                                 "Point-cloud CSV, rows label,x1,...,xd without a header");
  cmd->add_option("--metric", in.metric,
                  "Metric for --points: euclidean, manhattan or chebyshev");
  matrix->excludes(points);
  points->excludes(matrix);
}

std::optional<std::string> read_file(const std::string& path, std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot open file: " + path;
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    error = "read failed: " + path;
    return std::nullopt;
  }
  return buffer.str();
}

// Loads the space described by the input options; on failure prints the error
// object and returns null with exit_code set.
OwnedSpace load_space(const InputOptions& in, int& exit_code) {
  if (in.matrix_path.empty() && in.points_path.empty()) {
    exit_code = emit_error("argument", "one of --matrix or --points is required");
    return nullptr;
  }
  std::string io_error;
  auto text = read_file(in.matrix_path.empty() ? in.points_path : in.matrix_path, io_error);
  if (!text) {
    exit_code = emit_error("argument", io_error);
    return nullptr;
  }
  ls_space* space = nullptr;
  ls_status status = in.matrix_path.empty()
                         ? ls_space_from_points_csv(text->c_str(), in.metric.c_str(), &space)
                         : ls_space_from_matrix_csv(text->c_str(), &space);
  if (status != LS_OK) {
    exit_code = emit_ls_error(status);
    return nullptr;
  }
  return OwnedSpace(space);
}

int write_output(const std::string& path, const char* payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << payload;
  if (!out) return emit_error("argument", "cannot write file: " + path);
  return 0;
}

struct SubsampleOptions {
  std::string list;
  std::string file;
  std::size_t fps_count = 0;
  std::uint64_t seed = 0;
};

void add_subsample_options(CLI::App* cmd, SubsampleOptions& sub) {
  auto* list = cmd->add_option("--subsample", sub.list, "Comma-separated parent indices");
  auto* file = cmd->add_option("--subsample-file", sub.file,
                               "File of whitespace-separated parent indices");
  auto* fps = cmd->add_option("--fps", sub.fps_count,
                              "Farthest-point subsample of this size (seeded)");
  cmd->add_option("--seed", sub.seed, "Seed for --fps");
  list->excludes(file)->excludes(fps);
  file->excludes(list)->excludes(fps);
  fps->excludes(list)->excludes(file);
}

bool parse_index_text(const std::string& text, char separator, std::vector<std::size_t>& out,
                      std::string& error) {
  std::string token;
  std::istringstream stream(text);
  auto take = [&](const std::string& tok) {
    if (tok.empty()) return true;
    try {
      std::size_t used = 0;
      unsigned long long value = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<std::size_t>(value));
      return true;
    } catch (const std::exception&) {
      error = "invalid subsample index: " + tok;
      return false;
    }
  };
  if (separator == ',') {
    while (std::getline(stream, token, ',')) {
      if (!take(token)) return false;
    }
  } else {
    while (stream >> token) {
      if (!take(token)) return false;
    }
  }
  return true;
}

// Resolves the subsample flags to an index list, or reports and sets exit_code.
bool resolve_subsample(const SubsampleOptions& sub, const ls_space* space,
                       std::vector<std::size_t>& out, int& exit_code) {
  std::string error;
  if (!sub.list.empty()) {
    if (!parse_index_text(sub.list, ',', out, error)) {
      exit_code = emit_error("parse", error);
      return false;
    }
    return true;
  }
  if (!sub.file.empty()) {
    auto text = read_file(sub.file, error);
    if (!text) {
      exit_code = emit_error("argument", error);
      return false;
    }
    if (!parse_index_text(*text, ' ', out, error)) {
      exit_code = emit_error("parse", error);
      return false;
    }
    return true;
  }
  if (sub.fps_count > 0) {
    size_t* indices = nullptr;
    size_t len = 0;
    ls_status status = ls_farthest_point_sample(space, sub.fps_count, sub.seed, &indices, &len);
    if (status != LS_OK) {
      exit_code = emit_ls_error(status);
      return false;
    }
    out.assign(indices, indices + len);
    ls_indices_free(indices);
    return true;
  }
  exit_code = emit_error("argument", "one of --subsample, --subsample-file or --fps is required");
  return false;
}

int run_cluster(const InputOptions& in, int k_max, const std::string& format,
                const std::string& output) {
  int exit_code = 0;
  OwnedSpace space = load_space(in, exit_code);
  if (!space) return exit_code;
  ls_clustering* raw = nullptr;
  ls_status status = ls_degree_rips(space.get(), k_max, &raw);
  if (status != LS_OK) return emit_ls_error(status);
  OwnedClustering clustering(raw);
  char* payload = nullptr;
  status = format == "dot" ? ls_gamma_dot(clustering.get(), &payload)
                           : ls_clustering_json(clustering.get(), &payload);
  if (status != LS_OK) return emit_ls_error(status);
  OwnedString owned(payload);
  return write_output(output, owned.get());
}

int run_layer_points(const InputOptions& in, int k_max, bool global, bool branch, int slice_axis,
                     const std::string& format, const std::string& output) {
  int exit_code = 0;
  OwnedSpace space = load_space(in, exit_code);
  if (!space) return exit_code;
  ls_clustering* raw = nullptr;
  ls_status status = ls_degree_rips(space.get(), k_max, &raw);
  if (status != LS_OK) return emit_ls_error(status);
  OwnedClustering clustering(raw);

  unsigned families = 0;
  if (global || (slice_axis > 0 && !branch)) families |= LS_LAYER_POINTS;
  if (branch) families |= LS_BRANCH_POINTS;
  if (families == 0) families = LS_LAYER_POINTS;

  char* payload = nullptr;
  status = format == "dot"
               ? ls_layer_points_dot(clustering.get(), families, slice_axis, &payload)
               : ls_layer_points_json(clustering.get(), families, slice_axis, &payload);
  if (status != LS_OK) return emit_ls_error(status);
  OwnedString owned(payload);
  return write_output(output, owned.get());
}

struct RetractOptions {
  InputOptions in;
  SubsampleOptions sub;
  int k = 1;
  std::string c, eps, delta;
  bool force_merge_index = false;
  std::string corollary = "main";
  std::string output;
};

int run_retract_check(const RetractOptions& opt) {
  int exit_code = 0;
  OwnedSpace space = load_space(opt.in, exit_code);
  if (!space) return exit_code;

  const char* c = opt.c.empty() ? nullptr : opt.c.c_str();
  const char* eps = opt.eps.empty() ? nullptr : opt.eps.c_str();
  const char* delta = opt.delta.empty() ? nullptr : opt.delta.c_str();
  int force = opt.force_merge_index ? 1 : 0;

  char* report = nullptr;
  int outcome = 0;
  ls_status status = LS_OK;
  if (opt.corollary == "truncation") {
    status = ls_truncation_check(space.get(), c, force, &report, &outcome);
  } else if (opt.corollary == "xy-note") {
    status = ls_xy_note_check(space.get(), opt.k, c, eps, delta, &report, &outcome);
  } else {
    std::vector<std::size_t> indices;
    if (!resolve_subsample(opt.sub, space.get(), indices, exit_code)) return exit_code;
    if (opt.corollary == "smallparam") {
      status = ls_smallparam_check(space.get(), indices.data(), indices.size(), opt.k, force,
                                   &report, &outcome);
    } else {
      status = ls_retract_check(space.get(), indices.data(), indices.size(), opt.k, c, eps,
                                delta, force, &report, &outcome);
    }
  }
  if (status != LS_OK) return emit_ls_error(status);
  OwnedString owned(report);
  int write_status = write_output(opt.output, owned.get());
  return write_status != 0 ? write_status : outcome;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-Rips clusterings, layer-point posets and retract checks"};
  app.require_subcommand(1);

  InputOptions cluster_in;
  int cluster_kmax = 1;
  std::string cluster_format = "json";
  std::string cluster_output;
  auto* cluster = app.add_subcommand("cluster", "Compute a degree-Rips clustering");
  add_input_options(cluster, cluster_in);
  cluster->add_option("--kmax", cluster_kmax, "Largest vertex degree of the model")
      ->check(CLI::NonNegativeNumber);
  cluster->add_option("--format", cluster_format, "json (step clustering) or dot (poset)")
      ->check(CLI::IsMember({"json", "dot"}));
  cluster->add_option("--output", cluster_output, "Output path, - for stdout");

  InputOptions points_in;
  int points_kmax = 1;
  bool points_global = false;
  bool points_branch = false;
  int points_slice = 0;
  std::string points_format = "json";
  std::string points_output;
  auto* layer_points = app.add_subcommand("layer-points", "Layer and branch points of the poset");
  add_input_options(layer_points, points_in);
  layer_points->add_option("--kmax", points_kmax, "Largest vertex degree of the model")
      ->check(CLI::NonNegativeNumber);
  layer_points->add_flag("--global", points_global, "Global layer points (the default family)");
  layer_points->add_flag("--branch", points_branch, "Branch points instead of layer points");
  layer_points
      ->add_option("--slice", points_slice,
                   "Restrict to the slice points of one axis (1-based)")
      ->check(CLI::PositiveNumber);
  layer_points->add_option("--format", points_format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));
  layer_points->add_option("--output", points_output, "Output path, - for stdout");

  RetractOptions retract;
  auto* retract_check =
      app.add_subcommand("retract-check", "Verify the subsample retract and its special cases");
  add_input_options(retract_check, retract.in);
  add_subsample_options(retract_check, retract.sub);
  retract_check->add_option("--k", retract.k, "Degree parameter of the ambient clustering")
      ->check(CLI::NonNegativeNumber);
  retract_check->add_option("--c", retract.c, "Truncation level (decimal, default 0)");
  retract_check->add_option("--eps", retract.eps, "Interleaving shift (decimal, default N_k)");
  retract_check->add_option("--delta", retract.delta,
                            "Return shift (decimal, default max(2h, N_k - eps))");
  retract_check->add_flag("--force-merge-index", retract.force_merge_index,
                          "Use the largest phase-change index instead of the merge index");
  retract_check
      ->add_option("--corollary", retract.corollary,
                   "main, smallparam, truncation or xy-note")
      ->check(CLI::IsMember({"main", "smallparam", "truncation", "xy-note"}));
  retract_check->add_option("--output", retract.output, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    return emit_error("argument", e.what());
  }

  if (cluster->parsed()) return run_cluster(cluster_in, cluster_kmax, cluster_format, cluster_output);
  if (layer_points->parsed())
    return run_layer_points(points_in, points_kmax, points_global, points_branch, points_slice,
                            points_format, points_output);
  return run_retract_check(retract);
}
