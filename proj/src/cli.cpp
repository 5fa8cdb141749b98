#include "qwedge/cli.hpp"

#include "qwedge/baselines.hpp"
#include "qwedge/blocks1d.hpp"
#include "qwedge/image.hpp"
#include "qwedge/lattice2d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace qwedge {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Flag values that are valid for CLI11 but rejected by the run itself.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ImageError("cannot write " + path.string());
  return f;
}

void write_curve(const SuccessCurve& curve, const fs::path& path) {
  auto f = open_output(path);
  f << "step,p_s\n";
  for (std::size_t t = 0; t < curve.values.size(); ++t) {
    f << t << "," << fmt_double(curve.values[t]) << "\n";
  }
}

void write_summary(const ordered_json& summary, const fs::path& path) {
  auto f = open_output(path);
  f << summary.dump(2) << "\n";
}

ordered_json base_summary(const std::string& method) {
  ordered_json j;
  j["tool"] = "qwalk-edge";
  j["version"] = kVersion;
  j["method"] = method;
  return j;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ImageError("cannot create output directory " + dir.string());
}

// ---------------------------------------------------------------------------

struct DetectOptions {
  std::string input;
  std::string coin = "cg";
  double s = 0.01;
  std::string steps = "auto";
  long horizon = 1000;
  double a_th = 0.5;
  std::optional<double> p_th;
  std::string out_dir;
};

int cmd_detect(const DetectOptions& o, std::ostream& out) {
  Stopwatch clock;
  const CoinKind kind = parse_coin_kind(o.coin);
  const bool auto_steps = o.steps == "auto";
  long steps = 0;
  if (!auto_steps) {
    try {
      std::size_t used = 0;
      steps = std::stol(o.steps, &used);
      if (used != o.steps.size() || steps < 0) throw std::invalid_argument(o.steps);
    } catch (const std::exception&) {
      throw UsageError("--steps must be a nonnegative integer or 'auto'");
    }
  }
  if (auto_steps && o.horizon < 0) throw UsageError("--horizon must be >= 0");

  const Image img = load_image(o.input);
  const fs::path dir(o.out_dir);
  prepare_out_dir(dir);

  const MarkedSet marked = mark(gradient_field(img), o.a_th);
  const double n = static_cast<double>(img.size());
  const double p_th = o.p_th.value_or(2.0 / n);

  WalkParams params{kind, o.s, auto_steps ? o.horizon : steps, o.a_th};
  SearchResult result = run_search(marked, params);
  const SuccessCurve curve = result.curve;
  long chosen_t = params.t;
  if (auto_steps) {
    chosen_t = curve.argmax_t();
    params.t = chosen_t;
    result = run_search(marked, params);
  }

  const ProbabilityMap raw = edge_map_raw(result.final_state, img.width(), img.height());
  const Image edges = binarize(raw, p_th);
  const double raw_scale = write_image(raw, dir / "raw.png");
  write_image(edges, dir / "edge.png");
  write_curve(curve, dir / "curve.csv");

  ordered_json j = base_summary("qws2d");
  j["input"] = o.input;
  j["params"] = {{"coin", std::string(to_string(kind))},
                 {"s", o.s},
                 {"steps", o.steps},
                 {"horizon", auto_steps ? o.horizon : steps},
                 {"t", chosen_t},
                 {"a_th", o.a_th},
                 {"p_th", p_th}};
  j["width"] = img.width();
  j["height"] = img.height();
  j["N"] = img.size();
  j["M"] = marked.size();
  j["metrics"] = {{"p_s", curve.values[static_cast<std::size_t>(chosen_t)]},
                  {"p_s_initial", curve.values.front()},
                  {"max_p_s", curve.max()},
                  {"argmax_t", curve.argmax_t()},
                  {"bound_M_over_N", static_cast<double>(marked.size()) / n}};
  j["raw_display_scale"] = raw_scale;
  j["outputs"] = {(dir / "edge.png").string(), (dir / "raw.png").string(),
                  (dir / "curve.csv").string(), (dir / "summary.json").string()};
  j["wall_seconds"] = clock.seconds();
  write_summary(j, dir / "summary.json");
  out << "qws2d: N=" << img.size() << " M=" << marked.size() << " t=" << chosen_t
      << " p_s=" << fmt_double(curve.values[static_cast<std::size_t>(chosen_t)]) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BlocksOptions {
  std::string input;
  double s = 0.1;
  long steps = 2;
  double a_th = 0.5;
  double p_th = 0.2;
  std::optional<long> shots;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_blocks(const BlocksOptions& o, std::ostream& out) {
  Stopwatch clock;
  if (o.steps < 0) throw UsageError("--steps must be >= 0");
  if (o.shots && *o.shots < 1) throw UsageError("--shots must be >= 1");
  const Image img = pad_to_even(load_image(o.input));
  const fs::path dir(o.out_dir);
  prepare_out_dir(dir);

  BlocksParams params{o.s, o.steps, o.a_th, o.p_th, o.shots, o.seed};
  const BlocksResult r = run_blocks(img, params);

  const double raw_scale = write_image(r.raw, dir / "raw.png");
  write_image(r.edges, dir / "edge.png");
  {
    auto f = open_output(dir / "blocks.csv");
    f << "block_x,block_y,m_local,p_s_block,estimated_p\n";
    for (const BlockReport& b : r.blocks) {
      f << b.block_x << "," << b.block_y << "," << b.m_local << "," << fmt_double(b.p_s_block) << ","
        << (b.estimated_p ? fmt_double(*b.estimated_p) : std::string()) << "\n";
    }
  }

  ordered_json j = base_summary("blocks1d");
  j["input"] = o.input;
  ordered_json p = {{"s", o.s}, {"t", o.steps}, {"a_th", o.a_th}, {"p_th", o.p_th}};
  if (o.shots) {
    p["shots"] = *o.shots;
    p["seed"] = o.seed;
  }
  j["params"] = p;
  j["width"] = img.width();
  j["height"] = img.height();
  j["N"] = img.size();
  Index m = 0;
  for (const BlockReport& b : r.blocks) m += b.m_local;
  j["M"] = m;
  j["metrics"] = {{"p_s_bar", r.mean_success},
                  {"p_s_bar_all_blocks", r.mean_success_all},
                  {"marked_blocks", r.marked_blocks},
                  {"total_blocks", static_cast<Index>(r.blocks.size())},
                  {"no_marked_blocks", r.marked_blocks == 0},
                  {"mode", o.shots ? "shots" : "exact"}};
  j["raw_display_scale"] = raw_scale;
  j["outputs"] = {(dir / "edge.png").string(), (dir / "raw.png").string(),
                  (dir / "blocks.csv").string(), (dir / "summary.json").string()};
  j["wall_seconds"] = clock.seconds();
  write_summary(j, dir / "summary.json");
  out << "blocks1d: blocks=" << r.blocks.size() << " marked=" << r.marked_blocks
      << " p_s_bar=" << fmt_double(r.mean_success) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BaselineOptions {
  std::string method;
  std::string input;
  double a_th = 0.5;
  std::string out_dir;
};

int cmd_baseline(const BaselineOptions& o, std::ostream& out) {
  Stopwatch clock;
  const Image img = load_image(o.input);
  const fs::path dir(o.out_dir);
  prepare_out_dir(dir);

  ordered_json j = base_summary(o.method);
  j["input"] = o.input;
  j["params"] = {{"a_th", o.a_th}};
  j["width"] = img.width();
  j["height"] = img.height();
  j["N"] = img.size();

  Image edges;
  ProbabilityMap raw;
  if (o.method == "hed") {
    // An all-black image has no amplitude encoding; it has no edges either.
    const bool dark = img.pixels.maxCoeff() <= 0.0;
    HedOutput h;
    if (dark) {
      h.edges = Image(img.width(), img.height());
      h.raw = ProbabilityMap(Grid::Zero(img.height(), img.width()));
    } else {
      h = hed(img, o.a_th);
    }
    edges = h.edges;
    raw = h.raw;
    j["M"] = static_cast<Index>(edges.pixels.sum());
    j["metrics"] = {{"p_h", h.result.p_h}, {"p_h_tilde", h.result.p_h_tilde}, {"p_h_bar", h.result.p_h_bar}};
    out << "hed: p_h_bar=" << fmt_double(h.result.p_h_bar) << "\n";
  } else if (o.method == "qsobel") {
    const QSobelOutput q = qsobel(img, o.a_th);
    edges = q.edges;
    raw = q.raw;
    j["M"] = q.marked.size();
    j["metrics"] = {{"p_q", q.p_q}, {"bound_M_over_N", q.bound}};
    out << "qsobel: p_q=" << fmt_double(q.p_q) << " M/N=" << fmt_double(q.bound) << "\n";
  } else {
    raw = ProbabilityMap(normalized_sobel(img));
    edges = binarize(raw, o.a_th);
    j["M"] = static_cast<Index>(edges.pixels.sum());
    j["metrics"] = ordered_json::object();
    out << "sobel: edge pixels=" << static_cast<Index>(edges.pixels.sum()) << "\n";
  }

  j["raw_display_scale"] = write_image(raw, dir / "raw.png");
  write_image(edges, dir / "edge.png");
  j["outputs"] = {(dir / "edge.png").string(), (dir / "raw.png").string(), (dir / "summary.json").string()};
  j["wall_seconds"] = clock.seconds();
  write_summary(j, dir / "summary.json");
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepOptions {
  std::string input;
  std::vector<std::string> coins{"cg"};
  std::vector<double> s_grid;
  long horizon = 1000;
  double a_th = 0.5;
  std::string out_dir;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  Stopwatch clock;
  if (o.s_grid.empty()) throw UsageError("--s-grid must not be empty");
  if (o.coins.empty()) throw UsageError("--coins must not be empty");
  if (o.horizon < 0) throw UsageError("--horizon must be >= 0");
  for (double s : o.s_grid) {
    if (!(s >= 0.0)) throw UsageError("--s-grid values must be >= 0");
  }
  std::vector<CoinKind> kinds;
  for (const auto& c : o.coins) kinds.push_back(parse_coin_kind(c));

  const Image img = load_image(o.input);
  const fs::path dir(o.out_dir);
  prepare_out_dir(dir);

  const std::vector<SweepRow> rows = sweep(img, kinds, o.s_grid, o.horizon, o.a_th);
  const MarkedSet marked = mark(gradient_field(img), o.a_th);

  ordered_json table = ordered_json::array();
  std::vector<std::string> outputs{(dir / "sweep.csv").string()};
  {
    auto f = open_output(dir / "sweep.csv");
    f << "kind,s,argmax_t,max_p_s\n";
    for (const SweepRow& r : rows) {
      const std::string kind(to_string(r.kind));
      f << kind << "," << fmt_double(r.s) << "," << r.argmax_t << "," << fmt_double(r.max_p_s) << "\n";
      const fs::path curve = dir / ("curve_" + kind + "_s" + fmt_double(r.s) + ".csv");
      write_curve(r.curve, curve);
      outputs.push_back(curve.string());
      table.push_back({{"kind", kind}, {"s", r.s}, {"argmax_t", r.argmax_t}, {"max_p_s", r.max_p_s}});
    }
  }
  outputs.push_back((dir / "summary.json").string());

  ordered_json j = base_summary("sweep");
  j["input"] = o.input;
  j["params"] = {{"coins", o.coins}, {"s_grid", o.s_grid}, {"horizon", o.horizon}, {"a_th", o.a_th}};
  j["width"] = img.width();
  j["height"] = img.height();
  j["N"] = img.size();
  j["M"] = marked.size();
  j["rows"] = table;
  j["outputs"] = outputs;
  j["wall_seconds"] = clock.seconds();
  write_summary(j, dir / "summary.json");
  out << "sweep: " << rows.size() << " cells\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-walk search edge detection", "qwalk-edge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  DetectOptions detect;
  auto* d = app.add_subcommand("detect", "2D quantum-walk search over the whole image");
  d->add_option("--input", detect.input, "Input PGM/PNG")->required();
  d->add_option("--coin", detect.coin, "Coin kind")->check(CLI::IsMember({"grover", "skw", "cg"}));
  d->add_option("--self-loop-weight", detect.s, "Self-loop weight s")->check(CLI::NonNegativeNumber);
  d->add_option("--steps", detect.steps, "Iteration count, or 'auto' for the best t within --horizon");
  d->add_option("--horizon", detect.horizon, "Horizon for --steps auto");
  d->add_option("--threshold", detect.a_th, "Gradient marking threshold a_th")->check(CLI::PositiveNumber);
  d->add_option("--edge-threshold", detect.p_th, "Probability threshold p_th (default 2/N)")
      ->check(CLI::NonNegativeNumber);
  d->add_option("--out-dir", detect.out_dir, "Output directory")->required();

  BlocksOptions blocks;
  auto* b = app.add_subcommand("blocks", "Per-2x2-block walk on a 4-cycle");
  b->add_option("--input", blocks.input, "Input PGM/PNG")->required();
  b->add_option("--self-loop-weight", blocks.s, "Total self-loop weight s")->check(CLI::NonNegativeNumber);
  b->add_option("--steps", blocks.steps, "Iteration count t");
  b->add_option("--threshold", blocks.a_th, "Gradient marking threshold a_th")->check(CLI::PositiveNumber);
  b->add_option("--edge-threshold", blocks.p_th, "Per-pixel probability threshold p_th")
      ->check(CLI::NonNegativeNumber);
  b->add_option("--shots", blocks.shots, "Sample this many shots per block");
  b->add_option("--seed", blocks.seed, "Master seed for shot sampling");
  b->add_option("--out-dir", blocks.out_dir, "Output directory")->required();

  BaselineOptions baseline;
  auto* bl = app.add_subcommand("baseline", "Hadamard, QSobel or classical Sobel edge detection");
  bl->add_option("--method", baseline.method, "Baseline method")
      ->required()
      ->check(CLI::IsMember({"hed", "qsobel", "sobel"}));
  bl->add_option("--input", baseline.input, "Input PGM/PNG")->required();
  bl->add_option("--threshold", baseline.a_th, "Edge threshold")->check(CLI::NonNegativeNumber);
  bl->add_option("--out-dir", baseline.out_dir, "Output directory")->required();

  SweepOptions sw;
  auto* s = app.add_subcommand("sweep", "Grid over coin kinds and self-loop weights");
  s->add_option("--input", sw.input, "Input PGM/PNG")->required();
  s->add_option("--coins", sw.coins, "Comma-separated coin kinds")
      ->delimiter(',')
      ->check(CLI::IsMember({"grover", "skw", "cg"}));
  s->add_option("--s-grid", sw.s_grid, "Comma-separated self-loop weights")
      ->required()
      ->delimiter(',')
      ->check(CLI::Number);
  s->add_option("--horizon", sw.horizon, "Steps per cell");
  s->add_option("--threshold", sw.a_th, "Gradient marking threshold a_th")->check(CLI::PositiveNumber);
  s->add_option("--out-dir", sw.out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qwalk-edge: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*d) return cmd_detect(detect, out);
    if (*b) return cmd_blocks(blocks, out);
    if (*bl) return cmd_baseline(baseline, out);
    if (*s) return cmd_sweep(sw, out);
  } catch (const UsageError& e) {
    err << "qwalk-edge: " << e.what() << "\n";
    return 2;
  } catch (const ImageError& e) {
    err << "qwalk-edge: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "qwalk-edge: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "qwalk-edge: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args) { return run_cli(args, std::cout, std::cerr); }

}  // namespace qwedge
