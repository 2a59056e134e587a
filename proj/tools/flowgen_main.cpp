// flowgen: generate, augment, degrade and evaluate two-frame optical flow
// datasets.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <mutex>
#include <thread>
#include <sstream>

#include "flowgen/analysis.hpp"
#include "flowgen/augment.hpp"
#include "flowgen/config.hpp"
#include "flowgen/degrade.hpp"
#include "flowgen/error.hpp"
#include "flowgen/io.hpp"
#include "flowgen/pipeline.hpp"
#include "flowgen/rng.hpp"

namespace fs = std::filesystem;
using namespace flowgen;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

int report_error(std::string_view code, std::string_view msg) {
  std::cerr << "error: code=" << code << " msg=\"" << escape(msg) << "\"\n";
  return kExitRuntime;
}

/// Options shared by every subcommand that resolves a GenConfig.
struct ConfigOptions {
  std::string preset;
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* app) {
    app->add_option("--preset", preset, "Start from a named preset (see `flowgen presets`)");
    app->add_option("--config", config_file, "Config file of `key = value` lines, applied after the preset");
    app->add_option("--set", sets, "Override one key, e.g. --set width=256 (repeatable, applied last)");
    app->add_option("--seed", seed, "Master seed (overrides the config)");
  }

  GenConfig resolve() const {
    GenConfig c = preset.empty() ? GenConfig{} : flowgen::preset(preset);
    if (!config_file.empty()) c = parse_config(read_file(config_file), c);
    for (const std::string& s : sets) {
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--set expects key=value, got '" + s + "'");
      set_config_value(c, s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) c.seed = *seed;
    c.validate();
    return c;
  }
};

void echo_config(const GenConfig& c) {
  std::istringstream lines(canonical_text(c));
  for (std::string line; std::getline(lines, line);) std::cerr << "config: " << line << "\n";
  std::cerr << "config-hash: " << config_hash(c) << "\n";
}

struct IndexRange {
  std::uint64_t begin = 0;
  std::optional<std::uint64_t> end;  // empty: unbounded
};

IndexRange parse_range(const std::string& count, const std::string& range) {
  if (!range.empty()) {
    const std::size_t colon = range.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::ConfigError, "--range expects lo:hi");
    IndexRange r;
    try {
      r.begin = std::stoull(range.substr(0, colon));
      r.end = std::stoull(range.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "--range expects lo:hi with unsigned integers");
    }
    if (*r.end < r.begin) throw Error(ErrorCode::ConfigError, "--range hi is below lo");
    return r;
  }
  if (count == "infinite") return {};
  try {
    std::size_t pos = 0;
    const std::uint64_t n = std::stoull(count, &pos);
    if (pos != count.size()) throw std::invalid_argument(count);
    return {0, n};
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "--count expects a number or 'infinite'");
  }
}

std::function<void(std::uint64_t, std::uint64_t)> progress_printer(bool quiet) {
  if (quiet) return {};
  return [](std::uint64_t done, std::uint64_t total) {
    const std::uint64_t step = std::max<std::uint64_t>(1, total / 20);
    if (done % step == 0 || done == total) std::cerr << "progress: " << done << "/" << total << "\n";
  };
}

std::string created_stamp(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) return env;
  return "none";
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  ConfigOptions config;
  std::string out;
  std::string count = "1";
  std::string range;
  int threads = 1;
  bool overwrite = false;
  bool quiet = false;
  std::string created;
};

int cmd_gen(const GenArgs& a) {
  const GenConfig c = a.config.resolve();
  echo_config(c);
  const IndexRange r = parse_range(a.count, a.range);
  if (a.out == "-") {
    std::signal(SIGPIPE, SIG_IGN);
    std::ios::sync_with_stdio(false);
    const std::uint64_t n = run_streaming(c, r.begin, r.end, a.threads, std::cout);
    if (!a.quiet) std::cerr << "streamed: " << n << "\n";
    return 0;
  }
  if (!r.end) throw Error(ErrorCode::ConfigError, "--count infinite needs --out - (streaming)");
  GenerationOptions opt;
  opt.out_dir = a.out;
  opt.begin = r.begin;
  opt.end = *r.end;
  opt.threads = a.threads;
  opt.overwrite = a.overwrite;
  opt.created = created_stamp(a.created);
  opt.progress = progress_printer(a.quiet);
  const GenerationStats s = run_generation(c, opt);
  if (!a.quiet) {
    std::cerr << "generated: " << s.generated << " skipped: " << s.skipped << " seconds: " << s.seconds << "\n";
  }
  return 0;
}

// ---- augment / degrade -----------------------------------------------------

struct TransformArgs {
  ConfigOptions config;
  std::string in;
  std::string out;
  std::string profile;
  int threads = 1;
  bool quiet = false;
  std::string created;
};

template <typename Fn>
void for_each_sample(const std::vector<std::uint64_t>& indices, int threads, bool quiet, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::mutex m;
  std::exception_ptr error;
  std::size_t done = 0;
  auto progress = progress_printer(quiet);
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= indices.size()) return;
      try {
        fn(indices[k]);
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        next.store(indices.size());
        return;
      }
      std::lock_guard lock(m);
      if (progress) progress(++done, indices.size());
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::uint64_t> dataset_indices(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoFailure, dir.string() + ": not a directory");
  std::vector<std::uint64_t> idx = list_flow_indices(dir);
  if (idx.empty()) throw Error(ErrorCode::NoFlowFiles, dir.string() + ": no NNNNNN_flow.flo files");
  return idx;
}

void write_transform_manifest(const fs::path& out, const GenConfig& c, const std::vector<std::uint64_t>& idx,
                              const std::string& created) {
  write_manifest(out, make_manifest(c, std::to_string(idx.front()) + " " + std::to_string(idx.back() + 1),
                                    created_stamp(created)));
}

int cmd_augment(const TransformArgs& a) {
  const GenConfig c = a.config.resolve();
  echo_config(c);
  const std::vector<std::uint64_t> idx = dataset_indices(a.in);
  fs::create_directories(a.out);
  write_transform_manifest(a.out, c, idx, a.created);
  for_each_sample(idx, a.threads, a.quiet, [&](std::uint64_t i) {
    const StoredSample s = read_sample(a.in, i);
    Rng rng = Rng(sample_seed(c.seed, i)).fork("augment");
    const AugmentedSample aug =
        augment_sample(s.frame1, s.frame2, s.flow, s.occ, c.augment, c.augment_ranges, c.augment_interp, rng);
    Sample out{aug.frame1, aug.frame2, aug.flow, aug.occ, aug.valid};
    write_sample(a.out, i, out.frame1, out.frame2, out.flow, persisted_occlusion(out));
  });
  return 0;
}

int cmd_degrade(const TransformArgs& a) {
  GenConfig c = a.config.resolve();
  if (!a.profile.empty()) {
    c.camera = camera_profile(a.profile);
    for (const std::string& s : a.config.sets) {
      const std::size_t eq = s.find('=');
      if (s.starts_with("camera.")) set_config_value(c, s.substr(0, eq), s.substr(eq + 1));
    }
  }
  echo_config(c);
  const std::vector<std::uint64_t> idx = dataset_indices(a.in);
  fs::create_directories(a.out);
  write_transform_manifest(a.out, c, idx, a.created);
  for_each_sample(idx, a.threads, a.quiet, [&](std::uint64_t i) {
    const SamplePaths src = sample_paths(a.in, i);
    const SamplePaths dst = sample_paths(a.out, i);
    ImageBuffer f1 = read_pnm(src.img1);
    ImageBuffer f2 = read_pnm(src.img2);
    apply_profile(f1, f2, c.camera);
    write_file_atomic(dst.img1, encode_pnm(f1));
    write_file_atomic(dst.img2, encode_pnm(f2));
    // Flow and occlusion pass through byte for byte.
    write_file_atomic(dst.occ, read_file(src.occ));
    write_file_atomic(dst.flow, read_file(src.flow));
  });
  return 0;
}

// ---- stats / eval ----------------------------------------------------------

struct StatsArgs {
  std::string dir;
  int bins = 40;
  double min = 0.1;
  double max = 300.0;
  double scale = 1.0;
};

int cmd_stats(const StatsArgs& a) {
  const std::vector<std::uint64_t> idx = dataset_indices(a.dir);
  DisplacementHistogram hist(scaled_edges(log_spaced_edges(a.min, a.max, a.bins), a.scale));
  for (std::uint64_t i : idx) hist.add(read_flo(sample_paths(a.dir, i).flow));
  std::cout << hist.to_csv();
  return 0;
}

struct EvalArgs {
  std::string est;
  std::string gt;
  std::vector<double> edges{0.0, 10.0, 40.0, 160.0};
  std::string csv;
};

std::string fmt_num(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

int cmd_eval(const EvalArgs& a) {
  const std::vector<std::uint64_t> est = dataset_indices(a.est);
  const std::vector<std::uint64_t> gt = dataset_indices(a.gt);
  if (est != gt) {
    std::vector<std::uint64_t> diff;
    std::set_symmetric_difference(est.begin(), est.end(), gt.begin(), gt.end(), std::back_inserter(diff));
    std::string list;
    for (std::size_t k = 0; k < diff.size() && k < 20; ++k) list += (k ? "," : "") + std::to_string(diff[k]);
    if (diff.size() > 20) list += ",...";
    throw Error(ErrorCode::SampleMismatch, "indices present in only one directory: " + list);
  }
  std::vector<MagnitudeRange> ranges;
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    ranges.push_back({a.edges[k], k + 1 < a.edges.size() ? a.edges[k + 1] : std::numeric_limits<double>::infinity()});
  }
  EpeAccumulator acc(ranges);
  for (std::uint64_t i : gt) acc.add(read_flo(sample_paths(a.est, i).flow), read_flo(sample_paths(a.gt, i).flow));
  const EpeReport rep = acc.report();

  std::cout << "samples " << gt.size() << "\n";
  std::cout << "pixels " << rep.pixel_count << "\n";
  std::cout << "total_epe " << fmt_num(rep.total_epe) << "\n";
  std::string csv = "range_lo,range_hi,contribution,pixels\n";
  for (const auto& p : rep.partial) {
    std::cout << "partial " << fmt_num(p.range.lo) << "-" << fmt_num(p.range.hi) << " " << fmt_num(p.contribution)
              << " " << p.pixels << "\n";
    csv += fmt_num(p.range.lo) + "," + fmt_num(p.range.hi) + "," + fmt_num(p.contribution) + "," +
           std::to_string(p.pixels) + "\n";
  }
  csv += "total,," + fmt_num(rep.total_epe) + "," + std::to_string(rep.pixel_count) + "\n";
  if (!a.csv.empty()) write_file_atomic(a.csv, csv);
  return 0;
}

// ---- presets ---------------------------------------------------------------

struct PresetArgs {
  std::string show;
  std::string dump;
};

int cmd_presets(const PresetArgs& a) {
  if (!a.show.empty()) {
    std::cout << canonical_text(preset(a.show));
    return 0;
  }
  if (!a.dump.empty()) {
    fs::create_directories(a.dump);
    for (const std::string& name : preset_names()) {
      std::string text = "# " + name + "\n";
      for (const auto& [k, v] : preset_overrides(name)) text += k + " = " + v + "\n";
      write_file_atomic(fs::path(a.dump) / (name + ".cfg"), text);
    }
    return 0;
  }
  for (const std::string& name : preset_names()) std::cout << name << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural two-frame optical flow dataset generator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen", "Generate samples into a directory or stream them");
  gen.config.add_to(g);
  g->add_option("--out", gen.out, "Output directory, or - to stream records to standard output")->required();
  g->add_option("--count", gen.count, "Number of samples starting at index 0, or 'infinite'");
  g->add_option("--range", gen.range, "Index range lo:hi (hi exclusive); overrides --count");
  g->add_option("--threads", gen.threads, "Worker threads")->check(CLI::Range(1, 1024));
  g->add_flag("--overwrite", gen.overwrite, "Regenerate samples that already exist");
  g->add_flag("--quiet", gen.quiet, "No progress output");
  g->add_option("--created", gen.created, "Manifest creation stamp (default: $SOURCE_DATE_EPOCH or 'none')");

  TransformArgs aug;
  CLI::App* au = app.add_subcommand("augment", "Augment an existing dataset with the config's augment switches");
  aug.config.add_to(au);
  au->add_option("--in", aug.in, "Input dataset directory")->required();
  au->add_option("--out", aug.out, "Output dataset directory")->required();
  au->add_option("--threads", aug.threads, "Worker threads")->check(CLI::Range(1, 1024));
  au->add_flag("--quiet", aug.quiet, "No progress output");
  au->add_option("--created", aug.created, "Manifest creation stamp");

  TransformArgs deg;
  CLI::App* de = app.add_subcommand("degrade", "Apply a camera profile to an existing dataset");
  deg.config.add_to(de);
  de->add_option("--in", deg.in, "Input dataset directory")->required();
  de->add_option("--out", deg.out, "Output dataset directory")->required();
  de->add_option("--profile", deg.profile, "Camera profile: none, bumblebee, bayer");
  de->add_option("--threads", deg.threads, "Worker threads")->check(CLI::Range(1, 1024));
  de->add_flag("--quiet", deg.quiet, "No progress output");
  de->add_option("--created", deg.created, "Manifest creation stamp");

  StatsArgs st;
  CLI::App* s = app.add_subcommand("stats", "Displacement-magnitude histogram of a dataset as CSV");
  s->add_option("dir", st.dir, "Dataset directory")->required();
  s->add_option("--bins", st.bins, "Number of log-spaced bins")->check(CLI::Range(1, 10000));
  s->add_option("--min", st.min, "Lowest bin edge (px)");
  s->add_option("--max", st.max, "Highest bin edge (px)");
  s->add_option("--scale", st.scale, "Multiply all bin edges by this factor");

  EvalArgs ev;
  CLI::App* e = app.add_subcommand("eval", "Endpoint error of estimated flow against ground truth");
  e->add_option("--est", ev.est, "Directory of estimated NNNNNN_flow.flo files")->required();
  e->add_option("--gt", ev.gt, "Ground-truth dataset directory")->required();
  e->add_option("--ranges", ev.edges, "Lower edges of the magnitude ranges (last range is open)")->delimiter(',');
  e->add_option("--csv", ev.csv, "Also write the report as CSV to this file");

  PresetArgs pr;
  CLI::App* p = app.add_subcommand("presets", "List presets, show one, or dump all as config files");
  p->add_option("--show", pr.show, "Print the canonical config of one preset");
  p->add_option("--dump", pr.dump, "Write every preset as NAME.cfg into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (au->parsed()) return cmd_augment(aug);
    if (de->parsed()) return cmd_degrade(deg);
    if (s->parsed()) return cmd_stats(st);
    if (e->parsed()) return cmd_eval(ev);
    if (p->parsed()) return cmd_presets(pr);
  } catch (const Error& err) {
    return report_error(code_name(err.code()), err.what());
  } catch (const std::exception& err) {
    return report_error("Internal", err.what());
  }
  return kExitUsage;
}
