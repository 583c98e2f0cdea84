// Copyright 2026 The quadsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// quadsynth command-line tool. Uses only the public C API.

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadsynth/quadsynth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

void check(qs_status s, const std::string& what, int exit_code = kExitRuntime) {
  if (s != QS_OK) throw Failure{exit_code, what + ": " + qs_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<qs_config, Deleter<qs_config, qs_config_destroy>>;
using SourcesPtr = std::unique_ptr<qs_sources, Deleter<qs_sources, qs_sources_destroy>>;
using ImagePtr = std::unique_ptr<qs_image, Deleter<qs_image, qs_image_destroy>>;
using ReportPtr = std::unique_ptr<qs_eval_report, Deleter<qs_eval_report, qs_eval_report_destroy>>;

std::vector<double> parse_numbers(const std::string& text, std::size_t count,
                                  const std::string& flag) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Failure{kExitUsage, flag + ": not a number: " + tok};
    v.push_back(x);
  }
  if (v.size() != count) {
    throw Failure{kExitUsage, flag + " expects " + std::to_string(count) + " numbers, got " +
                                  std::to_string(v.size())};
  }
  return v;
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') ||
      w < 1 || h < 1) {
    throw Failure{kExitUsage, "--size expects WxH, got " + text};
  }
  return {w, h};
}

/// Config from an optional file, then --set overrides, then dedicated flags.
ConfigPtr build_config(const std::string& path, const std::vector<std::string>& sets) {
  qs_config* raw = nullptr;
  if (path.empty()) {
    check(qs_config_create(&raw), "config");
  } else {
    check(qs_config_load(path.c_str(), &raw), "config " + path);
  }
  ConfigPtr cfg(raw);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Failure{kExitUsage, "--set expects /json/pointer=value, got " + s};
    }
    check(qs_config_set(cfg.get(), s.substr(0, eq).c_str(), s.substr(eq + 1).c_str()),
          "--set " + s, kExitUsage);
  }
  return cfg;
}

void set_number(qs_config* cfg, const char* pointer, std::uint64_t v) {
  check(qs_config_set(cfg, pointer, std::to_string(v).c_str()), pointer);
}

void print_timings(const qs_step_timings& t, std::uint64_t n) {
  const double total = t.screen + t.transform + t.composite + t.perturb + t.encode;
  const struct {
    const char* name;
    double seconds;
  } rows[] = {{"screen", t.screen},   {"transform", t.transform}, {"composite", t.composite},
              {"perturb", t.perturb}, {"encode", t.encode}};
  std::printf("%-10s %12s %8s\n", "step", "ms/sample", "share");
  for (const auto& r : rows) {
    std::printf("%-10s %12.3f %7.1f%%\n", r.name, n ? 1e3 * r.seconds / n : 0.0,
                total > 0 ? 100.0 * r.seconds / total : 0.0);
  }
}

struct GenerateArgs {
  std::string fg, bg, out, config;
  std::vector<std::string> sets;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

int run_generate(const GenerateArgs& a) {
  ConfigPtr cfg = build_config(a.config, a.sets);
  if (a.seed) set_number(cfg.get(), "/seed", *a.seed);
  if (a.workers) set_number(cfg.get(), "/workers", static_cast<std::uint64_t>(*a.workers));
  qs_sources* raw = nullptr;
  check(qs_sources_load(cfg.get(), a.fg.c_str(), a.bg.c_str(), &raw), "sources");
  SourcesPtr sources(raw);
  qs_summary sum{};
  check(qs_generate_dataset(cfg.get(), sources.get(), a.n, a.out.c_str(), &sum), "generate");
  std::printf("generated %" PRIu64 " samples in %.3f s (%.2f samples/s) -> %s\n", sum.written,
              sum.seconds, sum.samples_per_second, a.out.c_str());
  if (sum.skipped_sources > 0) {
    std::printf("skipped %" PRIu64 " unreadable source files\n", sum.skipped_sources);
  }
  return kExitOk;
}

struct RectifyArgs {
  std::string photo, matrix, quad, out, size;
  int quality = 95;
};

int run_rectify(const RectifyArgs& a) {
  qs_image* raw = nullptr;
  check(qs_image_load(a.photo.c_str(), &raw), "photo");
  ImagePtr photo(raw);
  const int pw = qs_image_width(photo.get());
  const int ph = qs_image_height(photo.get());

  double theta[8];
  if (!a.matrix.empty()) {
    const auto v = parse_numbers(a.matrix, 8, "--matrix");
    std::copy(v.begin(), v.end(), theta);
  } else {
    // Pixel coordinates: (0,0) is the top-left image corner, (W,H) the
    // bottom-right one.
    const auto v = parse_numbers(a.quad, 8, "--quad");
    double quad[8];
    for (int i = 0; i < 4; ++i) {
      quad[2 * i] = 2.0 * v[static_cast<std::size_t>(2 * i)] / pw - 1.0;
      quad[2 * i + 1] = 2.0 * v[static_cast<std::size_t>(2 * i + 1)] / ph - 1.0;
    }
    check(qs_matrix_from_quad(quad, theta), "--quad");
  }
  int w = pw, h = ph;
  if (!a.size.empty()) std::tie(w, h) = parse_size(a.size);

  qs_image* out = nullptr;
  check(qs_rectify(photo.get(), theta, w, h, &out), "rectify");
  ImagePtr result(out);
  check(qs_image_save(result.get(), a.out.c_str(), a.quality), "write " + a.out);
  std::printf("rectified %s (%dx%d) -> %s (%dx%d)\n", a.photo.c_str(), pw, ph, a.out.c_str(), w, h);
  return kExitOk;
}

struct EvalArgs {
  std::string pred, truth, report;
  std::uint64_t seed = 0;
  bool per_sample = false;
};

int run_eval(const EvalArgs& a) {
  qs_eval_report* raw = nullptr;
  check(qs_evaluate_files(a.pred.c_str(), a.truth.c_str(), a.seed, &raw), "eval-iou");
  ReportPtr r(raw);
  if (a.per_sample) {
    for (std::size_t i = 0; i < qs_eval_report_size(r.get()); ++i) {
      std::printf("%s %.6f\n", qs_eval_report_id(r.get(), i), qs_eval_report_iou(r.get(), i));
    }
  }
  std::printf("%s\n", qs_eval_report_summary(r.get()));
  if (!a.report.empty()) check(qs_eval_report_write_json(r.get(), a.report.c_str()), "report");
  return kExitOk;
}

struct InspectArgs {
  std::string matrix, quad, manifest;
};

void print_quad(const double q[8]) {
  std::printf("quad");
  for (int i = 0; i < 8; ++i) std::printf(" %.17g", q[i] + 0.0);
  std::printf("\n");
}

int run_inspect(const InspectArgs& a) {
  static const char* kValidity[] = {"valid", "nonconvex", "degenerate"};
  if (!a.matrix.empty()) {
    const auto v = parse_numbers(a.matrix, 8, "--matrix");
    double quad[8], inv[8];
    check(qs_quad_from_matrix(v.data(), quad), "--matrix");
    qs_quad_validity validity;
    check(qs_validate_quad(quad, &validity), "--matrix");
    print_quad(quad);
    std::printf("validity %s\n", kValidity[validity]);
    if (qs_invert(v.data(), inv) == QS_OK) {
      std::printf("inverse");
      for (double x : inv) std::printf(" %.17g", x + 0.0);
      std::printf("\n");
    } else {
      std::printf("inverse none (%s)\n", qs_last_error());
    }
    return validity == QS_QUAD_VALID ? kExitOk : kExitRuntime;
  }
  if (!a.quad.empty()) {
    const auto v = parse_numbers(a.quad, 8, "--quad");
    qs_quad_validity validity;
    check(qs_validate_quad(v.data(), &validity), "--quad");
    std::printf("validity %s\n", kValidity[validity]);
    if (validity != QS_QUAD_VALID) return kExitRuntime;
    double theta[8];
    check(qs_matrix_from_quad(v.data(), theta), "--quad");
    std::printf("matrix");
    for (double x : theta) std::printf(" %.17g", x + 0.0);
    std::printf("\n");
    return kExitOk;
  }
  std::uint64_t records = 0, problems = 0;
  check(qs_manifest_check(a.manifest.c_str(), &records, &problems), "manifest");
  std::printf("%" PRIu64 " records, %" PRIu64 " problems\n", records, problems);
  return problems == 0 ? kExitOk : kExitRuntime;
}

struct BenchArgs {
  std::string fg, bg, config, size = "224x224";
  std::vector<std::string> sets;
  std::uint64_t n = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  int synthetic = 8;
};

int run_bench(const BenchArgs& a) {
  ConfigPtr cfg = build_config(a.config, a.sets);
  const auto [w, h] = parse_size(a.size);
  set_number(cfg.get(), "/canvas_width", static_cast<std::uint64_t>(w));
  set_number(cfg.get(), "/canvas_height", static_cast<std::uint64_t>(h));
  if (a.seed) set_number(cfg.get(), "/seed", *a.seed);
  if (a.workers) set_number(cfg.get(), "/workers", static_cast<std::uint64_t>(*a.workers));
  qs_sources* raw = nullptr;
  if (!a.fg.empty() || !a.bg.empty()) {
    if (a.fg.empty() || a.bg.empty()) throw Failure{kExitUsage, "--fg and --bg go together"};
    check(qs_sources_load(cfg.get(), a.fg.c_str(), a.bg.c_str(), &raw), "sources");
  } else {
    check(qs_sources_synthetic(cfg.get(), a.synthetic, &raw), "sources");
  }
  SourcesPtr sources(raw);
  qs_summary sum{};
  check(qs_bench(cfg.get(), sources.get(), a.n, &sum), "bench");
  std::printf("bench %" PRIu64 " samples at %dx%d in %.3f s: %.2f samples/s\n", sum.written, w, h,
              sum.seconds, sum.samples_per_second);
  print_timings(sum.timings, sum.written);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic projective photo generator, rectifier and quad IoU scorer"};
  app.set_version_flag("--version", std::string(qs_version()));
  app.require_subcommand(1, 1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic dataset and its manifest");
  g->add_option("--fg", gen.fg, "Foreground image directory")->required();
  g->add_option("--bg", gen.bg, "Background image directory")->required();
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Master seed (overrides the config)");
  g->add_option("--config", gen.config, "JSON config file");
  g->add_option("--workers", gen.workers, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  g->add_option("--set", gen.sets, "Config override /json/pointer=value (repeatable)");

  RectifyArgs rect;
  auto* r = app.add_subcommand("rectify", "Undo a projective transform of a photo");
  r->add_option("--photo", rect.photo, "Input photo (PNG or JPEG)")->required();
  auto* m = r->add_option("--matrix", rect.matrix, "Row-major t1..t8 in the normalized frame");
  auto* q = r->add_option("--quad", rect.quad,
                          "x1 y1 .. x4 y4 in pixels, corners in the order top-left, "
                          "top-right, bottom-right, bottom-left of the original");
  m->excludes(q);
  r->add_option("--out", rect.out, "Output image (.png for PNG, JPEG otherwise)")->required();
  r->add_option("--size", rect.size, "Output size WxH (default: photo size)");
  r->add_option("--quality", rect.quality, "JPEG quality")->check(CLI::Range(1, 100));

  EvalArgs ev;
  auto* e = app.add_subcommand("eval-iou", "Score predicted matrices against annotated quads");
  e->add_option("--pred", ev.pred, "Predictions: id t1..t8 per line")->required();
  e->add_option("--truth", ev.truth, "Annotations: id x1 y1 .. x4 y4 per line")->required();
  e->add_option("--report", ev.report, "Also write a JSON report here");
  e->add_option("--seed", ev.seed, "Bootstrap seed");
  e->add_flag("--per-sample", ev.per_sample, "Print the IoU of every sample");

  InspectArgs ins;
  auto* i = app.add_subcommand("inspect", "Show the quad of a matrix, the matrix of a quad, "
                                          "or check a manifest");
  auto* im = i->add_option("--matrix", ins.matrix, "Row-major t1..t8");
  auto* iq = i->add_option("--quad", ins.quad, "x1 y1 .. x4 y4 in the normalized frame");
  auto* imf = i->add_option("--manifest", ins.manifest, "manifest.jsonl to verify");
  im->excludes(iq)->excludes(imf);
  iq->excludes(imf);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "In-memory generation throughput");
  b->add_option("--n", bench.n, "Number of samples")->check(CLI::PositiveNumber);
  b->add_option("--size", bench.size, "Canvas size WxH");
  b->add_option("--workers", bench.workers, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  b->add_option("--seed", bench.seed, "Master seed");
  b->add_option("--config", bench.config, "JSON config file");
  b->add_option("--set", bench.sets, "Config override /json/pointer=value (repeatable)");
  b->add_option("--fg", bench.fg, "Foreground directory (default: procedural sources)");
  b->add_option("--bg", bench.bg, "Background directory (default: procedural sources)");
  b->add_option("--synthetic", bench.synthetic, "Procedural source count")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& s) {
    return app.exit(s);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return run_generate(gen);
    if (r->parsed()) {
      if (rect.matrix.empty() == rect.quad.empty()) {
        throw Failure{kExitUsage, "rectify needs exactly one of --matrix or --quad"};
      }
      return run_rectify(rect);
    }
    if (e->parsed()) return run_eval(ev);
    if (i->parsed()) {
      if (ins.matrix.empty() && ins.quad.empty() && ins.manifest.empty()) {
        throw Failure{kExitUsage, "inspect needs one of --matrix, --quad or --manifest"};
      }
      return run_inspect(ins);
    }
    return run_bench(bench);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  }
}
