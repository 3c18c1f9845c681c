// Command-line front end: classify / reduce / scan / lift / experiment.
// JSON goes to stdout, diagnostics to stderr. Exit codes: 0 BQ (or success),
// 1 NotBQ, 2 Unknown, 3 no decrease / degenerate, 4 step limit,
// 64 usage error, 65 invalid triple, 66 unusable input/output path.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bowditch/json.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 64;
constexpr int kExitInvalidTriple = 65;
constexpr int kExitBadPath = 66;

int env_workers() {
  if (const char* w = std::getenv("BOWDITCH_WORKERS")) {
    const int n = std::atoi(w);
    if (n > 0) return n;
  }
  return 0;  // auto
}

bowditch::Complex require_complex(const std::string& s, const char* flag) {
  const auto v = bowditch::parse_complex(s);
  if (!v) {
    std::cerr << "bowditch: " << flag << " expects RE,IM\n";
    std::exit(kExitUsage);
  }
  return *v;
}

bowditch::Json run_meta(const std::string& command, const bowditch::Json& cfg) {
  bowditch::Json j;
  j["tool"] = "bowditch";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = cfg;
  return j;
}

struct ClassifyArgs {
  std::string x, y, z, branch = "plus";
  double threshold = 0.5;
  long long budget = 100000;
};

int cmd_classify(const ClassifyArgs& a) {
  using namespace bowditch;
  const Complex x = require_complex(a.x, "--x");
  const Complex y = require_complex(a.y, "--y");
  Complex z;
  if (!a.z.empty()) {
    z = require_complex(a.z, "--z");
  } else {
    const auto [zp, zm] = solve_third_trace(x, y);
    if (a.branch == "plus") {
      z = zp;
    } else if (a.branch == "minus") {
      z = zm;
    } else {
      std::cerr << "bowditch: --branch must be plus or minus\n";
      return kExitUsage;
    }
  }
  Json cfg;
  cfg["x"] = format_complex(x);
  cfg["y"] = format_complex(y);
  cfg["z"] = format_complex(z);
  cfg["threshold"] = a.threshold;
  cfg["budget"] = a.budget;
  try {
    const Classification c =
        bq_classify(make_triple(x, y, z), a.threshold, a.budget);
    Json out = to_json(c);
    out["meta"] = run_meta("classify", cfg);
    std::cout << out.dump(2) << "\n";
    switch (c.verdict) {
      case Verdict::BQ: return 0;
      case Verdict::NotBQ: return 1;
      case Verdict::Unknown: return 2;
    }
    return 2;
  } catch (const InvalidTriple& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitInvalidTriple;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitUsage;
  }
}

struct ReduceArgs {
  std::string x, y, z;
  double threshold = 0.5;
  int max_steps = 10000;
};

int cmd_reduce(const ReduceArgs& a) {
  using namespace bowditch;
  const Complex x = require_complex(a.x, "--x");
  const Complex y = require_complex(a.y, "--y");
  const Complex z = require_complex(a.z, "--z");
  Json cfg;
  cfg["x"] = format_complex(x);
  cfg["y"] = format_complex(y);
  cfg["z"] = format_complex(z);
  cfg["threshold"] = a.threshold;
  cfg["max_steps"] = a.max_steps;
  try {
    const ReductionOutcome out =
        reduce_trace(make_triple(x, y, z), a.threshold, 1e-12, a.max_steps);
    Json j = to_json(out);
    j["meta"] = run_meta("reduce", cfg);
    std::cout << j.dump(2) << "\n";
    switch (out.status) {
      case ReductionStatus::ReachedRealInterval:
      case ReductionStatus::ReachedFloor:
        return 0;
      case ReductionStatus::NoDecrease:
        return 3;
      case ReductionStatus::StepLimit:
        return 4;
    }
    return 4;
  } catch (const InvalidTriple& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitInvalidTriple;
  }
}

struct LiftArgs {
  std::string x, y, z;
};

int cmd_lift(const LiftArgs& a) {
  using namespace bowditch;
  const Complex x = require_complex(a.x, "--x");
  const Complex y = require_complex(a.y, "--y");
  const Complex z = require_complex(a.z, "--z");
  try {
    const CharacterTriple t = make_triple(x, y, z);
    const MatrixPair mp = matrix_lift(t);
    const Mat2 comm =
        mp.mX * mp.mY * mp.mX.inverse() * mp.mY.inverse();
    Json j;
    j["mX"] = to_json(mp.mX);
    j["mY"] = to_json(mp.mY);
    Json res;
    res["trace_x"] = std::abs(mp.mX.trace() - x);
    res["trace_y"] = std::abs(mp.mY.trace() - y);
    res["trace_xy"] = std::abs((mp.mX * mp.mY).trace() - z);
    res["commutator_plus_2"] = std::abs(comm.trace() + 2.0);
    res["det_x_minus_1"] = std::abs(mp.mX.det() - 1.0);
    res["det_y_minus_1"] = std::abs(mp.mY.det() - 1.0);
    j["residuals"] = res;
    Json cfg;
    cfg["x"] = format_complex(x);
    cfg["y"] = format_complex(y);
    cfg["z"] = format_complex(z);
    j["meta"] = run_meta("lift", cfg);
    std::cout << j.dump(2) << "\n";
    return 0;
  } catch (const DegenerateEigenvalue& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return 3;
  } catch (const InvalidTriple& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitInvalidTriple;
  }
}

struct ScanArgs {
  std::string spec_file;
  std::string fixed = "x", varied = "y", branch = "both";
  std::string fixed_value = "0,0", center = "0,0";
  double width = 6.0, height = 6.0;
  int nx = 0, ny = 0;
  double threshold = 0.5;
  long long budget = 10000;
  int layer = 0;
  std::string out_ppm, out_csv, out_meta;
};

int cmd_scan(const ScanArgs& a) {
  using namespace bowditch;
  SliceSpec spec;
  try {
    if (!a.spec_file.empty()) {
      std::ifstream in(a.spec_file);
      if (!in) {
        std::cerr << "bowditch: cannot read " << a.spec_file << "\n";
        return kExitBadPath;
      }
      Json j;
      in >> j;
      spec = slice_spec_from_json(j);
    } else {
      spec.fixed_coordinate = coordinate_from_name(a.fixed);
      spec.varied_coordinate = coordinate_from_name(a.varied);
      spec.fixed_value = require_complex(a.fixed_value, "--fixed-value");
      spec.center = require_complex(a.center, "--center");
      spec.width = a.width;
      spec.height = a.height;
      spec.nx = a.nx;
      spec.ny = a.ny;
      spec.branch = branch_from_name(a.branch);
      spec.threshold = a.threshold;
      spec.budget = a.budget;
      validate_spec(spec);
    }
  } catch (const SpecInvalid& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "bowditch: bad spec file: " << e.what() << "\n";
    return kExitUsage;
  }
  if (a.out_ppm.empty() && a.out_csv.empty()) {
    std::cerr << "bowditch: need --out-ppm and/or --out-csv\n";
    return kExitUsage;
  }
  const ScanResult result = scan_slice(spec, env_workers());
  auto write_file = [](const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return bool(out);
  };
  if (!a.out_ppm.empty()) {
    std::string ppm;
    try {
      ppm = render_ppm(result, a.layer);
    } catch (const LayerOutOfRange& e) {
      std::cerr << "bowditch: " << e.what() << "\n";
      return kExitUsage;
    }
    if (!write_file(a.out_ppm, ppm)) {
      std::cerr << "bowditch: cannot write " << a.out_ppm << "\n";
      return kExitBadPath;
    }
  }
  if (!a.out_csv.empty() && !write_file(a.out_csv, write_csv(result))) {
    std::cerr << "bowditch: cannot write " << a.out_csv << "\n";
    return kExitBadPath;
  }
  std::string meta_path = a.out_meta;
  if (meta_path.empty()) {
    meta_path = (!a.out_ppm.empty() ? a.out_ppm : a.out_csv) + ".meta.json";
  }
  Json meta = run_meta("scan", to_json(spec));
  meta["wall_seconds"] = result.wall_seconds;
  meta["workers"] = result.workers;
  if (!write_file(meta_path, meta.dump(2) + "\n")) {
    std::cerr << "bowditch: cannot write " << meta_path << "\n";
    return kExitBadPath;
  }
  return 0;
}

struct ExperimentArgs {
  long long samples = 1000;
  unsigned long long seed = 1;
  double threshold = 0.5;
  int max_steps = 10000;
};

int cmd_experiment(const ExperimentArgs& a) {
  using namespace bowditch;
  if (a.samples < 0) {
    std::cerr << "bowditch: --samples must be >= 0\n";
    return kExitUsage;
  }
  const ExperimentReport rep = remark_b_experiment(
      a.samples, a.seed, a.threshold, a.max_steps, env_workers());
  Json j = to_json(rep);
  Json cfg;
  cfg["samples"] = a.samples;
  cfg["seed"] = a.seed;
  cfg["threshold"] = a.threshold;
  cfg["max_steps"] = a.max_steps;
  j["meta"] = run_meta("experiment", cfg);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bowditch space classifier for the punctured-torus character "
               "variety"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand(
      "classify", "Classify a character against the BQ-conditions");
  classify->add_option("--x", ca.x, "trace of X as RE,IM")->required();
  classify->add_option("--y", ca.y, "trace of Y as RE,IM")->required();
  classify->add_option("--z", ca.z, "trace of XY as RE,IM");
  classify->add_option("--branch", ca.branch,
                       "root choice when --z is omitted (plus|minus)");
  classify->add_option("--threshold", ca.threshold,
                       "small-trace witness threshold, in (0, 0.5]");
  classify->add_option("--budget", ca.budget, "triangle exploration budget");

  ReduceArgs ra;
  auto* reduce =
      app.add_subcommand("reduce", "Run the trace-reduction descent");
  reduce->add_option("--x", ra.x)->required();
  reduce->add_option("--y", ra.y)->required();
  reduce->add_option("--z", ra.z)->required();
  reduce->add_option("--threshold", ra.threshold);
  reduce->add_option("--max-steps", ra.max_steps);

  LiftArgs la;
  auto* lift = app.add_subcommand(
      "lift", "Print explicit SL(2,C) matrices realizing the triple");
  lift->add_option("--x", la.x)->required();
  lift->add_option("--y", la.y)->required();
  lift->add_option("--z", la.z)->required();

  ScanArgs sa;
  auto* scan =
      app.add_subcommand("scan", "Rasterize a slice of the variety");
  scan->add_option("--spec", sa.spec_file, "slice spec JSON file");
  scan->add_option("--fixed", sa.fixed, "fixed coordinate (x|y|z)");
  scan->add_option("--fixed-value", sa.fixed_value);
  scan->add_option("--varied", sa.varied, "varied coordinate (x|y|z)");
  scan->add_option("--center", sa.center, "grid center as RE,IM");
  scan->add_option("--width", sa.width);
  scan->add_option("--height", sa.height);
  scan->add_option("--nx", sa.nx);
  scan->add_option("--ny", sa.ny);
  scan->add_option("--branch", sa.branch, "plus|minus|both");
  scan->add_option("--threshold", sa.threshold);
  scan->add_option("--budget", sa.budget, "per-cell triangle budget");
  scan->add_option("--layer", sa.layer, "layer to render into the PPM");
  scan->add_option("--out-ppm", sa.out_ppm);
  scan->add_option("--out-csv", sa.out_csv);
  scan->add_option("--out-meta", sa.out_meta);

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand(
      "experiment", "Sample descent statistics for Jorgensen-flagged traces");
  experiment->add_option("--samples", ea.samples)->required();
  experiment->add_option("--seed", ea.seed)->required();
  experiment->add_option("--threshold", ea.threshold);
  experiment->add_option("--max-steps", ea.max_steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(ca);
    if (reduce->parsed()) return cmd_reduce(ra);
    if (lift->parsed()) return cmd_lift(la);
    if (scan->parsed()) return cmd_scan(sa);
    if (experiment->parsed()) return cmd_experiment(ea);
  } catch (const std::exception& e) {
    std::cerr << "bowditch: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
