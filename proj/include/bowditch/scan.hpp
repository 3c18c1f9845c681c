#pragma once

#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "bowditch/bq.hpp"
#include "bowditch/core.hpp"
#include "bowditch/io.hpp"

namespace bowditch {

struct SpecInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LayerOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

enum class Branch { Plus, Minus, Both };

/// A 2D slice of the variety: one coordinate held fixed, one sampled over a
/// grid, the third solved from the cubic (two sheets; Both exposes both).
struct SliceSpec {
  Coordinate fixed_coordinate = Coordinate::X;
  Complex fixed_value;
  Coordinate varied_coordinate = Coordinate::Y;
  Complex center;
  double width = 0.0;
  double height = 0.0;
  int nx = 0;
  int ny = 0;
  Branch branch = Branch::Both;
  double threshold = 0.5;
  long long budget = 10000;
};

enum class CellVerdict { BQ, NotBQSmall, NotBQReal, Unknown, Error };

struct ScanCell {
  CellVerdict verdict = CellVerdict::Error;
  long long low_trace_count = 0;
  long long budget_spent = 0;
  std::string error;  // empty unless verdict == Error
};

struct ScanResult {
  SliceSpec spec;
  std::vector<std::vector<ScanCell>> layers;  // nx*ny cells, row-major
  double wall_seconds = 0.0;
  int workers = 1;
};

inline void validate_spec(const SliceSpec& spec) {
  if (spec.fixed_coordinate == spec.varied_coordinate) {
    throw SpecInvalid("fixed and varied coordinate must differ");
  }
  if (spec.nx < 1 || spec.ny < 1 ||
      static_cast<long long>(spec.nx) * spec.ny > 100000000LL) {
    throw SpecInvalid("grid must be non-empty with nx*ny <= 1e8");
  }
  if (!(spec.width > 0.0) || !(spec.height > 0.0)) {
    throw SpecInvalid("width and height must be positive");
  }
  if (!(spec.threshold > 0.0 && spec.threshold <= 0.5)) {
    throw SpecInvalid("threshold must lie in (0, 0.5]");
  }
  if (spec.budget < 1) throw SpecInvalid("budget must be >= 1");
}

namespace detail {

// Cell centers; row 0 carries the maximal imaginary part.
inline Complex cell_value(const SliceSpec& s, int i, int j) {
  const double re =
      s.center.real() - s.width / 2.0 + (i + 0.5) * s.width / s.nx;
  const double im =
      s.center.imag() + s.height / 2.0 - (j + 0.5) * s.height / s.ny;
  return {re, im};
}

inline CharacterTriple assemble_triple(const SliceSpec& s, Complex varied,
                                       bool plus_branch) {
  const auto [zp, zm] = solve_third_trace(s.fixed_value, varied);
  const Complex third = plus_branch ? zp : zm;
  Complex c[3];
  c[static_cast<int>(s.fixed_coordinate)] = s.fixed_value;
  c[static_cast<int>(s.varied_coordinate)] = varied;
  for (int k = 0; k < 3; ++k) {
    if (k != static_cast<int>(s.fixed_coordinate) &&
        k != static_cast<int>(s.varied_coordinate)) {
      c[k] = third;
    }
  }
  return {c[0], c[1], c[2]};
}

inline ScanCell classify_cell(const SliceSpec& s, Complex varied,
                              bool plus_branch) {
  ScanCell cell;
  try {
    const CharacterTriple t = assemble_triple(s, varied, plus_branch);
    const Classification c = bq_classify(t, s.threshold, s.budget);
    switch (c.verdict) {
      case Verdict::BQ:
        cell.verdict = CellVerdict::BQ;
        break;
      case Verdict::NotBQ:
        cell.verdict = (c.witness && c.witness->kind == WitnessKind::SmallTrace)
                           ? CellVerdict::NotBQSmall
                           : CellVerdict::NotBQReal;
        break;
      case Verdict::Unknown:
        cell.verdict = CellVerdict::Unknown;
        break;
    }
    cell.low_trace_count =
        static_cast<long long>(c.low_trace_vertices.size());
    cell.budget_spent = c.budget_spent;
  } catch (const std::exception& e) {
    cell.verdict = CellVerdict::Error;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace detail

/// Rasterize the slice. Cells are independent; output is identical across
/// runs and worker counts (cells are addressed by index, never by completion
/// order).
inline ScanResult scan_slice(const SliceSpec& spec, int workers = 0) {
  validate_spec(spec);
  const auto t0 = std::chrono::steady_clock::now();
  ScanResult res;
  res.spec = spec;
  const int nlayers = spec.branch == Branch::Both ? 2 : 1;
  const std::size_t ncells =
      static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(spec.ny);
  res.layers.assign(nlayers, std::vector<ScanCell>(ncells));
  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  res.workers = nw;

  const long long total_rows = static_cast<long long>(nlayers) * spec.ny;
  auto run_row = [&](long long row) {
    const int layer = static_cast<int>(row / spec.ny);
    const int j = static_cast<int>(row % spec.ny);
    const bool plus = spec.branch == Branch::Minus ? false : layer == 0;
    for (int i = 0; i < spec.nx; ++i) {
      const Complex v = detail::cell_value(spec, i, j);
      res.layers[layer][static_cast<std::size_t>(j) * spec.nx + i] =
          detail::classify_cell(spec, v, plus);
    }
  };
  if (nw == 1) {
    for (long long row = 0; row < total_rows; ++row) run_row(row);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const long long row = next.fetch_add(1);
          if (row >= total_rows) return;
          run_row(row);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

struct Rgb {
  unsigned char r, g, b;
};

struct Palette {
  Rgb bq{255, 255, 255};
  Rgb notbq_small{0, 0, 0};
  Rgb notbq_real{96, 96, 96};
  Rgb unknown{200, 32, 32};
  Rgb error{255, 0, 255};
};

/// Binary PPM (P6) of one layer.
inline std::string render_ppm(const ScanResult& result, int layer = 0,
                              const Palette& palette = {}) {
  if (layer < 0 || layer >= static_cast<int>(result.layers.size())) {
    throw LayerOutOfRange("layer index out of range");
  }
  std::string out = "P6\n" + std::to_string(result.spec.nx) + " " +
                    std::to_string(result.spec.ny) + "\n255\n";
  out.reserve(out.size() + result.layers[layer].size() * 3);
  for (const ScanCell& cell : result.layers[layer]) {
    Rgb c{};
    switch (cell.verdict) {
      case CellVerdict::BQ: c = palette.bq; break;
      case CellVerdict::NotBQSmall: c = palette.notbq_small; break;
      case CellVerdict::NotBQReal: c = palette.notbq_real; break;
      case CellVerdict::Unknown: c = palette.unknown; break;
      case CellVerdict::Error: c = palette.error; break;
    }
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

inline const char* cell_verdict_name(CellVerdict v) {
  switch (v) {
    case CellVerdict::BQ: return "BQ";
    case CellVerdict::NotBQSmall: return "NotBQ";
    case CellVerdict::NotBQReal: return "NotBQ";
    case CellVerdict::Unknown: return "Unknown";
    case CellVerdict::Error: return "Error";
  }
  return "?";
}

inline const char* cell_witness_name(CellVerdict v) {
  switch (v) {
    case CellVerdict::NotBQSmall: return "SmallTrace";
    case CellVerdict::NotBQReal: return "RealTrace";
    default: return "";
  }
}

/// CSV of all layers, layer-major then row-major.
inline std::string write_csv(const ScanResult& result) {
  std::string out =
      "re,im,branch,verdict,witness_kind,low_trace_count,budget_spent\n";
  for (std::size_t layer = 0; layer < result.layers.size(); ++layer) {
    const bool plus =
        result.spec.branch == Branch::Minus ? false : layer == 0;
    const char* branch = plus ? "plus" : "minus";
    for (int j = 0; j < result.spec.ny; ++j) {
      for (int i = 0; i < result.spec.nx; ++i) {
        const Complex v = detail::cell_value(result.spec, i, j);
        const ScanCell& cell =
            result.layers[layer][static_cast<std::size_t>(j) * result.spec.nx +
                                 i];
        out += format_double(v.real());
        out += ',';
        out += format_double(v.imag());
        out += ',';
        out += branch;
        out += ',';
        out += cell_verdict_name(cell.verdict);
        out += ',';
        out += cell_witness_name(cell.verdict);
        out += ',';
        out += std::to_string(cell.low_trace_count);
        out += ',';
        out += std::to_string(cell.budget_spent);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace bowditch
