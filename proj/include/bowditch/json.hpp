#pragma once

#include <json.hpp>

#include "bowditch/bq.hpp"
#include "bowditch/io.hpp"
#include "bowditch/reduction.hpp"
#include "bowditch/scan.hpp"

namespace bowditch {

using Json = nlohmann::ordered_json;

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::BQ: return "BQ";
    case Verdict::NotBQ: return "NotBQ";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

inline const char* witness_kind_name(WitnessKind k) {
  return k == WitnessKind::RealTrace ? "RealTrace" : "SmallTrace";
}

inline Json to_json(const Witness& w) {
  Json j;
  j["kind"] = witness_kind_name(w.kind);
  j["slope"] = format_slope(w.slope);
  j["trace"] = format_complex(w.trace);
  if (w.real_caveat) j["numerically_real_caveat"] = true;
  return j;
}

inline Json to_json(const Classification& c) {
  Json j;
  j["verdict"] = verdict_name(c.verdict);
  if (c.witness) j["witness"] = to_json(*c.witness);
  j["triangles_visited"] = c.triangles_visited;
  j["budget_spent"] = c.budget_spent;
  j["low_trace_count"] = c.low_trace_vertices.size();
  return j;
}

inline const char* reduction_status_name(ReductionStatus s) {
  switch (s) {
    case ReductionStatus::ReachedRealInterval: return "ReachedRealInterval";
    case ReductionStatus::ReachedFloor: return "ReachedFloor";
    case ReductionStatus::NoDecrease: return "NoDecrease";
    case ReductionStatus::StepLimit: return "StepLimit";
  }
  return "?";
}

inline Json to_json(const CharacterTriple& t) {
  return Json::array(
      {format_complex(t.x), format_complex(t.y), format_complex(t.z)});
}

inline Json to_json(const ReductionOutcome& o) {
  Json j;
  j["status"] = reduction_status_name(o.status);
  j["final_vertex"] = format_slope(o.final_vertex);
  j["final_trace"] = format_complex(o.final_trace);
  if (o.real_caveat) j["numerically_real_caveat"] = true;
  Json steps = Json::array();
  for (const ReductionStep& s : o.steps) {
    Json js;
    js["vertex"] = format_slope(s.vertex);
    js["trace"] = format_complex(s.trace);
    js["triple"] = to_json(s.triple);
    js["chosen_n"] = s.chosen_n;
    steps.push_back(js);
  }
  j["steps"] = steps;
  return j;
}

inline Json to_json(const Mat2& m) {
  return Json::array({Json::array({format_complex(m.a), format_complex(m.b)}),
                      Json::array({format_complex(m.c), format_complex(m.d)})});
}

inline Json to_json(const ExperimentReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["threshold"] = r.threshold;
  j["fraction_reduced"] = r.fraction_reduced;
  Json hist = Json::object();
  for (const auto& [steps, count] : r.step_histogram) {
    hist[std::to_string(steps)] = count;
  }
  j["histogram"] = hist;
  Json failures = Json::array();
  for (const CharacterTriple& t : r.failures) failures.push_back(to_json(t));
  j["failures"] = failures;
  return j;
}

inline const char* coordinate_name(Coordinate c) {
  switch (c) {
    case Coordinate::X: return "x";
    case Coordinate::Y: return "y";
    case Coordinate::Z: return "z";
  }
  return "?";
}

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
    case Branch::Both: return "both";
  }
  return "?";
}

inline Coordinate coordinate_from_name(const std::string& s) {
  if (s == "x" || s == "X") return Coordinate::X;
  if (s == "y" || s == "Y") return Coordinate::Y;
  if (s == "z" || s == "Z") return Coordinate::Z;
  throw SpecInvalid("coordinate must be one of x, y, z");
}

inline Branch branch_from_name(const std::string& s) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  if (s == "both") return Branch::Both;
  throw SpecInvalid("branch must be plus, minus or both");
}

inline Json to_json(const SliceSpec& s) {
  Json j;
  j["fixed_coordinate"] = coordinate_name(s.fixed_coordinate);
  j["fixed_value"] = format_complex(s.fixed_value);
  j["varied_coordinate"] = coordinate_name(s.varied_coordinate);
  j["center"] = format_complex(s.center);
  j["width"] = s.width;
  j["height"] = s.height;
  j["nx"] = s.nx;
  j["ny"] = s.ny;
  j["branch"] = branch_name(s.branch);
  j["threshold"] = s.threshold;
  j["budget"] = s.budget;
  return j;
}

inline SliceSpec slice_spec_from_json(const Json& j) {
  SliceSpec s;
  try {
    s.fixed_coordinate =
        coordinate_from_name(j.at("fixed_coordinate").get<std::string>());
    s.varied_coordinate =
        coordinate_from_name(j.at("varied_coordinate").get<std::string>());
    const auto fv = parse_complex(j.at("fixed_value").get<std::string>());
    const auto ct = parse_complex(j.at("center").get<std::string>());
    if (!fv || !ct) throw SpecInvalid("bad complex literal; expected RE,IM");
    s.fixed_value = *fv;
    s.center = *ct;
    s.width = j.at("width").get<double>();
    s.height = j.at("height").get<double>();
    s.nx = j.at("nx").get<int>();
    s.ny = j.at("ny").get<int>();
    if (j.contains("branch")) {
      s.branch = branch_from_name(j.at("branch").get<std::string>());
    }
    if (j.contains("threshold")) s.threshold = j.at("threshold").get<double>();
    if (j.contains("budget")) s.budget = j.at("budget").get<long long>();
  } catch (const Json::exception& e) {
    throw SpecInvalid(std::string("malformed slice spec: ") + e.what());
  }
  validate_spec(s);
  return s;
}

}  // namespace bowditch
