#pragma once

// JSON serialization of verdicts, decompositions and theorem reports, and a
// deterministic writer: keys sorted, floats at 17 significant digits,
// non-finite values as the strings "+inf", "-inf", "nan".

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcvx/battery.hpp"
#include "pcvx/charact.hpp"
#include "pcvx/dini.hpp"
#include "pcvx/theorems.hpp"
#include "pcvx/verdict.hpp"

namespace pcvx {

using Json = nlohmann::json;

inline Json real_json(Real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return static_cast<double>(v);
}

inline Json reals_json(const std::vector<Real>& vs) {
  Json a = Json::array();
  for (Real v : vs) a.push_back(real_json(v));
  return a;
}

inline Json to_json(const DiniSchedule& s) {
  return {{"t0", real_json(s.t0)}, {"ratio", real_json(s.ratio)}, {"steps", s.steps}};
}

inline Json to_json(const DiniEstimate& e) {
  return {{"value", real_json(e.value)},
          {"converged", e.converged},
          {"probes_in_domain", e.probes_in_domain},
          {"probes_undefined", e.probes_undefined},
          {"tail_min_trace", reals_json(e.tail_min_trace)}};
}

inline Json to_json(const Witness& w) {
  Json j = {{"points", reals_json(w.points)}, {"values", reals_json(w.values)}, {"failed", w.failed}};
  if (w.dini) j["dini"] = to_json(*w.dini);
  return j;
}

inline Json to_json(const Tolerances& t) {
  return {{"tol", real_json(t.tol)},
          {"stat_tol", real_json(t.stat_tol)},
          {"dini_tol", real_json(t.dini_tol)},
          {"schedule", to_json(t.schedule)}};
}

inline Json to_json(const Verdict& v) {
  Json w = Json::array();
  for (const Witness& x : v.witnesses) w.push_back(to_json(x));
  Json j = {{"outcome", to_string(v.outcome)},
            {"method", to_string(v.method)},
            {"violations", v.violations},
            {"witnesses", w},
            {"tolerances", to_json(v.tolerances)}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline Json range_json(const IndexRange& r, const std::vector<Real>& points) {
  Json j = {{"first", r.first}, {"last", r.last}, {"empty", r.empty()}};
  if (!r.empty()) {
    j["lo"] = real_json(points[r.first]);
    j["hi"] = real_json(points[r.last - 1]);
  }
  return j;
}

inline Json to_json(const MonotoneDecomposition& d) {
  Json viol = Json::array();
  for (const Witness& w : d.violations) viol.push_back(to_json(w));
  Json j = {{"i_minus", range_json(d.i_minus, d.points)},
            {"i_hat", range_json(d.i_hat, d.points)},
            {"i_plus", range_json(d.i_plus, d.points)},
            {"pattern", to_string(d.pattern)},
            {"tol", real_json(d.tol)},
            {"structurally_valid", d.structurally_valid()},
            {"violations", viol}};
  j["min_value"] = d.min_value ? real_json(*d.min_value) : Json(nullptr);
  return j;
}

inline Json to_json(const SegmentSplit& s, const std::vector<Real>& points) {
  Json j = {{"decreasing", range_json(s.decreasing, points)},
            {"constant", range_json(s.constant, points)},
            {"increasing", range_json(s.increasing, points)},
            {"valid", s.valid}};
  if (s.stop) j["stop"] = to_json(*s.stop);
  return j;
}

inline Json to_json(const TheoremReport& r) {
  Json pre = Json::array();
  Json con = Json::array();
  for (const Verdict& v : r.premise_verdicts) pre.push_back(to_json(v));
  for (const Verdict& v : r.conclusion_verdicts) con.push_back(to_json(v));
  Json j = {{"theorem", to_string(r.theorem_id)},
            {"function_id", r.function_id},
            {"status", to_string(r.status)},
            {"premise_verdicts", pre},
            {"conclusion_verdicts", con},
            {"implication_holds", r.implication_holds}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.counterexample) {
    Json c = Json::array();
    for (const Witness& w : *r.counterexample) c.push_back(to_json(w));
    j["counterexample"] = c;
  }
  return j;
}

inline Json to_json(const Comparison& c) {
  return {{"name", c.name},
          {"kind", c.implication ? "implies" : "equal"},
          {"left", to_json(c.left)},
          {"right", to_json(c.right)},
          {"inconclusive", c.inconclusive},
          {"agree", c.agree}};
}

/// Full result of one battery entry; `verbose` includes passing comparisons
/// and theorem reports with their verdicts, otherwise only failures are listed.
inline Json to_json(const EntryResult& e, bool verbose) {
  Json j = {{"id", e.entry.id}, {"expression", e.entry.expression}, {"passed", e.passed()}};
  if (!e.error.empty()) j["error"] = e.error;
  Json th = Json::array();
  for (const TheoremReport& t : e.theorems) {
    if (verbose || !t.implication_holds) {
      th.push_back(to_json(t));
    } else {
      th.push_back({{"theorem", to_string(t.theorem_id)},
                    {"status", to_string(t.status)},
                    {"implication_holds", true}});
    }
  }
  j["theorems"] = th;
  Json cs = Json::array();
  for (const Comparison& c : e.comparisons) {
    if (verbose || (!c.agree && !c.inconclusive)) {
      cs.push_back(to_json(c));
    } else {
      cs.push_back({{"name", c.name},
                    {"left", to_string(c.left.outcome)},
                    {"right", to_string(c.right.outcome)},
                    {"agree", c.agree},
                    {"inconclusive", c.inconclusive}});
    }
  }
  j["comparisons"] = cs;
  Json ls = Json::array();
  for (const LabelCheck& l : e.labels) {
    ls.push_back({{"label", l.label},
                  {"expected", l.expected},
                  {"observed", to_string(l.observed)},
                  {"matches", l.matches}});
  }
  j["labels"] = ls;
  return j;
}

// ---------------------------------------------------------------------------
// Writers.

namespace detail {

inline void escape_string(const std::string& s, std::string& out) {
  out += Json(s).dump();
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        escape_string(it.key(), out);
        out += ": ";
        write_json(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_json(j[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

inline void write_text(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto scalar = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  auto is_scalar_list = [](const Json& v) {
    for (const auto& x : v) {
      if (x.is_structured()) return false;
    }
    return true;
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      if (v.is_structured() && !v.empty() && !(v.is_array() && is_scalar_list(v))) {
        out += pad + it.key() + ":\n";
        write_text(v, indent + 1, out);
      } else if (v.is_array()) {
        out += pad + it.key() + ":";
        for (const auto& x : v) out += " " + scalar(x);
        out += v.empty() ? " []\n" : "\n";
      } else if (v.is_object()) {
        out += pad + it.key() + ": {}\n";
      } else {
        out += pad + it.key() + ": " + scalar(v) + "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad + "- [" + std::to_string(i) + "]\n";
      write_text(j[i], indent + 1, out);
    }
  } else {
    out += pad + scalar(j) + "\n";
  }
}

}  // namespace detail

/// Canonical JSON: sorted keys, 2-space indent, %.17g floats, trailing newline.
inline std::string dump_json(const Json& j) {
  std::string out;
  detail::write_json(j, 0, out);
  out += "\n";
  return out;
}

/// Indented plain-text rendering of the same structure.
inline std::string dump_text(const Json& j) {
  std::string out;
  detail::write_text(j, 0, out);
  return out;
}

}  // namespace pcvx
