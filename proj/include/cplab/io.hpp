#pragma once

// On-disk formats: JSON instance documents, plain-text plans (one operator id
// per line) and the sweep CSV.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cplab/error.hpp"
#include "cplab/experiment.hpp"
#include "cplab/generate.hpp"
#include "cplab/model.hpp"

namespace cplab::io {

using json = nlohmann::ordered_json;

// Generator settings that reproduce a document.
struct Provenance {
  std::string mode = "modification";  // or "raw"
  ModelParams params;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct InstanceDocument {
  Instance instance;
  std::optional<Provenance> provenance;
  friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

namespace detail {

inline json literals_to_json(const std::vector<Literal>& lits) {
  json out = json::array();
  for (const Literal& l : lits) out.push_back({{"prop", l.prop}, {"neg", l.negated}});
  return out;
}

inline std::vector<Literal> literals_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw ParseError(std::string(field) + " must be an array of literals");
  std::vector<Literal> out;
  for (const json& l : j) out.push_back({l.at("prop").get<std::size_t>(), l.at("neg").get<bool>()});
  return out;
}

} // namespace detail

inline json to_json(const InstanceDocument& doc) {
  const Instance& inst = doc.instance;
  json j;
  j["n"] = inst.n();
  json ops = json::array();
  for (const Operator& op : inst.operators())
    ops.push_back({{"id", op.id()}, {"pre", detail::literals_to_json(op.pre())},
                   {"post", detail::literals_to_json(op.post())}});
  j["operators"] = std::move(ops);
  json init = json::array();
  for (const State& s : inst.initial()) {
    json row = json::array();
    for (bool v : s.values()) row.push_back(v);
    init.push_back(std::move(row));
  }
  j["initial"] = std::move(init);
  j["goal"] = detail::literals_to_json(inst.goal());
  j["protected"] = detail::literals_to_json(inst.protected_goals());
  if (doc.provenance) {
    const ModelParams& p = doc.provenance->params;
    j["provenance"] = {{"mode", doc.provenance->mode},
                       {"model", to_string(p.model)},
                       {"params",
                        {{"n", p.n}, {"o", p.o}, {"r", p.r}, {"c", p.c}, {"m", p.m}, {"g", p.g},
                         {"protect_achieved", p.protect_achieved}}},
                       {"seed", p.seed}};
  }
  return j;
}

inline std::string serialize(const InstanceDocument& doc) { return to_json(doc).dump(2) + "\n"; }

inline InstanceDocument from_json(const json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Operator> ops;
    for (const json& o : j.at("operators"))
      ops.emplace_back(o.at("id").get<OperatorId>(), detail::literals_from_json(o.at("pre"), "pre"),
                       detail::literals_from_json(o.at("post"), "post"));
    std::vector<State> states;
    for (const json& row : j.at("initial")) states.emplace_back(row.get<std::vector<bool>>());
    Instance inst(n, std::move(ops), BeliefState(std::move(states)),
                  detail::literals_from_json(j.at("goal"), "goal"));
    if (j.contains("protected")) {
      auto listed = normalize_literals(detail::literals_from_json(j.at("protected"), "protected"), "protected");
      if (listed != inst.protected_goals())
        throw ParseError("'protected' must list exactly the goal literals true in every initial state");
    }
    InstanceDocument doc{std::move(inst), std::nullopt};
    if (j.contains("provenance")) {
      const json& pj = j.at("provenance");
      const json& pp = pj.at("params");
      Provenance prov;
      prov.mode = pj.at("mode").get<std::string>();
      prov.params.model = parse_model_kind(pj.at("model").get<std::string>());
      prov.params.n = pp.at("n").get<std::size_t>();
      prov.params.o = pp.at("o").get<std::size_t>();
      prov.params.r = pp.at("r").get<std::size_t>();
      prov.params.c = pp.at("c").get<std::size_t>();
      prov.params.m = pp.at("m").get<std::size_t>();
      prov.params.g = pp.at("g").get<std::size_t>();
      prov.params.protect_achieved = pp.at("protect_achieved").get<bool>();
      prov.params.seed = pj.at("seed").get<std::uint64_t>();
      doc.provenance = prov;
    }
    return doc;
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline InstanceDocument parse_instance(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  return from_json(j);
}

inline InstanceDocument parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

// One operator id per line; blank lines and lines starting with '#' are skipped.
inline Plan parse_plan(std::istream& in) {
  Plan plan;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    OperatorId id = 0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    auto [ptr, ec] = std::from_chars(begin, end, id);
    if (ec != std::errc() || ptr != end)
      throw ParseError("plan line " + std::to_string(lineno) + ": expected an operator id");
    plan.steps.push_back(id);
  }
  return plan;
}

inline std::string serialize_plan(const Plan& plan) {
  std::string out;
  for (OperatorId id : plan.steps) out += std::to_string(id) + "\n";
  return out;
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline constexpr const char* kCurveHeader = "alpha,operators,trials,successes,p_hat,ci_low,ci_high";

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << kCurveHeader << '\n';
  for (const CurvePoint& pt : points)
    out << format_double(pt.alpha) << ',' << pt.operators << ',' << pt.trials << ',' << pt.successes << ','
        << format_double(pt.p_hat) << ',' << format_double(pt.ci_low) << ',' << format_double(pt.ci_high)
        << '\n';
}

inline std::vector<CurvePoint> read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) throw ParseError("missing or wrong CSV header");
  std::vector<CurvePoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw ParseError("CSV row must have 7 fields: " + line);
    auto num = [&](const std::string& s, auto& value) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad CSV number '" + s + "'");
    };
    CurvePoint pt;
    num(cells[0], pt.alpha);
    num(cells[1], pt.operators);
    num(cells[2], pt.trials);
    num(cells[3], pt.successes);
    num(cells[4], pt.p_hat);
    num(cells[5], pt.ci_low);
    num(cells[6], pt.ci_high);
    points.push_back(pt);
  }
  return points;
}

// Whitespace-separated columns for gnuplot: alpha p_hat ci_low ci_high.
inline void write_curve_columns(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "# alpha p_hat ci_low ci_high\n";
  for (const CurvePoint& pt : points)
    out << format_double(pt.alpha) << ' ' << format_double(pt.p_hat) << ' ' << format_double(pt.ci_low) << ' '
        << format_double(pt.ci_high) << '\n';
}

} // namespace cplab::io
