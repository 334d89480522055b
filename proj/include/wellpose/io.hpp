#pragma once

// JSON instance descriptors and report serialization; CSV modulus curves.
// Needs nlohmann/json (json.hpp) on the include path.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "wellpose/error.hpp"
#include "wellpose/extended_real.hpp"
#include "wellpose/family.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/parametric.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/seminorm.hpp"
#include "wellpose/spaces.hpp"
#include "wellpose/steckin.hpp"

namespace wellpose::io {

using nlohmann::json;

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InvariantError("format_double: to_chars failed");
  return {buf, end};
}

inline void write_csv(std::ostream& out, const std::string& x_name, const std::string& y_name, const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DomainError("write_csv: column length mismatch");
  out << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) out << format_double(xs[i]) << ',' << format_double(ys[i]) << '\n';
}

inline std::string modulus_csv(const ModulusCurve& c) {
  std::ostringstream s;
  write_csv(s, "eps", "diam", c.eps_grid, c.diam_values);
  return s.str();
}

inline std::string projection_csv(const ProjectionReport& r) {
  std::ostringstream s;
  write_csv(s, "delta", "diam", r.delta_grid, r.diam_values);
  return s.str();
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InstanceError(path + ": " + e.what());
  }
}

namespace detail {

// nlohmann type errors become instance errors
template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InstanceError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InstanceError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

inline Metric metric_from(const std::string& s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "linf") return Metric::linf;
  if (s == "l1") return Metric::l1;
  if (s == "matrix") return Metric::matrix;
  throw InstanceError("unknown metric '" + s + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// spaces, objectives, families

/// {"kind": "grid1d"|"grid2d"|"pointcloud", "params": {...}, "metric": ...}
///   grid1d      params {lo, hi, steps}
///   grid2d      params {lo: [a,b], hi: [a,b], steps: [m,n]}
///   pointcloud  params {points: [[...], ...]}, or with metric "matrix"
///               params {n, distances: row-major n×n}
inline SpaceRef space_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind");
  const json params = j.contains("params") ? j.at("params") : json::object();
  const Metric metric = detail::metric_from(detail::get_or<std::string>(j, "metric", "euclidean"));
  try {
    if (kind == "grid1d") {
      if (metric != Metric::euclidean) throw InstanceError("grid1d uses the euclidean metric");
      return share(FiniteMetricSpace::grid1d(detail::get<double>(params, "lo"), detail::get<double>(params, "hi"),
                                             detail::get<std::size_t>(params, "steps")));
    }
    if (kind == "grid2d") {
      return share(FiniteMetricSpace::grid2d(detail::get<std::array<double, 2>>(params, "lo"),
                                             detail::get<std::array<double, 2>>(params, "hi"),
                                             detail::get<std::array<std::size_t, 2>>(params, "steps"), metric));
    }
    if (kind == "pointcloud") {
      if (metric == Metric::matrix)
        return share(FiniteMetricSpace::from_matrix(detail::get<std::size_t>(params, "n"),
                                                    detail::get<std::vector<double>>(params, "distances")));
      return share(FiniteMetricSpace::point_cloud(detail::get<std::vector<std::vector<double>>>(params, "points"), metric));
    }
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
  throw InstanceError("unknown space kind '" + kind + "'");
}

/// Numbers, or the string "inf" for +∞.
inline std::vector<ExtendedReal> extended_values_from_json(const json& arr) {
  if (!arr.is_array()) throw InstanceError("values must be an array");
  std::vector<ExtendedReal> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (v.is_string() && v.get<std::string>() == "inf") out.push_back(ExtendedReal::infinity());
    else if (v.is_number()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw InstanceError("non-finite value");
      out.emplace_back(d);
    } else throw InstanceError("value must be a number or \"inf\"");
  }
  return out;
}

inline json extended_to_json(const ExtendedReal& v) { return v.is_finite() ? json(v.value()) : json("inf"); }

inline ObjectiveFunction objective_from_json(const SpaceRef& space, const json& values) {
  try {
    return {space, extended_values_from_json(values)};
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
}

inline PerturbationFunction perturbation_from_json(const SpaceRef& space, const json& values) {
  try {
    return {space, values.get<std::vector<double>>()};
  } catch (const json::exception& e) {
    throw InstanceError(std::string("perturbation values: ") + e.what());
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
}

/// {"kind": "vime", "x_steps", "p_steps"}
/// {"kind": "table", "params": space, "domain": space, "values": [[...] per p], "lipschitz"?}
/// {"kind": "lipschitz_expr", "x_steps", "p_steps", "base": [...], "slope": [...]}
///   f_p(x) = base(x) + p·slope(x) on [0,1]×[0,1], Lipschitz constant max|slope|.
inline ParametricFamily family_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind");
  try {
    if (kind == "vime") return vime_family(detail::get<std::size_t>(j, "x_steps"), detail::get<std::size_t>(j, "p_steps"));
    if (kind == "table") {
      SpaceRef params = space_from_json(detail::get<json>(j, "params"));
      SpaceRef domain = space_from_json(detail::get<json>(j, "domain"));
      const json& rows = j.at("values");
      if (!rows.is_array() || rows.size() != params->size()) throw InstanceError("table: one row per parameter required");
      std::vector<ObjectiveFunction> t;
      for (const auto& row : rows) t.push_back(objective_from_json(domain, row));
      std::optional<double> lip;
      if (j.contains("lipschitz")) lip = detail::get<double>(j, "lipschitz");
      return {ParameterGrid(params), domain, std::move(t), lip};
    }
    if (kind == "lipschitz_expr") {
      const auto kx = detail::get<std::size_t>(j, "x_steps");
      const auto kp = detail::get<std::size_t>(j, "p_steps");
      const auto base = detail::get<std::vector<double>>(j, "base");
      const auto slope = detail::get<std::vector<double>>(j, "slope");
      if (base.size() != kx + 1 || slope.size() != kx + 1) throw InstanceError("lipschitz_expr: need x_steps+1 coefficients");
      SpaceRef xs = share(FiniteMetricSpace::grid1d(0.0, 1.0, kx));
      SpaceRef ps = share(FiniteMetricSpace::grid1d(0.0, 1.0, kp));
      double lip = 0.0;
      for (double s : slope) lip = std::max(lip, std::abs(s));
      std::vector<ObjectiveFunction> t;
      for (std::size_t q = 0; q <= kp; ++q) {
        const double p = ps->coordinates(q)[0];
        std::vector<double> v(kx + 1);
        for (std::size_t i = 0; i <= kx; ++i) v[i] = base[i] + p * slope[i];
        t.push_back(ObjectiveFunction::from_doubles(xs, v));
      }
      return {ParameterGrid(ps), xs, std::move(t), lip > 0.0 ? std::optional<double>(lip) : std::nullopt};
    }
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  } catch (const json::exception& e) {
    throw InstanceError(e.what());
  }
  throw InstanceError("unknown family kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// seminorms and convex bodies

inline json seminorm_to_json(const Seminorm& nu) {
  switch (nu.kind()) {
    case Seminorm::Kind::abs_linear: return {{"kind", "abslinear"}, {"a", nu.vector()}};
    case Seminorm::Kind::euclidean: return {{"kind", "euclidean"}, {"dim", nu.dim()}};
    case Seminorm::Kind::max_of:
    case Seminorm::Kind::sum: {
      json kids = json::array();
      for (const auto& c : nu.children()) kids.push_back(seminorm_to_json(c));
      return {{"kind", nu.kind() == Seminorm::Kind::max_of ? "max" : "sum"}, {"children", kids}};
    }
    case Seminorm::Kind::scale: return {{"kind", "scale"}, {"c", nu.factor()}, {"child", seminorm_to_json(nu.children().front())}};
    case Seminorm::Kind::line_quotient:
      return {{"kind", "linequotient"}, {"base", seminorm_to_json(nu.children().front())}, {"direction", nu.vector()}};
  }
  return {};
}

inline Seminorm seminorm_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind");
  try {
    if (kind == "abslinear") return Seminorm::abs_linear(detail::get<std::vector<double>>(j, "a"));
    if (kind == "euclidean") return Seminorm::euclidean(detail::get<std::size_t>(j, "dim"));
    if (kind == "maxabs") return max_abs_norm(detail::get<std::size_t>(j, "dim"));
    if (kind == "l1") return l1_norm(detail::get<std::size_t>(j, "dim"));
    if (kind == "max" || kind == "sum") {
      const json& arr = j.at("children");
      if (!arr.is_array()) throw InstanceError("children must be an array");
      std::vector<Seminorm> kids;
      for (const auto& c : arr) kids.push_back(seminorm_from_json(c));
      return kind == "max" ? Seminorm::max_of(std::move(kids)) : Seminorm::sum(std::move(kids));
    }
    if (kind == "scale") return Seminorm::scale(detail::get<double>(j, "c"), seminorm_from_json(j.at("child")));
    if (kind == "linequotient")
      return Seminorm::line_quotient(seminorm_from_json(j.at("base")), detail::get<std::vector<double>>(j, "direction"));
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  } catch (const json::exception& e) {
    throw InstanceError(e.what());
  }
  throw InstanceError("unknown seminorm kind '" + kind + "'");
}

/// {"kind": "segment", "a", "b", "samples"} or {"kind": "polytope", "vertices", "spacing"}
inline ConvexBody body_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind");
  try {
    if (kind == "segment")
      return ConvexBody::segment(detail::get<std::vector<double>>(j, "a"), detail::get<std::vector<double>>(j, "b"),
                                 detail::get<std::size_t>(j, "samples"));
    if (kind == "polytope")
      return ConvexBody::polytope(detail::get<std::vector<std::vector<double>>>(j, "vertices"), detail::get<double>(j, "spacing"));
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
  throw InstanceError("unknown body kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// reports

inline json to_json(const SelectionGapReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json o{{"p", row.p}, {"middle_count", row.middle_count}};
    o["left_max"] = row.left_max ? json(*row.left_max) : json(nullptr);
    o["right_min"] = row.right_min ? json(*row.right_min) : json(nullptr);
    rows.push_back(o);
  }
  return {{"eps", r.eps},
          {"claims",
           {{"f0_in_left", r.f0_in_left}, {"f1_in_right", r.f1_in_right}, {"middle_empty", r.middle_empty}}},
          {"gap", {r.gap_lo, r.gap_hi}},
          {"rows", rows}};
}

inline json to_json(const EpiCertificate& c) {
  json j{{"condition", c.condition}, {"p", c.p}, {"eps", c.eps}, {"vacuous", c.vacuous}};
  j["x"] = c.x ? json(*c.x) : json(nullptr);
  j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
  json w = json::array();
  for (const auto& [q, xq] : c.witnesses) w.push_back({q, xq});
  j["witnesses"] = w;
  j["failing_q"] = c.failing_q ? json(*c.failing_q) : json(nullptr);
  j["failing_x"] = c.failing_x ? json(*c.failing_x) : json(nullptr);
  return j;
}

inline json to_json(const DensityStepResult& r) {
  return {{"anchor", r.anchor},
          {"delta", r.delta},
          {"achieved_diam", r.achieved_diam},
          {"distance_moved", r.distance_moved},
          {"g_prime", r.g_prime.values()}};
}

inline json to_json(const Distance& d) { return {{"value", d.value}, {"error_bound", d.error_bound}}; }

inline json to_json(const PertAxiomReport& r) {
  json cont = json::array();
  for (const auto& w : r.continuity)
    cont.push_back({{"sample", w.sample}, {"p", w.p}, {"eps", w.eps}, {"delta", w.delta ? json(*w.delta) : json(nullptr)},
                    {"worst", w.worst}});
  json consts = json::array();
  for (const auto& c : r.constants)
    consts.push_back({{"p", c.p}, {"required", c.required}, {"declared", c.declared ? json(*c.declared) : json(nullptr)}});
  json dens = json::array();
  for (const auto& w : r.density)
    dens.push_back({{"sample", w.sample}, {"p", w.p}, {"eps", w.eps}, {"moved", to_json(w.moved)}, {"delta", w.delta},
                    {"achieved_diam", w.achieved_diam}, {"pass", w.pass}});
  return {{"metric", {{"pass", r.metric_pass}, {"witness", r.metric_witness}}},
          {"i", {{"pass", r.bounded_pass}, {"witness", {{"max_abs_value", r.max_abs_value}}}}},
          {"ii", {{"pass", r.continuity_pass}, {"witness", cont}, {"lipschitz_modulus", r.lipschitz_modulus}}},
          {"iii", {{"pass", r.domination_pass}, {"constant", consts}}},
          {"iv", {{"pass", r.density_pass}, {"witness", dens}}}};
}

inline json to_json(const RhoEstimate& r) { return {{"value", r.value}, {"error_bound", r.error_bound}}; }
inline json to_json(const SphereEstimate& r) { return {{"value", r.value}, {"lower", r.lower}, {"upper", r.upper}}; }

inline json to_json(const WellposeReport& r) {
  return {{"branch", to_string(r.branch)},
          {"success", r.success},
          {"anchor", r.anchor ? json(*r.anchor) : json(nullptr)},
          {"delta", r.delta},
          {"achieved_diam", r.achieved_diam},
          {"moved", to_json(r.moved)},
          {"nu_prime", seminorm_to_json(r.nu_prime)}};
}

inline json ledger_to_json(const BudgetLedger& l) {
  json steps = json::array();
  for (const auto& s : l.steps)
    steps.push_back({{"witness", s.witness},
                     {"p", s.p},
                     {"eps", s.eps},
                     {"delta", s.delta},
                     {"radius", s.radius},
                     {"c_p", s.c_p},
                     {"achieved_diam", s.achieved_diam},
                     {"moved", to_json(s.moved)},
                     {"skipped", s.skipped},
                     {"branch", s.skipped ? "skipped" : to_string(s.branch)}});
  return {{"total", l.total}, {"remaining", l.remaining}, {"steps", steps}};
}

inline json to_json(const RenormReport& r) {
  json moduli = json::array();
  for (const auto& m : r.moduli)
    moduli.push_back({{"p", m.p}, {"ok", m.ok}, {"delta", m.delta ? json(*m.delta) : json(nullptr)}, {"diam", m.diam}});
  return {{"status", r.status == RenormStatus::success ? "success" : "budget_exhausted"},
          {"message", r.message},
          {"ledger", ledger_to_json(r.ledger)},
          {"moduli", moduli},
          {"total_move", to_json(r.total_move)},
          {"move_bound", r.move_bound},
          {"a_final", to_json(r.a_final)},
          {"replay_ok", r.replay_ok}};
}

}  // namespace wellpose::io
