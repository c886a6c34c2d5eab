#include "lmatch/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lmatch/matching.hpp"
#include "lmatch/oracles.hpp"

namespace lmatch {

OracleMode parse_oracle_mode(const std::string& s) {
  if (s == "on") return OracleMode::On;
  if (s == "off") return OracleMode::Off;
  if (s == "auto") return OracleMode::Auto;
  throw InvalidArgument("oracle mode must be on, off or auto");
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {
      "const_approx_bipartite", "const_approx_general",  "approx_matching",
      "maximal_matching",       "const_approx_weighted", "const_almost_maximal",
      "eps_maximal_matching",   "approx_b_matching",     "approx_weighted_matching",
      "approx_edge_dominating_set"};
  return names;
}

bool algorithm_needs_eps(const std::string& name) {
  return name == "approx_matching" || name == "eps_maximal_matching" || name == "approx_b_matching" ||
         name == "approx_weighted_matching" || name == "approx_edge_dominating_set";
}

namespace {

bool is_weighted_algorithm(const std::string& name) {
  return name == "const_approx_weighted" || name == "approx_weighted_matching";
}

template <class T>
AlgorithmOutput wrap(Traced<T> t) {
  return {EdgeSet{std::move(t.value.edges)}, std::move(t.trace)};
}

}  // namespace

AlgorithmOutput run_algorithm(const Graph& g, const std::string& name, const std::optional<Rational>& eps,
                              const BValues* b) {
  if (algorithm_needs_eps(name) && !eps) throw InvalidArgument(name + " requires --eps");
  if (name == "const_approx_bipartite") return wrap(const_approx_bipartite(g));
  if (name == "const_approx_general") return wrap(const_approx_general(g));
  if (name == "approx_matching") return wrap(approx_matching(g, *eps));
  if (name == "maximal_matching") return wrap(maximal_matching(g));
  if (name == "const_approx_weighted") return wrap(const_approx_weighted(g));
  if (name == "const_almost_maximal") return wrap(const_almost_maximal(g));
  if (name == "eps_maximal_matching") return wrap(eps_maximal_matching(g, *eps));
  if (name == "approx_weighted_matching") return wrap(approx_weighted_matching(g, *eps));
  if (name == "approx_edge_dominating_set") return wrap(approx_edge_dominating_set(g, *eps));
  if (name == "approx_b_matching") {
    if (!b) throw InvalidArgument("approx_b_matching requires b-values");
    return wrap(approx_b_matching(g, *b, *eps));
  }
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::string ratio_string(std::uint64_t opt, std::uint64_t value) {
  if (value == 0) return opt == 0 ? "1" : "inf";
  return Rational(static_cast<std::int64_t>(opt), static_cast<std::int64_t>(value)).to_string();
}

bool factor_covers(const Rational& factor, std::uint64_t value, std::uint64_t opt) {
  return Rational(static_cast<std::int64_t>(value)) * factor >= Rational(static_cast<std::int64_t>(opt));
}

}  // namespace

RunOutcome run_experiment(const Graph& g, const RunRequest& req) {
  RunOutcome out;
  ResultRow& row = out.row;
  row.graph = req.graph_label;
  row.n = g.num_nodes();
  row.m = g.num_edges();
  row.max_degree = g.max_degree();
  row.algorithm = req.algorithm;
  if (req.eps && algorithm_needs_eps(req.algorithm)) row.eps = req.eps->to_string();

  std::optional<BValues> b = req.b;
  if (req.algorithm == "approx_b_matching" && !b) {
    if (!g.b_values()) throw InvalidArgument("approx_b_matching: no b-values given and the graph carries none");
    b = *g.b_values();
  }

  const auto start = std::chrono::steady_clock::now();
  AlgorithmOutput res = run_algorithm(g, req.algorithm, req.eps, b ? &*b : nullptr);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  row.rounds_used = res.trace.rounds_used;
  row.messages_sent = res.trace.messages_sent;
  row.max_message_bits = res.trace.max_message_bits;
  const bool weighted = is_weighted_algorithm(req.algorithm);
  row.result_value = weighted ? total_weight(g, res.edges) : res.edges.size();

  // Validity.
  Check check;
  if (req.algorithm == "approx_b_matching") {
    check = is_b_matching(g, *b, res.edges);
  } else if (req.algorithm == "approx_edge_dominating_set") {
    check = dominates(g, res.edges);
  } else if (req.algorithm == "maximal_matching") {
    check = is_maximal(g, res.edges);
  } else {
    check = is_matching(g, res.edges);
  }
  row.valid = check.ok;
  if (!check.ok) row.warning = check.reason;

  const bool is_plain_matching = req.algorithm != "approx_b_matching" && req.algorithm != "approx_edge_dominating_set";
  if (is_plain_matching) row.uncovered_fraction = uncovered_edge_fraction(g, res.edges).to_string();

  // Uncovered-fraction guarantees need no oracle.
  if (req.algorithm == "const_almost_maximal" || req.algorithm == "eps_maximal_matching") {
    const Rational frac = uncovered_edge_fraction(g, res.edges);
    const Rational limit = req.algorithm == "const_almost_maximal" ? Rational(511, 512) : *req.eps;
    row.guaranteed_bound = limit.to_string();
    row.within_bound = frac <= limit;
    return out;
  }

  Rational factor(1);
  if (req.algorithm == "const_approx_bipartite") {
    factor = Rational(kBipartiteApprox);
  } else if (req.algorithm == "const_approx_general") {
    factor = Rational(kGeneralApprox);
  } else if (req.algorithm == "const_approx_weighted") {
    factor = Rational(kWeightedApprox);
  } else if (req.algorithm == "maximal_matching") {
    factor = Rational(2);
  } else {
    factor = Rational(2) + *req.eps;
  }
  row.guaranteed_bound = factor.to_string();
  if (req.oracle == OracleMode::Off) return out;

  const OracleBudget budget;
  try {
    std::uint64_t opt = 0;
    if (weighted) {
      opt = max_weighted_matching_exact(g, budget).value;
    } else if (req.algorithm == "approx_b_matching") {
      opt = max_b_matching_exact(g, *b, budget).value;
    } else if (req.algorithm == "approx_edge_dominating_set") {
      opt = min_eds_exact(g, budget).value;
    } else {
      if (req.oracle == OracleMode::Auto && g.num_nodes() > 20'000)
        throw OracleBudgetExceeded("instance too large for the automatic oracle");
      opt = max_matching_exact(g, budget).value;
    }
    row.oracle_optimum = opt;
    if (req.algorithm == "approx_edge_dominating_set") {
      row.achieved_ratio = ratio_string(row.result_value, opt);
      row.within_bound = factor_covers(factor, opt, row.result_value);
    } else {
      row.achieved_ratio = ratio_string(opt, row.result_value);
      row.within_bound = factor_covers(factor, row.result_value, opt);
    }
  } catch (const OracleBudgetExceeded& e) {
    if (req.oracle == OracleMode::On) row.warning = std::string("oracle skipped: ") + e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "graph",          "n",
      "m",              "max_degree",
      "algorithm",      "eps",
      "rounds_used",    "messages_sent",
      "max_message_bits", "result_value",
      "oracle_optimum", "achieved_ratio",
      "uncovered_fraction", "guaranteed_bound",
      "valid",          "within_bound",
      "warning"};
  return cols;
}

namespace {

std::vector<std::string> row_fields(const ResultRow& r) {
  return {r.graph,
          std::to_string(r.n),
          std::to_string(r.m),
          std::to_string(r.max_degree),
          r.algorithm,
          r.eps,
          std::to_string(r.rounds_used),
          std::to_string(r.messages_sent),
          std::to_string(r.max_message_bits),
          std::to_string(r.result_value),
          r.oracle_optimum ? std::to_string(*r.oracle_optimum) : "",
          r.achieved_ratio,
          r.uncovered_fraction,
          r.guaranteed_bound,
          r.valid ? "true" : "false",
          r.within_bound ? "true" : "false",
          r.warning};
}

std::uint64_t to_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument("expected an unsigned integer, got '" + s + "'");
  return std::stoull(s);
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw InvalidArgument("expected true or false, got '" + s + "'");
}

ResultRow row_from_fields(const std::vector<std::string>& f) {
  if (f.size() != csv_columns().size()) throw InvalidArgument("CSV row has the wrong number of columns");
  ResultRow r;
  r.graph = f[0];
  r.n = to_u64(f[1]);
  r.m = to_u64(f[2]);
  r.max_degree = to_u64(f[3]);
  r.algorithm = f[4];
  r.eps = f[5];
  r.rounds_used = to_u64(f[6]);
  r.messages_sent = to_u64(f[7]);
  r.max_message_bits = to_u64(f[8]);
  r.result_value = to_u64(f[9]);
  if (!f[10].empty()) r.oracle_optimum = to_u64(f[10]);
  r.achieved_ratio = f[11];
  r.uncovered_fraction = f[12];
  r.guaranteed_bound = f[13];
  r.valid = to_bool(f[14]);
  r.within_bound = to_bool(f[15]);
  r.warning = f[16];
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidArgument("CSV: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out += (k ? "," : "") + cols[k];
  out += '\n';
  for (const ResultRow& r : rows) {
    const auto f = row_fields(r);
    for (std::size_t k = 0; k < f.size(); ++k) out += (k ? "," : "") + csv_escape(f[k]);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  auto table = parse_csv(text);
  if (table.empty() || table.front() != csv_columns()) throw InvalidArgument("CSV: header does not match the schema");
  std::vector<ResultRow> rows;
  for (std::size_t k = 1; k < table.size(); ++k) rows.push_back(row_from_fields(table[k]));
  return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const ResultRow& r : rows) {
    nlohmann::ordered_json j;
    j["graph"] = r.graph;
    j["n"] = r.n;
    j["m"] = r.m;
    j["max_degree"] = r.max_degree;
    j["algorithm"] = r.algorithm;
    auto opt_str = [](const std::string& v) { return v.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
    j["eps"] = opt_str(r.eps);
    j["rounds_used"] = r.rounds_used;
    j["messages_sent"] = r.messages_sent;
    j["max_message_bits"] = r.max_message_bits;
    j["result_value"] = r.result_value;
    j["oracle_optimum"] = r.oracle_optimum ? nlohmann::ordered_json(*r.oracle_optimum) : nlohmann::ordered_json(nullptr);
    j["achieved_ratio"] = opt_str(r.achieved_ratio);
    j["uncovered_fraction"] = opt_str(r.uncovered_fraction);
    j["guaranteed_bound"] = r.guaranteed_bound;
    j["valid"] = r.valid;
    j["within_bound"] = r.within_bound;
    j["warning"] = r.warning;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("JSON: ") + e.what());
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion)
    throw InvalidArgument("JSON: unsupported schema_version");
  auto str_or_empty = [](const nlohmann::json& j) { return j.is_null() ? std::string() : j.get<std::string>(); };
  std::vector<ResultRow> rows;
  try {
    for (const auto& j : doc.at("rows")) {
      ResultRow r;
      r.graph = j.at("graph").get<std::string>();
      r.n = j.at("n").get<std::size_t>();
      r.m = j.at("m").get<std::size_t>();
      r.max_degree = j.at("max_degree").get<std::size_t>();
      r.algorithm = j.at("algorithm").get<std::string>();
      r.eps = str_or_empty(j.at("eps"));
      r.rounds_used = j.at("rounds_used").get<std::size_t>();
      r.messages_sent = j.at("messages_sent").get<std::size_t>();
      r.max_message_bits = j.at("max_message_bits").get<std::size_t>();
      r.result_value = j.at("result_value").get<std::uint64_t>();
      if (!j.at("oracle_optimum").is_null()) r.oracle_optimum = j.at("oracle_optimum").get<std::uint64_t>();
      r.achieved_ratio = str_or_empty(j.at("achieved_ratio"));
      r.uncovered_fraction = str_or_empty(j.at("uncovered_fraction"));
      r.guaranteed_bound = j.at("guaranteed_bound").get<std::string>();
      r.valid = j.at("valid").get<bool>();
      r.within_bound = j.at("within_bound").get<bool>();
      r.warning = j.at("warning").get<std::string>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("JSON: ") + e.what());
  }
  return rows;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp);
    f << content;
    if (!f.flush()) throw Error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Scaling

double scaling_regressor(std::size_t max_degree, double eps) {
  const double l = std::log2(static_cast<double>(std::max<std::size_t>(max_degree, 1)));
  return l * l * std::log2(2 * (2 + eps) / eps);
}

namespace {

double row_eps(const ResultRow& r) {
  if (r.eps.empty()) throw InvalidArgument("scaling report: row without eps");
  return Rational::parse(r.eps).to_double();
}

/// Mean rounds per key, keys ascending.
std::vector<double> mean_by(const std::vector<const ResultRow*>& rows, auto key) {
  std::map<double, std::pair<double, std::size_t>> acc;
  for (const ResultRow* r : rows) {
    auto& [sum, count] = acc[key(*r)];
    sum += static_cast<double>(r->rounds_used);
    ++count;
  }
  std::vector<double> out;
  for (const auto& [k, v] : acc) out.push_back(v.first / static_cast<double>(v.second));
  return out;
}

bool nondecreasing(const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); }

}  // namespace

ScalingFit fit_scaling(const std::vector<ResultRow>& rows) {
  ScalingFit fit;
  for (const ResultRow& r : rows) {
    fit.x.push_back(scaling_regressor(r.max_degree, row_eps(r)));
    fit.y.push_back(static_cast<double>(r.rounds_used));
  }
  const std::size_t n = fit.x.size();
  if (n < 2) throw InvalidArgument("scaling fit needs at least two rows");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += fit.x[k];
    my += fit.y[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (fit.x[k] - mx) * (fit.x[k] - mx);
    sxy += (fit.x[k] - mx) * (fit.y[k] - my);
    syy += (fit.y[k] - my) * (fit.y[k] - my);
  }
  fit.a = sxx > 0 ? sxy / sxx : 0;
  fit.b = my - fit.a * mx;
  double ss_res = 0;
  for (std::size_t k = 0; k < n; ++k) {
    fit.residuals.push_back(fit.y[k] - (fit.a * fit.x[k] + fit.b));
    ss_res += fit.residuals.back() * fit.residuals.back();
  }
  fit.r_squared = syy > 0 ? 1 - ss_res / syy : (ss_res == 0 ? 1 : 0);
  return fit;
}

ScalingReport scaling_report(const std::vector<ResultRow>& rows) {
  std::set<std::size_t> deltas;
  for (const ResultRow& r : rows) deltas.insert(r.max_degree);
  if (deltas.size() < 3) throw InvalidArgument("scaling report needs at least three distinct max degrees");
  ScalingReport rep;
  rep.overall = fit_scaling(rows);
  std::map<std::string, std::vector<ResultRow>> by_eps;
  std::map<std::size_t, std::vector<const ResultRow*>> by_delta;
  for (const ResultRow& r : rows) {
    by_eps[r.eps].push_back(r);
    by_delta[r.max_degree].push_back(&r);
  }
  for (auto& [eps, group] : by_eps) {
    std::set<std::size_t> ds;
    for (const ResultRow& r : group) ds.insert(r.max_degree);
    if (ds.size() >= 2) rep.per_eps.emplace_back(eps, fit_scaling(group));
    std::vector<const ResultRow*> ptrs;
    for (const ResultRow& r : group) ptrs.push_back(&r);
    rep.monotone_in_delta &= nondecreasing(mean_by(ptrs, [](const ResultRow& r) { return double(r.max_degree); }));
  }
  for (auto& [delta, group] : by_delta)
    rep.monotone_in_eps &= nondecreasing(mean_by(group, [](const ResultRow& r) { return -row_eps(r); }));
  return rep;
}

std::string scaling_report_text(const ScalingReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  auto line = [&](const std::string& label, const ScalingFit& f) {
    out << label << ": rounds = " << f.a << " * X + " << f.b << "  (R^2 = " << f.r_squared << ", rows = " << f.x.size()
        << ")\n";
  };
  out << "X = log2(D)^2 * log2(2(2+eps)/eps)\n";
  line("all", r.overall);
  for (const auto& [eps, f] : r.per_eps) line("eps=" + eps, f);
  out << "monotone in max degree: " << (r.monotone_in_delta ? "yes" : "no") << "\n";
  out << "monotone in log(1/eps): " << (r.monotone_in_eps ? "yes" : "no") << "\n";
  out << "residuals:";
  for (double x : r.overall.residuals) out << ' ' << x;
  out << '\n';
  return out.str();
}

}  // namespace lmatch
