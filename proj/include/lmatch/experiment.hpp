#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmatch/fractional.hpp"
#include "lmatch/graph.hpp"
#include "lmatch/local_sim.hpp"
#include "lmatch/rational.hpp"
#include "lmatch/solution.hpp"

namespace lmatch {

inline constexpr int kSchemaVersion = 1;

enum class OracleMode { On, Off, Auto };
OracleMode parse_oracle_mode(const std::string& s);

/// Names accepted by run_algorithm.
const std::vector<std::string>& algorithm_names();
bool algorithm_needs_eps(const std::string& name);

struct AlgorithmOutput {
  EdgeSet edges;
  sim::RoundTrace trace;
};

/// Runs one suite operation by name. `b` is used by approx_b_matching only.
AlgorithmOutput run_algorithm(const Graph& g, const std::string& name, const std::optional<Rational>& eps,
                              const BValues* b = nullptr);

/// One measured run. Columns appear in CSV in declaration order.
struct ResultRow {
  std::string graph;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t max_degree = 0;
  std::string algorithm;
  std::string eps;  // empty when unused
  std::size_t rounds_used = 0;
  std::size_t messages_sent = 0;
  std::size_t max_message_bits = 0;
  std::uint64_t result_value = 0;          // size, or weight for weighted algorithms
  std::optional<std::uint64_t> oracle_optimum;
  std::string achieved_ratio;              // optimum / value, exact; empty without oracle
  std::string uncovered_fraction;          // exact; empty when not applicable
  std::string guaranteed_bound;            // exact
  bool valid = true;
  bool within_bound = true;
  std::string warning;

  bool operator==(const ResultRow&) const = default;
};

const std::vector<std::string>& csv_columns();
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const std::string& text);

struct RunRequest {
  std::string graph_label;
  std::string algorithm;
  std::optional<Rational> eps;
  std::optional<BValues> b;
  OracleMode oracle = OracleMode::Auto;
};

struct RunOutcome {
  ResultRow row;
  double wall_ms = 0.0;  // kept out of the row so result files replay byte for byte
};

/// Executes, validates with the checkers, and compares with an oracle when
/// allowed and within budget.
RunOutcome run_experiment(const Graph& g, const RunRequest& req);

/// Least-squares fit rounds ≈ a·X + b with X = log2²Δ · log2(2(2+ε)/ε).
struct ScalingFit {
  double a = 0, b = 0, r_squared = 0;
  std::vector<double> x, y, residuals;
};
double scaling_regressor(std::size_t max_degree, double eps);
ScalingFit fit_scaling(const std::vector<ResultRow>& rows);

struct ScalingReport {
  ScalingFit overall;
  std::vector<std::pair<std::string, ScalingFit>> per_eps;
  bool monotone_in_delta = true;
  bool monotone_in_eps = true;
};
/// Requires at least three distinct Δ values.
ScalingReport scaling_report(const std::vector<ResultRow>& rows);
std::string scaling_report_text(const ScalingReport& r);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lmatch
