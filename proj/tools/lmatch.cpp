// lmatch: generate graphs, run the matching algorithms, summarize round counts.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lmatch/experiment.hpp"
#include "lmatch/generators.hpp"
#include "lmatch/graph_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

lmatch::GeneratorParams parse_params(const std::vector<std::string>& items) {
  lmatch::GeneratorParams out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw lmatch::InvalidArgument("--param expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::string describe(const std::string& kind, const lmatch::GeneratorParams& params, std::uint64_t seed) {
  std::string s = kind;
  for (const auto& [k, v] : params) s += ":" + k + "=" + v;
  return s + ":seed=" + std::to_string(seed);
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lmatch::InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed matching algorithms on a simulated synchronous network"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph in the text edge-list format");
  std::string gen_kind, gen_out;
  std::vector<std::string> gen_params;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", gen_kind, "path, cycle, star, complete_bipartite, random_regular, erdos_renyi, "
                                    "random_bipartite or grid")
      ->required();
  gen->add_option("--param,-p", gen_params, "Generator parameter key=value (repeatable)");
  gen->add_option("--seed", gen_seed, "Seed for random generators");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run algorithms and check their results");
  std::vector<std::string> graphs, algos, eps_values, run_params;
  std::string gen_name, b_arg, oracle = "auto", out_dir, format = "json";
  std::uint64_t run_seed = 0;
  run->add_option("--graph", graphs, "Graph file (repeatable)");
  run->add_option("--gen", gen_name, "Generate the graph instead of reading it");
  run->add_option("--param,-p", run_params, "Generator parameter key=value (repeatable)");
  run->add_option("--seed", run_seed, "Generator seed");
  run->add_option("--algo", algos, "Algorithm name (repeatable)")->required();
  run->add_option("--eps", eps_values, "Epsilon as a decimal or fraction (repeatable)");
  run->add_option("--b", b_arg, "b-values: a file of 'v b_v' lines or uniform:K");
  run->add_option("--oracle", oracle, "Compare with an exact oracle: on, off or auto")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  run->add_option("--out", out_dir, "Output directory (default: print to stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // report
  auto* report = app.add_subcommand("report", "Fit round counts against log^2(D)*log(1/eps)");
  std::vector<std::string> report_files;
  std::string report_algo;
  report->add_option("files", report_files, "Result files (.json or .csv)")->required();
  report->add_option("--algo", report_algo, "Only rows of this algorithm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const lmatch::Graph g = lmatch::generate(gen_kind, parse_params(gen_params), gen_seed);
      if (gen_out.empty()) {
        lmatch::write_graph(std::cout, g);
      } else {
        lmatch::write_file_atomic(gen_out, lmatch::graph_to_text(g));
      }
      return kExitOk;
    }

    if (run->parsed()) {
      std::vector<std::pair<std::string, lmatch::Graph>> inputs;
      for (const std::string& path : graphs) inputs.emplace_back(path, lmatch::read_graph_file(path));
      if (!gen_name.empty()) {
        const auto params = parse_params(run_params);
        inputs.emplace_back(describe(gen_name, params, run_seed), lmatch::generate(gen_name, params, run_seed));
      }
      if (inputs.empty()) throw lmatch::InvalidArgument("run: give --graph or --gen");
      for (const std::string& a : algos) {
        const auto& names = lmatch::algorithm_names();
        if (std::find(names.begin(), names.end(), a) == names.end())
          throw lmatch::InvalidArgument("unknown algorithm '" + a + "'");
      }
      std::vector<std::optional<lmatch::Rational>> eps_list;
      for (const std::string& e : eps_values) {
        const lmatch::Rational r = lmatch::Rational::parse(e);
        if (r <= lmatch::Rational(0)) throw lmatch::InvalidArgument("--eps must be positive");
        eps_list.emplace_back(r);
      }

      std::vector<lmatch::ResultRow> rows;
      nlohmann::ordered_json timing = nlohmann::ordered_json::array();
      bool violation = false;
      for (const auto& [label, g] : inputs) {
        std::optional<lmatch::BValues> b;
        if (!b_arg.empty()) b = lmatch::parse_b_argument(g, b_arg);
        for (const std::string& a : algos) {
          std::vector<std::optional<lmatch::Rational>> eps_for = {std::nullopt};
          if (lmatch::algorithm_needs_eps(a)) {
            if (eps_list.empty()) throw lmatch::InvalidArgument(a + " requires --eps");
            eps_for = eps_list;
          }
          for (const auto& eps : eps_for) {
            lmatch::RunRequest req{label, a, eps, b, lmatch::parse_oracle_mode(oracle)};
            lmatch::RunOutcome res = lmatch::run_experiment(g, req);
            if (!res.row.warning.empty()) std::cerr << "warning: " << label << " " << a << ": " << res.row.warning << "\n";
            violation |= !res.row.valid || !res.row.within_bound;
            timing.push_back({{"graph", label}, {"algorithm", a}, {"eps", res.row.eps}, {"wall_ms", res.wall_ms}});
            rows.push_back(std::move(res.row));
          }
        }
      }
      const std::string body = format == "csv" ? lmatch::rows_to_csv(rows) : lmatch::rows_to_json(rows);
      if (out_dir.empty()) {
        std::cout << body;
      } else {
        std::filesystem::create_directories(out_dir);
        lmatch::write_file_atomic(out_dir + "/results." + format, body);
        lmatch::write_file_atomic(out_dir + "/timing.json", timing.dump(2) + "\n");
      }
      return violation ? kExitViolation : kExitOk;
    }

    if (report->parsed()) {
      std::vector<lmatch::ResultRow> rows;
      for (const std::string& path : report_files) {
        const std::string text = read_all(path);
        auto part = path.ends_with(".csv") ? lmatch::rows_from_csv(text) : lmatch::rows_from_json(text);
        for (auto& r : part)
          if (report_algo.empty() || r.algorithm == report_algo) rows.push_back(std::move(r));
      }
      std::cout << lmatch::scaling_report_text(lmatch::scaling_report(rows));
      return kExitOk;
    }
  } catch (const lmatch::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}
