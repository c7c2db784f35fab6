// qchr: run rule programs and game presets, benchmark suites, generate
// matrix instances.
//
// Exit codes: 0 valid, 1 invalid, 2 error or limit exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qchr/qchr.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;

struct Options {
  std::string program_file;
  std::string preset;
  std::string goal;
  int n = 4;
  bool n_set = false;
  int rows = 4;
  int cols = 4;
  bool rows_set = false;
  std::string matrix_file;
  int depth = 4;
  bool depth_set = false;
  std::uint64_t seed = 1;
  double density = 0.5;
  bool tabling = false;
  std::int64_t timeout_ms = 300000;
  std::optional<std::uint64_t> failure_limit;
  bool witness = false;
  bool pretty = false;
  std::string bench;
  int reps = 1;
  std::string gen_matrix;
};

/// Everything one solve needs: rules, goal and the host they run against.
struct Instance {
  std::string id;
  qchr::Program program;
  qchr::Goal goal;
  std::unique_ptr<qchr::HostState> host;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

qchr::games::MatrixInstance matrix_from(const Options& o) {
  if (!o.matrix_file.empty()) return qchr::games::load_matrix(o.matrix_file);
  return qchr::games::random_matrix(o.depth, o.seed, o.density);
}

Instance nim_instance(int n) {
  return {"nim-" + std::to_string(n), qchr::games::nim_program(), qchr::games::nim_goal(n),
          std::make_unique<qchr::NullHost>()};
}

Instance matrix_instance(const qchr::games::MatrixInstance& m, const std::string& id) {
  return {id, qchr::games::matrix_program(), qchr::games::matrix_goal(m.depth),
          std::make_unique<qchr::games::MatrixHost>(m)};
}

Instance connect4_instance(int rows, int cols) {
  return {"connect4-" + std::to_string(rows) + "x" + std::to_string(cols), qchr::games::connect4_program(cols),
          qchr::games::connect4_goal(), std::make_unique<qchr::games::Connect4Host>(rows, cols)};
}

Instance single_instance(const Options& o) {
  Instance inst;
  if (o.preset == "nim") {
    inst = nim_instance(o.n);
  } else if (o.preset == "matrix") {
    auto m = matrix_from(o);
    std::string id = o.matrix_file.empty()
                         ? "matrix-d" + std::to_string(m.depth) + "-s" + std::to_string(o.seed)
                         : "matrix-" + o.matrix_file;
    inst = matrix_instance(m, id);
  } else if (o.preset == "connect4") {
    inst = connect4_instance(o.rows, o.cols);
  } else if (!o.preset.empty()) {
    throw CLI::ValidationError("--preset", "unknown preset '" + o.preset + "'");
  } else {
    inst.host = std::make_unique<qchr::NullHost>();
  }
  if (!o.program_file.empty()) {
    inst.program = qchr::parse_program(read_file(o.program_file));
    inst.id = o.program_file;
  }
  if (!o.goal.empty()) {
    inst.goal = qchr::parse_goal(o.goal);
    inst.id += inst.id.empty() ? o.goal : ":" + o.goal;
  }
  if (inst.goal.atoms.empty()) throw CLI::ValidationError("--goal", "a goal is required with --program");
  return inst;
}

qchr::SolveOptions solve_options(const Options& o) {
  qchr::SolveOptions s;
  s.tabling = o.tabling;
  s.failure_limit = o.failure_limit;
  if (o.timeout_ms > 0) s.time_limit_ms = o.timeout_ms;
  s.collect_witness = o.witness;
  return s;
}

void print_pretty(const std::vector<json>& reports) {
  std::cout << std::left << std::setw(28) << "instance" << std::setw(9) << "status" << std::right << std::setw(14)
            << "failures" << std::setw(12) << "rules" << std::setw(10) << "hits" << std::setw(12) << "time(ms)"
            << std::setw(9) << "witness" << "\n";
  for (const auto& j : reports) {
    std::cout << std::left << std::setw(28) << j["instance"].get<std::string>() << std::setw(9)
              << j["status"].get<std::string>() << std::right << std::setw(14) << j["failures"].get<std::uint64_t>()
              << std::setw(12) << j["rule_applications"].get<std::uint64_t>() << std::setw(10)
              << j["table_hits"].get<std::uint64_t>() << std::setw(12) << std::fixed << std::setprecision(2)
              << j["elapsed_ms"].get<double>() << std::setw(9)
              << (j["witness"].is_null() ? std::string("-") : std::to_string(j["witness"].get<std::int64_t>()))
              << "\n";
  }
}

int run_single(const Options& o) {
  Instance inst = single_instance(o);
  auto r = qchr::solve(inst.program, inst.goal, *inst.host, solve_options(o));
  json j = qchr::report_json(inst.id, r);
  if (o.pretty) {
    print_pretty({j});
  } else {
    std::cout << j.dump() << "\n";
  }
  switch (r.verdict) {
    case qchr::Verdict::Valid: return kExitValid;
    case qchr::Verdict::Invalid: return kExitInvalid;
    default: return kExitError;
  }
}

std::vector<Instance> bench_suite(const Options& o) {
  std::vector<Instance> out;
  if (o.bench == "nim") {
    int max_n = o.n_set ? o.n : (o.tabling ? 80 : 30);
    for (int n = 2; n <= max_n; ++n) out.push_back(nim_instance(n));
  } else if (o.bench == "matrix") {
    int max_depth = o.depth_set ? o.depth : 10;
    for (int d = 4; d <= max_depth; ++d) {
      auto m = qchr::games::random_matrix(d, o.seed, o.density);
      out.push_back(matrix_instance(m, "matrix-d" + std::to_string(d) + "-s" + std::to_string(o.seed)));
    }
  } else if (o.bench == "connect4") {
    std::vector<std::pair<int, int>> sizes = {{3, 3}, {4, 3}, {4, 4}};
    if (o.rows_set && std::find(sizes.begin(), sizes.end(), std::pair{o.rows, o.cols}) == sizes.end())
      sizes.emplace_back(o.rows, o.cols);
    for (auto [r, c] : sizes) out.push_back(connect4_instance(r, c));
  } else {
    throw CLI::ValidationError("--bench", "unknown suite '" + o.bench + "'");
  }
  return out;
}

int run_bench(const Options& o) {
  if (o.reps < 1) throw CLI::ValidationError("--reps", "must be at least 1");
  std::vector<json> reports;
  for (Instance& inst : bench_suite(o)) {
    std::optional<qchr::SolveResult> first;
    double total_ms = 0;
    bool deterministic = true;
    int runs = 0;
    for (int rep = 0; rep < o.reps; ++rep) {
      ++runs;
      auto r = qchr::solve(inst.program, inst.goal, *inst.host, solve_options(o));
      total_ms += r.stats.elapsed_ms;
      if (!first) {
        first = std::move(r);
      } else if (r.verdict != first->verdict || !r.stats.same_counts(first->stats)) {
        deterministic = false;
      }
      if (first->verdict == qchr::Verdict::LimitExceeded) break;
    }
    json j = qchr::report_json(inst.id, *first, total_ms / runs);
    j["reps"] = runs;
    if (!deterministic) j["deterministic"] = false;
    if (!o.pretty) std::cout << j.dump() << "\n" << std::flush;
    reports.push_back(std::move(j));
  }
  if (o.pretty) print_pretty(reports);
  return kExitValid;
}

int run_gen_matrix(const Options& o) {
  auto m = qchr::games::random_matrix(o.depth, o.seed, o.density);
  std::string text = qchr::games::format_matrix(m);
  if (o.gen_matrix == "-") {
    std::cout << text;
  } else {
    std::ofstream out(o.gen_matrix);
    if (!out) throw std::runtime_error("cannot write " + o.gen_matrix);
    out << text;
  }
  return kExitValid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantified constraint handling rules solver"};
  Options o;
  auto* program = app.add_option("--program", o.program_file, "Rule program file");
  auto* preset = app.add_option("--preset", o.preset, "Built-in model")
                     ->check(CLI::IsMember({"nim", "matrix", "connect4"}));
  app.add_option("--goal", o.goal, "Goal, e.g. \"nimfibo(4)\"");
  auto* n = app.add_option("--n", o.n, "Nim: initial number of matches")->check(CLI::PositiveNumber);
  auto* rows = app.add_option("--rows", o.rows, "Connect four: rows")->check(CLI::PositiveNumber);
  app.add_option("--cols", o.cols, "Connect four: columns")->check(CLI::PositiveNumber)->needs(rows);
  auto* matrix = app.add_option("--matrix", o.matrix_file, "Matrix instance file");
  auto* depth = app.add_option("--depth", o.depth, "Matrix: number of moves")->check(CLI::Range(1, 30));
  app.add_option("--seed", o.seed, "Matrix: random seed");
  app.add_option("--density", o.density, "Matrix: probability of a 1 cell")->check(CLI::Range(0.0, 1.0));
  app.add_flag("--tabling", o.tabling, "Memoize verdicts of quantified sub-goals");
  app.add_option("--timeout-ms", o.timeout_ms, "Time limit per solve (0 disables)");
  app.add_option("--failure-limit", o.failure_limit, "Stop after this many failures");
  app.add_flag("--witness", o.witness, "Report the first existential move");
  app.add_flag("--pretty", o.pretty, "Human-readable table output");
  auto* bench = app.add_option("--bench", o.bench, "Benchmark suite")
                    ->check(CLI::IsMember({"nim", "matrix", "connect4"}));
  app.add_option("--reps", o.reps, "Benchmark repetitions")->check(CLI::PositiveNumber);
  auto* gen = app.add_option("--gen-matrix", o.gen_matrix, "Write a random matrix instance ('-' for stdout)");
  matrix->excludes(depth);
  gen->excludes(program)->excludes(preset)->excludes(bench)->needs(depth);
  bench->excludes(program)->excludes(preset);

  try {
    app.parse(argc, argv);
    o.n_set = n->count() > 0;
    o.rows_set = rows->count() > 0;
    o.depth_set = depth->count() > 0;
    if (!o.gen_matrix.empty()) return run_gen_matrix(o);
    if (!o.bench.empty()) return run_bench(o);
    if (o.program_file.empty() && o.preset.empty())
      throw CLI::RequiredError("one of --program, --preset, --bench or --gen-matrix");
    return run_single(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const qchr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
