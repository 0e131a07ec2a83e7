// Command-line driver: analyze, nmin, bench.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wherecheck/analysis.hpp"
#include "wherecheck/frontend.hpp"

using namespace wherecheck;

namespace {

constexpr int kUsageError = 3;

struct Common {
  std::string program, policy;
  unsigned bits = 3;
  std::size_t capacity = kDefaultCapacity;
};

int run_analyze(const Common& c, const std::string& mode, bool witness, bool oracle, bool dump_model,
                bool dump_composed, bool trace) {
  Program program = load_program(c.program);
  Policy policy = load_policy(c.policy);
  check_program(program, policy);
  AnalyzeOptions opts;
  opts.bits = c.bits;
  opts.capacity = c.capacity;
  opts.mode = mode == "tr" ? ComposeMode::tr : ComposeMode::storematch;
  opts.witness = witness;

  Policy gathered = gather_downgrades(program, policy);
  if (dump_model || dump_composed) {
    for (Level level : gathered.lattice.levels()) {
      ModelSkeleton sk = build_model(program, gathered, level, {opts.bits, opts.capacity});
      if (dump_model) std::cout << site_table(program, gathered, sk) << dump_spds(sk.spds);
      if (dump_composed) {
        ComposedModel cm = compose(sk, opts.mode);
        std::cout << "# composed level " << gathered.lattice.name(level) << " mode " << to_string(opts.mode) << '\n'
                  << dump_spds(cm.spds);
      }
    }
  }
  if (trace) {
    Interpreter interp(program, gathered, opts.bits);
    auto counts = static_input_counts(program);
    std::vector<std::vector<Value>> ins(program.channels().size());
    for (std::size_t ch = 0; ch < ins.size(); ++ch) ins[ch].assign(counts[ch], 0);
    Trace t = interp.run(interp.initial(std::vector<Value>(program.variables().size(), 0), ins, opts.capacity), 10000);
    std::cout << "# trace from the all-zero state\n" << dump_trace(program, t) << "# outcome " << to_string(t.outcome) << '\n';
  }

  AnalysisReport report = analyze(program, policy, opts);
  std::cout << format_report(report);
  if (witness)
    for (const auto& l : report.levels)
      if (l.witness) std::cout << format_witness(program, policy, *l.witness, opts.bits, opts.capacity);
  std::cerr << "time " << report.seconds << "s\n";

  if (oracle) {
    OracleOptions o;
    o.bits = opts.bits;
    o.capacity = opts.capacity;
    try {
      OracleVerdict v = check_where_security(program, gathered, o);
      std::cout << "ORACLE where-security " << to_string(v.status) << '\n';
    } catch (const BudgetExceeded& e) {
      std::cout << "ORACLE where-security inconclusive\n";
      std::cerr << "oracle: " << e.what() << '\n';
    }
  }
  return exit_code(report.overall);
}

int run_nmin(const Common& c, unsigned max_bits) {
  Program program = load_program(c.program);
  Policy policy = load_policy(c.policy);
  AnalyzeOptions opts;
  opts.capacity = c.capacity;
  auto n = find_nmin(program, policy, max_bits, opts);
  if (n) std::cout << "NMIN " << *n << '\n';
  else std::cout << "NMIN none\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static where-security verifier"};
  app.require_subcommand(1);

  Common common;
  std::string mode = "storematch";
  bool witness = false, oracle = false, dump_model = false, dump_composed = false, trace = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Check a program against a policy");
  analyze_cmd->add_option("program", common.program, "Program file")->required();
  analyze_cmd->add_option("--policy", common.policy, "Policy file")->required();
  analyze_cmd->add_option("--bits", common.bits, "Bits per value")->check(CLI::Range(1, 16));
  analyze_cmd->add_option("--capacity", common.capacity, "Output channel capacity");
  analyze_cmd->add_option("--mode", mode, "Composition")->check(CLI::IsMember({"storematch", "tr"}));
  analyze_cmd->add_flag("--witness", witness, "Print a decoded counterexample");
  analyze_cmd->add_flag("--oracle", oracle, "Also run the brute-force checker");
  analyze_cmd->add_flag("--dump-model", dump_model, "Print the per-level models");
  analyze_cmd->add_flag("--dump-composed", dump_composed, "Print the composed models");
  analyze_cmd->add_flag("--trace", trace, "Print an interpreter trace from the all-zero state");

  unsigned max_bits = 6;
  auto* nmin_cmd = app.add_subcommand("nmin", "Least bit width exposing a violation");
  nmin_cmd->add_option("program", common.program, "Program file")->required();
  nmin_cmd->add_option("--policy", common.policy, "Policy file")->required();
  nmin_cmd->add_option("--max-bits", max_bits, "Largest width tried")->check(CLI::Range(1, 16));
  nmin_cmd->add_option("--capacity", common.capacity, "Output channel capacity");

  std::string dir;
  auto* bench_cmd = app.add_subcommand("bench", "Compare storematch and tr on a directory");
  bench_cmd->add_option("dir", dir, "Corpus directory")->required();
  bench_cmd->add_option("--bits", common.bits, "Bits per value")->check(CLI::Range(1, 16));
  bench_cmd->add_option("--capacity", common.capacity, "Output channel capacity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*analyze_cmd) return run_analyze(common, mode, witness, oracle, dump_model, dump_composed, trace);
    if (*nmin_cmd) return run_nmin(common, max_bits);
    AnalyzeOptions opts;
    opts.bits = common.bits;
    opts.capacity = common.capacity;
    std::cout << format_bench(bench(dir, opts));
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line() << ':' << e.column() << ": " << e.what() << '\n';
  } catch (const PolicyError& e) {
    std::cerr << "policy error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kUsageError;
}
