#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wherecheck/analysis.hpp"
#include "wherecheck/frontend.hpp"

namespace wherecheck {

const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::secure: return "secure";
  case Verdict::insecure: return "insecure";
  case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
  case Verdict::secure: return 0;
  case Verdict::insecure: return 1;
  case Verdict::inconclusive: return 2;
  }
  return 2;
}

namespace {

LevelResult analyze_level(const Program& program, const Policy& policy, Level level, const AnalyzeOptions& options) {
  LevelResult res;
  res.level = level;
  res.level_name = policy.lattice.name(level);
  ModelSkeleton skeleton = build_model(program, policy, level, {options.bits, options.capacity});
  res.skeleton_rules = skeleton.spds.rules.size();
  res.skeleton_bits = skeleton.spds.layout.total_bits();
  ComposedModel model = compose(skeleton, options.mode);
  res.composed_rules = model.spds.rules.size();
  res.composed_bits = model.spds.layout.total_bits();
  try {
    SymbolicContext ctx(model.spds.layout, options.node_limit);
    PostStar post(model.spds, ctx);
    if (options.full_saturation) post.saturate();
    else post.saturate(model.error);
    res.steps = post.steps();
    res.transitions = post.transitions();
    if (!post.reached(model.error)) return res;
    res.verdict = Verdict::insecure;
    if (options.witness) {
      res.witness = extract_witness(model, ctx, model.error);
      if (res.witness) decode_and_replay(*res.witness, model, program, policy, Property::where_security);
    }
  } catch (const BudgetExceeded& e) {
    res.verdict = Verdict::inconclusive;
    res.reason = e.what();
  }
  return res;
}

} // namespace

AnalysisReport analyze(const Program& program, const Policy& raw_policy, const AnalyzeOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Policy policy = gather_downgrades(program, raw_policy);
  AnalysisReport report;
  report.bits = options.bits;
  report.capacity = options.capacity;
  report.mode = options.mode;
  bool inconclusive = false;
  for (Level level : policy.lattice.levels()) {
    report.levels.push_back(analyze_level(program, policy, level, options));
    if (report.levels.back().verdict == Verdict::insecure) report.overall = Verdict::insecure;
    if (report.levels.back().verdict == Verdict::inconclusive) inconclusive = true;
  }
  if (report.overall != Verdict::insecure && inconclusive) report.overall = Verdict::inconclusive;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::optional<unsigned> find_nmin(const Program& program, const Policy& policy, unsigned max_bits,
                                  const AnalyzeOptions& options) {
  if (max_bits < 1) throw std::invalid_argument("max-bits must be at least 1");
  AnalyzeOptions o = options;
  o.witness = false;
  for (unsigned b = 1; b <= max_bits; ++b) {
    o.bits = b;
    if (analyze(program, policy, o).overall == Verdict::insecure) return b;
  }
  return std::nullopt;
}

std::string format_report(const AnalysisReport& r) {
  std::ostringstream out;
  out << "CONFIG bits=" << r.bits << " capacity=" << r.capacity << " mode=" << to_string(r.mode) << '\n';
  for (const auto& l : r.levels) {
    out << "STATS level=" << l.level_name << " rules=" << l.skeleton_rules << '/' << l.composed_rules
        << " bits=" << l.skeleton_bits << '/' << l.composed_bits << " steps=" << l.steps
        << " transitions=" << l.transitions << '\n';
    out << "RESULT level=" << l.level_name << " verdict=" << to_string(l.verdict);
    if (!l.reason.empty()) out << " reason=\"" << l.reason << '"';
    out << '\n';
  }
  out << "OVERALL verdict=" << to_string(r.overall) << '\n';
  return out.str();
}

namespace {

std::string store_text(const Program& program, const std::vector<Value>& mu) {
  std::string s;
  for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? " " : "") + program.variables()[i] + "=" + std::to_string(mu[i]);
  return s.empty() ? "-" : s;
}

std::string inputs_text(const Program& program, const std::vector<std::vector<Value>>& ins) {
  std::string s;
  for (std::size_t ch = 0; ch < ins.size(); ++ch) {
    if (ins[ch].empty()) continue;
    s += (s.empty() ? "" : " ") + program.channels()[ch] + "=[";
    for (std::size_t k = 0; k < ins[ch].size(); ++k) s += (k ? "," : "") + std::to_string(ins[ch][k]);
    s += "]";
  }
  return s.empty() ? "-" : s;
}

} // namespace

std::string format_witness(const Program& program, const Policy& policy, const Witness& w, unsigned bits,
                           std::size_t capacity) {
  std::ostringstream out;
  out << "WITNESS level=" << policy.lattice.name(w.level) << " steps=" << w.steps.size() << " observable=\""
      << w.observable << "\" replayed=" << (w.replayed ? "yes" : "no");
  if (w.replayed) out << " replay-observable=\"" << w.replay_observable << '"';
  out << '\n';
  Policy gathered = gather_downgrades(program, policy);
  Interpreter interp(program, gathered, bits);
  for (int run = 1; run <= 2; ++run) {
    const auto& mu = run == 1 ? w.pair.mu1 : w.pair.mu2;
    const auto& ins = run == 1 ? w.pair.ins1 : w.pair.ins2;
    out << "RUN" << run << " store: " << store_text(program, mu) << " inputs: " << inputs_text(program, ins) << '\n';
    Configuration c = interp.initial(mu, ins, capacity);
    Trace t = interp.run(c, 10000);
    std::istringstream lines(dump_trace(program, t));
    for (std::string line; std::getline(lines, line);) out << "  " << line << '\n';
    out << "  outcome: " << to_string(t.outcome) << '\n';
  }
  return out.str();
}

unsigned BenchEntry::bits(const AnalysisReport& r) const {
  unsigned b = 0;
  for (const auto& l : r.levels) b += l.composed_bits;
  return b;
}

std::size_t BenchEntry::steps(const AnalysisReport& r) const {
  std::size_t s = 0;
  for (const auto& l : r.levels) s += l.steps;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path) { return parse_program(read_file(path)); }
Policy load_policy(const std::string& path) { return parse_policy(read_file(path)); }

std::vector<BenchEntry> bench(const std::string& dir, const AnalyzeOptions& options) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.find('.') == std::string::npos) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  std::vector<BenchEntry> out;
  AnalyzeOptions o = options;
  o.witness = false;
  o.full_saturation = true;
  for (const auto& name : names) {
    const fs::path base(dir);
    const fs::path own = base / (name + ".policy");
    Program program = load_program((base / name).string());
    Policy policy = load_policy(fs::exists(own) ? own.string() : (base / "default.policy").string());
    BenchEntry e;
    e.name = name;
    o.mode = ComposeMode::storematch;
    e.storematch = analyze(program, policy, o);
    o.mode = ComposeMode::tr;
    e.tr = analyze(program, policy, o);
    // A user output channel visible below the top of the lattice.
    for (const auto& ch : program.channels()) {
      const auto& decl = policy.channel(ch);
      if (decl.direction != Direction::output) continue;
      for (Level l : policy.lattice.levels())
        if (l != decl.level && policy.lattice.leq(decl.level, l)) e.has_low_output = true;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_bench(const std::vector<BenchEntry>& entries) {
  std::ostringstream out;
  std::size_t sm_total = 0, tr_total = 0;
  for (const auto& e : entries) {
    out << "BENCH " << e.name << " low-output=" << (e.has_low_output ? "yes" : "no")
        << " storematch: verdict=" << to_string(e.storematch.overall) << " bits=" << e.bits(e.storematch)
        << " steps=" << e.steps(e.storematch) << " tr: verdict=" << to_string(e.tr.overall)
        << " bits=" << e.bits(e.tr) << " steps=" << e.steps(e.tr) << '\n';
    sm_total += e.steps(e.storematch);
    tr_total += e.steps(e.tr);
  }
  out << "BENCH-TOTAL storematch-steps=" << sm_total << " tr-steps=" << tr_total;
  if (tr_total > 0) {
    std::ostringstream ratio;
    ratio.precision(3);
    ratio << std::fixed << static_cast<double>(sm_total) / static_cast<double>(tr_total);
    out << " ratio=" << ratio.str();
  }
  out << '\n';
  return out.str();
}

} // namespace wherecheck
