#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vc/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitLimit = 2;
constexpr int kExitDiff = 3;

struct RunFlags {
  std::string algo = "vcdpor";
  std::string root;
  std::string classes;
  bool as_json = false;
  size_t max_traces = 0;
  double time_limit = 0;
  std::string dump_path;
  bool prune = false;
  bool read_priority = false;
  bool fail_on_assert = false;
  bool timing = false;
};

void add_engine_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--root", f.root, "Root thread (default: first spawned thread)");
  app->add_option("--max-traces", f.max_traces, "Abort after this many traces");
  app->add_option("--time-limit", f.time_limit, "Abort after this many seconds");
  app->add_flag("--prune", f.prune, "Skip never-good/unobservable leaf write orderings");
  app->add_flag("--read-priority", f.read_priority,
                "Process reads followed by local writes first");
}

std::optional<vc::Program> load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return vc::parse_program(ss.str());
  } catch (const vc::ParseError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

std::optional<vc::ThreadId> resolve_root(const vc::Program& p, const std::string& name) {
  if (name.empty()) return p.default_root();
  auto t = p.thread_by_name(name);
  if (!t) std::cerr << "error: unknown root thread '" << name << "'\n";
  return t;
}

bool classes_requested(const std::string& spec, const char* which) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item == which) return true;
  return false;
}

void fill_classes(vc::Report& rep, const std::string& spec,
                  const std::vector<vc::Trace>& traces, vc::ThreadId root) {
  if (spec.empty()) return;
  vc::ClassCounts c = vc::class_report(traces, root);
  if (classes_requested(spec, "hb")) rep.hb = c.hb;
  if (classes_requested(spec, "vhb")) rep.vhb = c.vhb;
  if (classes_requested(spec, "obs")) rep.obs = c.obs;
  if (classes_requested(spec, "obs_c")) rep.obs_c = c.obs_c;
}

void dump_traces(const std::string& path, const std::vector<vc::Trace>& traces) {
  std::ofstream out(path);
  for (const vc::Trace& t : traces) {
    for (size_t i = 0; i < t.size(); ++i)
      out << (i ? " " : "") << vc::event_to_string(t[i]);
    out << "\n";
  }
}

int cmd_run(const std::string& file, const RunFlags& f) {
  auto prog = load_program(file);
  if (!prog) return kExitInput;
  auto root = resolve_root(*prog, f.root);
  if (!root) return kExitInput;

  vc::Report rep;
  rep.benchmark = fs::path(file).stem().string();
  rep.algo = f.algo;
  rep.root = prog->thread_name(*root);
  auto start = std::chrono::steady_clock::now();
  bool limited = false;

  if (f.algo == "vcdpor") {
    vc::ExplorerConfig cfg;
    cfg.root = *root;
    cfg.prune = f.prune;
    cfg.read_priority = f.read_priority;
    cfg.max_traces = f.max_traces;
    cfg.time_limit_s = f.time_limit;
    cfg.collect_traces = !f.classes.empty() || !f.dump_path.empty();
    auto er = vc::vcdpor_run(*prog, cfg);
    rep.realized_traces = er.realized_traces;
    rep.maximal_traces = er.maximal_traces;
    rep.states_digest = vc::states_digest(er.states);
    rep.violations.assign(er.violations.begin(), er.violations.end());
    limited = er.limit_exceeded;
    fill_classes(rep, f.classes, er.traces, *root);
    if (!f.dump_path.empty()) dump_traces(f.dump_path, er.traces);
  } else {
    auto en = vc::enumerate_maximal(*prog, f.max_traces);
    rep.realized_traces = en.traces.size();
    rep.maximal_traces = en.traces.size();
    auto st = vc::reachable_states(*prog, en.traces);
    rep.states_digest = vc::states_digest(st.states);
    rep.violations.assign(st.violations.begin(), st.violations.end());
    limited = en.limit_exceeded;
    fill_classes(rep, f.classes, en.traces, *root);
    if (!f.dump_path.empty()) dump_traces(f.dump_path, en.traces);
  }
  if (limited) rep.status = "limit";
  if (f.timing)
    rep.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();

  if (f.as_json) {
    std::cout << vc::report_to_json(rep) << "\n";
    std::cerr << vc::report_to_table(rep);
  } else {
    std::cout << vc::report_to_table(rep);
  }
  if (limited) return kExitLimit;
  if (f.fail_on_assert && !rep.violations.empty()) return kExitInput;
  return kExitOk;
}

struct CompareOutcome {
  int exit_code = kExitOk;
  size_t oracle_maximal = 0;
  size_t vcdpor_maximal = 0;
  vc::ClassCounts classes;
  bool classes_computed = false;
  std::vector<std::string> diffs;
};

CompareOutcome compare_one(const vc::Program& prog, vc::ThreadId root, const RunFlags& f) {
  CompareOutcome out;
  size_t oracle_cap = f.max_traces ? f.max_traces : 200000;
  auto en = vc::enumerate_maximal(prog, oracle_cap);
  if (en.limit_exceeded) {
    out.exit_code = kExitLimit;
    out.diffs.push_back("oracle trace limit exceeded");
    return out;
  }
  out.oracle_maximal = en.traces.size();
  auto oracle_states = vc::reachable_states(prog, en.traces);

  vc::ExplorerConfig cfg;
  cfg.root = root;
  cfg.prune = f.prune;
  cfg.read_priority = f.read_priority;
  cfg.time_limit_s = f.time_limit;
  auto er = vc::vcdpor_run(prog, cfg);
  if (er.limit_exceeded) {
    out.exit_code = kExitLimit;
    out.diffs.push_back("vcdpor limit exceeded");
    return out;
  }
  out.vcdpor_maximal = er.maximal_traces;

  if (er.states != oracle_states.states)
    out.diffs.push_back("reachable-state sets differ");
  if (er.violations != oracle_states.violations)
    out.diffs.push_back("assert-violation sets differ");
  if (en.traces.size() <= 5000) {
    out.classes = vc::class_report(en.traces, root);
    out.classes_computed = true;
    if (er.maximal_traces > out.classes.vhb)
      out.diffs.push_back("vcdpor maximal traces exceed oracle VHB classes");
  }
  if (!out.diffs.empty()) out.exit_code = kExitDiff;
  return out;
}

int cmd_compare(const std::string& file, const RunFlags& f) {
  auto prog = load_program(file);
  if (!prog) return kExitInput;
  auto root = resolve_root(*prog, f.root);
  if (!root) return kExitInput;
  CompareOutcome out = compare_one(*prog, *root, f);
  std::cout << "benchmark       " << fs::path(file).stem().string() << "\n"
            << "oracle maximal  " << out.oracle_maximal << "\n"
            << "vcdpor maximal  " << out.vcdpor_maximal << "\n";
  if (out.classes_computed)
    std::cout << "oracle classes  hb=" << out.classes.hb << " vhb=" << out.classes.vhb
              << " obs=" << out.classes.obs << " obs_c=" << out.classes.obs_c << "\n";
  if (out.diffs.empty()) {
    std::cout << "result          PASS\n";
  } else {
    for (const auto& d : out.diffs) std::cout << "DIFF: " << d << "\n";
    std::cout << "result          FAIL\n";
  }
  return out.exit_code;
}

int check_expectations(const json& expect, const CompareOutcome& out,
                       std::vector<std::string>& errors) {
  auto check = [&](const char* key, size_t actual) {
    if (expect.contains(key) && expect[key].get<size_t>() != actual)
      errors.push_back(std::string(key) + ": expected " +
                       std::to_string(expect[key].get<size_t>()) + ", got " +
                       std::to_string(actual));
  };
  check("oracle_maximal", out.oracle_maximal);
  check("vcdpor_maximal", out.vcdpor_maximal);
  if (out.classes_computed) {
    check("hb", out.classes.hb);
    check("vhb", out.classes.vhb);
    check("obs", out.classes.obs);
    check("obs_c", out.classes.obs_c);
  }
  return errors.empty() ? kExitOk : kExitDiff;
}

int cmd_corpus(const std::string& dir, const RunFlags& f) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".vp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int worst = kExitOk;
  for (const auto& path : files) {
    auto prog = load_program(path.string());
    if (!prog) return kExitInput;
    RunFlags flags = f;
    json expect = json::object();
    fs::path side = path;
    side.replace_extension(".expect.json");
    if (fs::exists(side)) {
      std::ifstream in(side);
      in >> expect;
      if (expect.contains("root")) flags.root = expect["root"].get<std::string>();
    }
    auto root = resolve_root(*prog, flags.root);
    if (!root) return kExitInput;
    CompareOutcome out = compare_one(*prog, *root, flags);
    std::vector<std::string> errors = out.diffs;
    check_expectations(expect, out, errors);
    std::cout << path.stem().string() << ": oracle=" << out.oracle_maximal
              << " vcdpor=" << out.vcdpor_maximal;
    if (out.classes_computed)
      std::cout << " hb=" << out.classes.hb << " vhb=" << out.classes.vhb;
    std::cout << (errors.empty() ? " PASS" : " FAIL") << "\n";
    for (const auto& e : errors) std::cout << "  " << e << "\n";
    int code = out.exit_code != kExitOk ? out.exit_code
                                        : (errors.empty() ? kExitOk : kExitDiff);
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"value-happens-before stateless model checker"};
  app.require_subcommand(1);

  RunFlags run_flags, cmp_flags, corpus_flags;
  std::string run_file, cmp_file, corpus_dir;

  CLI::App* run = app.add_subcommand("run", "Run one engine on a program");
  run->add_option("file", run_file, "Program (.vp)")->required();
  run->add_option("--algo", run_flags.algo, "vcdpor | oracle")
      ->check(CLI::IsMember({"vcdpor", "oracle"}));
  run->add_option("--classes", run_flags.classes,
                  "Comma list of equivalences to count (hb,vhb,obs,obs_c)");
  run->add_flag("--json", run_flags.as_json, "JSON report on stdout");
  run->add_option("--dump-traces", run_flags.dump_path, "Write traces to file");
  run->add_flag("--fail-on-assert", run_flags.fail_on_assert,
                "Nonzero exit when asserts fail");
  run->add_flag("--timing", run_flags.timing, "Report wall-clock time");
  add_engine_flags(run, run_flags);

  CLI::App* cmp = app.add_subcommand("compare", "Cross-check vcdpor against the oracle");
  cmp->add_option("file", cmp_file, "Program (.vp)")->required();
  add_engine_flags(cmp, cmp_flags);

  CLI::App* corpus = app.add_subcommand("corpus", "Compare every .vp in a directory");
  corpus->add_option("dir", corpus_dir, "Corpus directory")->required();
  add_engine_flags(corpus, corpus_flags);

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(run_file, run_flags);
    if (cmp->parsed()) return cmd_compare(cmp_file, cmp_flags);
    return cmd_corpus(corpus_dir, corpus_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
