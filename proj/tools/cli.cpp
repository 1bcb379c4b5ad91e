#include "cli.hpp"

#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kv/checklist.hpp"
#include "kv/display.hpp"
#include "kv/errors.hpp"
#include "kv/harness.hpp"
#include "kv/journal.hpp"
#include "kv/lifecycle.hpp"
#include "kv/pricing.hpp"
#include "kv/report.hpp"

namespace kv::cli {
namespace {

using nlohmann::json;
namespace lc = kv::lifecycle;

pricing::CdfMode make_mode(const std::string& cdf, const std::string& pi) {
  if (cdf == "reference") return pricing::kReference;
  return pricing::PolynomialCdf{pi == "paper" ? pricing::PiMode::PaperLiteral : pricing::PiMode::FullPrecision};
}

void add_cdf_flags(CLI::App* cmd, std::string& cdf, std::string& pi) {
  cmd->add_option("--cdf", cdf, "Normal CDF path")->check(CLI::IsMember({"reference", "poly"}));
  cmd->add_option("--pi", pi, "Pi constant for the polynomial path")->check(CLI::IsMember({"paper", "full"}));
}

void add_format_flag(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "records"}));
}

// ---------------------------------------------------------------- price

struct PriceArgs {
  pricing::PricingInputs inputs{"-", 0, 0, 0, 0, 0};
  std::string cdf = "reference";
  std::string pi = "full";
  std::string format = "table";
  bool intrinsic = false;
};

void print_label(std::ostream& out, const char* label, const std::string& value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%-10s ", label);
  out << buf << value << '\n';
}

void print_inputs(std::ostream& out, const pricing::PricingInputs& in) {
  out << "Black-Scholes Option Pricing Engine\n";
  print_label(out, "Ticker", in.ticker);
  print_label(out, "S", format_exact(in.spot));
  print_label(out, "X", format_exact(in.strike));
  print_label(out, "T", format_exact(in.time_years));
  print_label(out, "r", format_fixed(in.rate * 100.0, 2) + "%");
  print_label(out, "sigma", format_fixed(in.sigma * 100.0, 2) + "%");
}

void run_price(const PriceArgs& a, std::ostream& out) {
  const auto& in = a.inputs;
  if (a.intrinsic) {
    const double value = pricing::discounted_intrinsic(in);
    if (a.format == "records") {
      out << json{{"ticker", in.ticker}, {"S", in.spot}, {"X", in.strike}, {"T", in.time_years},
                  {"r", in.rate},        {"sigma", in.sigma}, {"intrinsic", value}}
                 .dump()
          << '\n';
      return;
    }
    print_inputs(out, in);
    print_label(out, "Intrinsic", format_fixed(value, 2));
    return;
  }

  pricing::PriceBreakdown b;
  try {
    b = pricing::black_scholes_call(in, make_mode(a.cdf, a.pi));
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError("", std::string(e.what()) + " (try `price --intrinsic`)");
  }
  if (a.format == "records") {
    out << json{{"ticker", in.ticker},
                {"S", in.spot},
                {"X", in.strike},
                {"T", in.time_years},
                {"r", in.rate},
                {"sigma", in.sigma},
                {"cdf", pricing::to_string(b.cdf_mode)},
                {"d1", b.d1},
                {"d2", b.d2},
                {"nd1", b.n_d1},
                {"nd2", b.n_d2},
                {"discount_factor", b.discount_factor},
                {"call_price", b.call_price}}
               .dump()
        << '\n';
    return;
  }
  print_inputs(out, in);
  print_label(out, "CDF", pricing::to_string(b.cdf_mode));
  print_label(out, "d1", format_fixed(b.d1, 4));
  print_label(out, "d2", format_fixed(b.d2, 4));
  print_label(out, "N(d1)", format_fixed(b.n_d1, 4));
  print_label(out, "N(d2)", format_fixed(b.n_d2, 4));
  print_label(out, "Discount", format_fixed(b.discount_factor, 4));
  print_label(out, "Call Price", format_fixed(b.call_price, 2));
}

// ---------------------------------------------------------------- payoff

struct PayoffArgs {
  double strike = 0.0;
  std::optional<double> premium;
  std::optional<double> s_min;
  std::optional<double> s_max;
  int points = 21;
  std::string format = "table";
};

void run_payoff(const PayoffArgs& a, std::ostream& out) {
  const double lo = a.s_min.value_or(0.0);
  const double hi = a.s_max.value_or(2.0 * a.strike);
  const auto series = pricing::payoff_series(a.strike, a.premium, lo, hi, a.points);
  if (a.format == "records") {
    for (const auto& p : series)
      out << json{{"terminal_price", p.terminal_price}, {"payoff", p.payoff}}.dump() << '\n';
    return;
  }
  out << "# terminal_price payoff" << (a.premium ? " (net of premium)" : "") << '\n';
  for (const auto& p : series) out << format_fixed(p.terminal_price, 2) << ' ' << format_fixed(p.payoff, 2) << '\n';
}

// ---------------------------------------------------------------- regress / replay

struct RegressArgs {
  std::string golden;
  bool dual = false;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  double tol = 5e-3;
  unsigned threads = 1;
  std::string cdf;
  std::string pi = "full";
  std::string format = "table";
};

int run_regress(const RegressArgs& a, std::ostream& out) {
  harness::RegressionReport report;
  if (a.dual) {
    harness::DualPathOptions opts;
    opts.candidate = make_mode(a.cdf.empty() ? "poly" : a.cdf, a.pi);
    opts.run.threads = a.threads;
    if (!a.golden.empty()) {
      std::vector<harness::NamedInputs> inputs;
      for (const auto& gc : harness::load_golden(std::filesystem::path(a.golden)))
        inputs.push_back({gc.case_id, gc.inputs});
      report = harness::run_dual_path_regression(inputs, a.tol, opts);
    } else {
      report = harness::run_dual_path_sample(a.n, a.seed, a.tol, opts);
    }
  } else {
    if (a.golden.empty()) throw ValidationError("golden", "pass --golden FILE or --dual");
    const auto cases = harness::load_golden(std::filesystem::path(a.golden));
    report = harness::run_golden_regression(cases, make_mode(a.cdf.empty() ? "reference" : a.cdf, a.pi),
                                            {a.threads});
  }
  if (a.format == "records")
    harness::write_records(out, report);
  else
    harness::write_table(out, report);
  return report.ok() ? kSuccess : kSuiteFailures;
}

struct ReplayArgs {
  std::string tape;
  std::string cdf = "reference";
  std::string pi = "full";
  std::string format = "table";
  std::optional<double> max_dev;
};

int run_replay(const ReplayArgs& a, std::ostream& out) {
  const auto tape = harness::load_tape(std::filesystem::path(a.tape));
  const auto stats = harness::replay_tape(tape, make_mode(a.cdf, a.pi));
  if (a.format == "records")
    harness::write_records(out, stats);
  else
    harness::write_table(out, stats);
  if (a.max_dev && stats.overall && stats.overall->max_abs > *a.max_dev) return kSuiteFailures;
  return kSuccess;
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
  std::string data_dir;
  std::string project;
  std::string lock = "wait";
  int spiral_cap = lc::kDefaultSpiralSoftCap;

  std::string name;
  std::string id;
  std::string note;
  std::string digest;
  int target_step = 0;
  int gate = 0;
  std::string decision;
  std::string target_stage;
  std::string scores;
  std::vector<std::string> notes;
  bool interactive = false;
  std::string intra_outcome;
  std::string template_name;
  int item = 0;
  std::string format = "table";
};

journal::JournalStore make_store(const ProjectArgs& a) {
  const auto dir = a.data_dir.empty() ? journal::default_data_dir() : std::filesystem::path(a.data_dir);
  return journal::JournalStore(dir, a.lock == "fail" ? journal::LockMode::FailFast : journal::LockMode::Wait);
}

std::string resolve_project(const journal::JournalStore& store, const std::string& requested) {
  if (!requested.empty()) return requested;
  const auto ids = store.list_projects();
  if (ids.empty()) throw ValidationError("project", "no projects in " + store.data_dir().string());
  if (ids.size() > 1) throw ValidationError("project", "several projects in " + store.data_dir().string() + "; pass --project");
  return ids.front();
}

std::string slugify(const std::string& name) {
  std::string slug;
  for (const char ch : name) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isalnum(uc)) {
      slug.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!slug.empty() && slug.back() != '-') {
      slug.push_back('-');
    }
  }
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  return slug.empty() ? "project" : slug;
}

std::string position_line(const lc::ProjectState& s) {
  std::string line = lc::describe(s.position) + ", cycle " + std::to_string(s.cycle);
  if (const auto* at = std::get_if<lc::AtStep>(&s.position))
    line += ", spiral iteration " + std::to_string(at->iteration);
  return line;
}

void print_status(std::ostream& out, const lc::ProjectState& s, int spiral_cap) {
  out << "Project: " << s.project_id << " (" << s.name << ")\n";
  out << "Position: " << position_line(s) << '\n';
  if (const auto* at = std::get_if<lc::AtStep>(&s.position)) {
    out << "Step: Stage " << lc::stage_roman(at->address.stage) << " " << lc::stage_name(at->address.stage)
        << " / " << lc::step_name(at->address.stage, at->address.step) << '\n';
  }
  out << "Journal: " << s.last_seq << " events\n";
  const auto pending = lc::pending_items(s);
  out << "Pending checklist items (* = can be marked now): " << pending.size() << '\n';
  for (const auto& p : pending) {
    out << (lc::binding_matches(p.item->binding, s.position) ? "  * " : "    ") << lc::template_name(p.template_id)
        << " #" << p.item->id << " " << p.item->title << " [" << lc::describe(p.item->binding) << "]\n";
  }
  for (const auto& w : lc::spiral_warnings(s, spiral_cap)) out << "warning: " << w << '\n';
}

std::string event_details(const lc::EventKind& kind) {
  struct Visitor {
    std::string operator()(const lc::ProjectCreated& e) const { return e.project_id + " \"" + e.name + "\""; }
    std::string operator()(const lc::StepCompleted& e) const {
      std::string d = e.address.to_string() + (e.note.empty() ? "" : " note=\"" + e.note + "\"");
      if (e.artifact_digest) d += " digest=" + *e.artifact_digest;
      return d;
    }
    std::string operator()(const lc::LoopBack& e) const { return e.from.to_string() + " -> " + e.to.to_string(); }
    std::string operator()(const lc::GateOpened& e) const { return "Gate " + std::to_string(e.gate); }
    std::string operator()(const lc::GateDecided& e) const {
      std::string d = "Gate " + std::to_string(e.gate) + " " + lc::to_string(e.decision) + " scores";
      for (const auto c : lc::kAllCriteria)
        if (const auto& entry = e.criteria.get(c)) d += " " + std::string(lc::criterion_key(c)) + "=" + std::to_string(entry->score);
      return d;
    }
    std::string operator()(const lc::IntraStageGateDecided& e) const {
      return e.loop_back_to ? "loop back to K|V 1." + std::to_string(*e.loop_back_to) : std::string("proceed");
    }
    std::string operator()(const lc::ChecklistItemDone& e) const {
      return std::string(lc::template_name(e.template_id)) + " #" + std::to_string(e.item_id) +
             (e.note.empty() ? "" : " note=\"" + e.note + "\"");
    }
    std::string operator()(const lc::Resumed& e) const { return "Gate " + std::to_string(e.gate); }
    std::string operator()(const lc::CycleRestarted&) const { return {}; }
  };
  return std::visit(Visitor{}, kind);
}

lc::GateDecision parse_decision(const std::string& decision, const std::string& target) {
  std::string d;
  for (const char ch : decision) d.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (d == "go") return lc::Go{};
  if (d == "kill") return lc::Kill{};
  if (d == "hold") return lc::Hold{};
  if (d == "return") {
    if (target.empty()) throw ValidationError("target", "--decision=return needs --target STAGE");
    return lc::Return{lc::parse_stage(target)};
  }
  throw ValidationError("decision", "expected go|kill|hold|return, got '" + decision + "'");
}

int parse_score(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const int score = std::stoi(text, &used);
    if (used == text.size()) return score;
  } catch (const std::exception&) {
  }
  throw ValidationError(key, "score must be an integer, got '" + text + "'");
}

lc::GateCriteria build_criteria(const ProjectArgs& a, bool prompt, std::istream& in, std::ostream& prompts) {
  lc::GateCriteria criteria;
  std::map<lc::Criterion, std::string> notes;
  for (const auto& n : a.notes) {
    const auto eq = n.find('=');
    const auto c = eq == std::string::npos ? std::nullopt : lc::parse_criterion(n.substr(0, eq));
    if (!c) throw ValidationError("note", "expected criterion=text, got '" + n + "'");
    notes[*c] = n.substr(eq + 1);
  }
  std::optional<int> all;
  std::stringstream list(a.scores);
  std::string pair;
  while (std::getline(list, pair, ',')) {
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) throw ValidationError("scores", "expected criterion=score, got '" + pair + "'");
    const std::string key = pair.substr(0, eq);
    const int score = parse_score(pair.substr(eq + 1), key);
    if (key == "all") {
      all = score;
      continue;
    }
    const auto c = lc::parse_criterion(key);
    if (!c) throw ValidationError("scores", "unknown criterion '" + key + "'");
    criteria.set(*c, score, notes[*c]);
  }
  for (const auto c : lc::kAllCriteria)
    if (!criteria.get(c) && all) criteria.set(c, *all, notes[c]);

  if (prompt) {
    for (const auto c : criteria.missing()) {
      prompts << lc::criterion_key(c) << " score (1-5) [note]: " << std::flush;
      std::string line;
      if (!std::getline(in, line)) break;
      std::istringstream fields(line);
      std::string score_text;
      fields >> score_text;
      std::string note;
      std::getline(fields >> std::ws, note);
      criteria.set(c, parse_score(score_text, std::string(lc::criterion_key(c))), note.empty() ? notes[c] : note);
    }
  }
  return criteria;
}

using Mutation = std::function<const lc::JournalEvent&(lc::Project&)>;

void mutate(const ProjectArgs& a, std::ostream& out, const Mutation& op) {
  auto store = make_store(a);
  const auto id = resolve_project(store, a.project);
  auto file = store.open(id, journal::JournalFile::Access::Write);
  auto project = lc::Project::from_journal(file.load());
  const auto& event = op(project);
  file.append(event);
  out << "seq " << event.seq << ": " << lc::kind_name(event.kind) << " -> " << position_line(project.state()) << '\n';
}

lc::ProjectState load_state(const ProjectArgs& a, std::vector<lc::JournalEvent>* events = nullptr) {
  auto store = make_store(a);
  const auto id = resolve_project(store, a.project);
  auto file = store.open(id, journal::JournalFile::Access::Read);
  auto journal = file.load();
  auto state = lc::replay_journal(journal);
  if (events) *events = std::move(journal);
  return state;
}

void run_init(const ProjectArgs& a, std::ostream& out) {
  if (a.name.empty()) throw ValidationError("name", "must not be empty");
  auto store = make_store(a);
  std::string id = a.id;
  if (id.empty()) {
    const std::string base = slugify(a.name);
    id = base;
    for (int n = 2; store.exists(id); ++n) id = base + "-" + std::to_string(n);
  }
  auto project = lc::Project::create(a.name, id);
  auto file = store.create(id);
  file.append(project.journal().front());
  out << "Created project " << id << " at " << position_line(project.state()) << '\n';
}

void setup_project(CLI::App& app, ProjectArgs& a, std::ostream& out, std::ostream& err, std::istream& in) {
  auto* project = app.add_subcommand("project", "K|V lifecycle journal commands");
  project->require_subcommand(1);
  project->fallthrough();
  project->add_option("--data-dir", a.data_dir, "Journal directory (default $KV_DATA_DIR or ./kv-data)");
  project->add_option("--project,-p", a.project, "Project id (optional when only one exists)");
  project->add_option("--lock", a.lock, "Behaviour when another writer holds the journal")
      ->check(CLI::IsMember({"wait", "fail"}));
  project->add_option("--spiral-cap", a.spiral_cap, "Iterations per stage before status warns");

  auto* init = project->add_subcommand("init", "Create a project at K|V 1.1");
  init->add_option("name", a.name, "Project name")->required();
  init->add_option("--id", a.id, "Project id (default: derived from the name)");
  init->callback([&] { run_init(a, out); });

  auto* step = project->add_subcommand("step", "Complete the current step");
  step->add_option("--note,-n", a.note, "Deliverable note");
  step->add_option("--digest", a.digest, "Content digest of the deliverable");
  step->callback([&] {
    mutate(a, out, [&](lc::Project& p) -> const lc::JournalEvent& {
      return p.complete_step(a.note, a.digest.empty() ? std::nullopt : std::optional<std::string>(a.digest));
    });
  });

  auto* loop = project->add_subcommand("loopback", "Spiral back to an earlier step of the current stage");
  loop->add_option("step", a.target_step, "Target step 1..4")->required();
  loop->callback([&] {
    mutate(a, out, [&](lc::Project& p) -> const lc::JournalEvent& { return p.loop_back(a.target_step); });
  });

  auto* gate = project->add_subcommand("gate", "Record a gate decision");
  gate->add_option("gate", a.gate, "Gate 1..3")->required();
  gate->add_option("--decision", a.decision, "go|kill|hold|return")->required();
  gate->add_option("--target", a.target_stage, "Stage for --decision=return (I..III)");
  gate->add_option("--scores", a.scores, "criterion=score,... (1..5); 'all=N' fills the rest");
  gate->add_option("--note", a.notes, "criterion=text (repeatable)");
  gate->add_flag("--interactive", a.interactive, "Prompt for unscored criteria");
  gate->callback([&] {
    const bool prompt = a.interactive || (&in == &std::cin && ::isatty(STDIN_FILENO));
    auto decision = parse_decision(a.decision, a.target_stage);
    // Fail on position mismatch before prompting for scores.
    const auto state = load_state(a);
    const auto* at = std::get_if<lc::AtGate>(&state.position);
    if (at == nullptr || at->gate != a.gate)
      throw InvalidTransition("decision at Gate " + std::to_string(a.gate) + " not allowed at " +
                              lc::describe(state.position));
    auto criteria = build_criteria(a, prompt, in, err);
    mutate(a, out, [&](lc::Project& p) -> const lc::JournalEvent& {
      return p.decide_gate(a.gate, decision, criteria);
    });
  });

  auto* intra = project->add_subcommand("intragate", "Decide the Stage I intra-stage gate");
  intra->add_option("outcome", a.intra_outcome, "'proceed' or a Stage I step 1..4 to loop back to")->required();
  intra->callback([&] {
    std::optional<int> target;
    if (a.intra_outcome != "proceed") target = parse_score(a.intra_outcome, "outcome");
    mutate(a, out, [&](lc::Project& p) -> const lc::JournalEvent& { return p.decide_intra_stage_gate(target); });
  });

  auto* resume = project->add_subcommand("resume", "Resume a held project at its gate");
  resume->callback([&] { mutate(a, out, [](lc::Project& p) -> const lc::JournalEvent& { return p.resume(); }); });

  auto* restart = project->add_subcommand("restart", "Repeat the waterfall from K|V 1.1");
  restart->callback(
      [&] { mutate(a, out, [](lc::Project& p) -> const lc::JournalEvent& { return p.restart_cycle(); }); });

  auto* checklist = project->add_subcommand("checklist", "Mark a prototype-loop checklist item done");
  checklist->add_option("template", a.template_name, "excel|crossover")->required();
  checklist->add_option("item", a.item, "Item number")->required();
  checklist->add_option("--note,-n", a.note, "Note");
  checklist->callback([&] {
    const auto tid = lc::parse_template(a.template_name);
    mutate(a, out, [&](lc::Project& p) -> const lc::JournalEvent& {
      return p.mark_checklist_item(tid, a.item, a.note);
    });
  });

  auto* status = project->add_subcommand("status", "Show the current position");
  status->callback([&] { print_status(out, load_state(a), a.spiral_cap); });

  auto* log = project->add_subcommand("log", "Print the journal");
  add_format_flag(log, a.format);
  log->callback([&] {
    std::vector<lc::JournalEvent> events;
    load_state(a, &events);
    for (const auto& e : events) {
      if (a.format == "records") {
        out << journal::encode_event(e) << '\n';
      } else {
        char head[96];
        std::snprintf(head, sizeof head, "%4llu  %-27s %-22s ", static_cast<unsigned long long>(e.seq),
                      format_timestamp(e.timestamp).c_str(), std::string(lc::kind_name(e.kind)).c_str());
        out << head << event_details(e.kind) << '\n';
      }
    }
  });
}

int status_for(const std::exception& e) {
  if (dynamic_cast<const LockError*>(&e) || dynamic_cast<const JournalCorrupt*>(&e) ||
      dynamic_cast<const ReplayError*>(&e) || dynamic_cast<const IoError*>(&e))
    return kInternalError;
  if (dynamic_cast<const InvalidTransition*>(&e)) return kInvalidTransition;
  if (dynamic_cast<const Error*>(&e)) return kUsageError;
  return kInternalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"K|V trading-system development toolkit: pricing, lifecycle journal, regression", "kv"};
  app.require_subcommand(1);

  PriceArgs price_args;
  auto* price = app.add_subcommand("price", "Price a European call");
  price->add_option("S", price_args.inputs.spot, "Spot price")->required();
  price->add_option("X", price_args.inputs.strike, "Strike price")->required();
  price->add_option("T", price_args.inputs.time_years, "Years to expiration")->required();
  price->add_option("r", price_args.inputs.rate, "Interest rate (decimal)")->required();
  price->add_option("sigma", price_args.inputs.sigma, "Volatility (decimal)")->required();
  price->add_option("--ticker", price_args.inputs.ticker, "Ticker label");
  price->add_flag("--intrinsic", price_args.intrinsic, "Limit value for sigma = 0 or T = 0");
  add_cdf_flags(price, price_args.cdf, price_args.pi);
  add_format_flag(price, price_args.format);
  price->callback([&] { run_price(price_args, out); });

  PayoffArgs payoff_args;
  auto* payoff = app.add_subcommand("payoff", "Emit payoff-at-expiry data");
  payoff->add_option("X", payoff_args.strike, "Strike price")->required();
  payoff->add_option("--premium", payoff_args.premium, "Subtract this premium (net payoff)");
  payoff->add_option("--min", payoff_args.s_min, "Lowest terminal price (default 0)");
  payoff->add_option("--max", payoff_args.s_max, "Highest terminal price (default 2X)");
  payoff->add_option("--points", payoff_args.points, "Number of points (>= 2)");
  add_format_flag(payoff, payoff_args.format);
  payoff->callback([&] { run_payoff(payoff_args, out); });

  RegressArgs regress_args;
  auto* regress = app.add_subcommand("regress", "Golden-file or dual-path regression");
  regress->add_option("--golden", regress_args.golden, "Golden-case CSV");
  regress->add_flag("--dual", regress_args.dual, "Compare the polynomial path against the reference path");
  regress->add_option("--n", regress_args.n, "Random sample size for --dual");
  regress->add_option("--seed", regress_args.seed, "Random seed for --dual");
  regress->add_option("--tol", regress_args.tol, "Absolute tolerance for --dual");
  regress->add_option("--threads", regress_args.threads, "Evaluation threads");
  add_cdf_flags(regress, regress_args.cdf, regress_args.pi);
  add_format_flag(regress, regress_args.format);
  int suite_status = kSuccess;
  regress->callback([&] { suite_status = run_regress(regress_args, out); });

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay", "Replay a pricing-input tape");
  replay->add_option("--tape", replay_args.tape, "Tape CSV")->required();
  replay->add_option("--max-dev", replay_args.max_dev, "Fail when max |deviation| exceeds this");
  add_cdf_flags(replay, replay_args.cdf, replay_args.pi);
  add_format_flag(replay, replay_args.format);
  replay->callback([&] { suite_status = run_replay(replay_args, out); });

  ProjectArgs project_args;
  setup_project(app, project_args, out, err, in);

  std::vector<std::string> argv_storage{"kv"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  } catch (const std::exception& e) {
    err << "kv: " << e.what() << '\n';
    return status_for(e);
  }
  return suite_status;
}

}  // namespace kv::cli
