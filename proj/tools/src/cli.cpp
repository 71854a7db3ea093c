#include "allostery/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "allostery/castle.hpp"
#include "allostery/comparison.hpp"
#include "allostery/criterion.hpp"
#include "allostery/errors.hpp"
#include "allostery/non_af.hpp"
#include "allostery/settings.hpp"
#include "allostery/verify.hpp"

namespace allostery::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kBudgetEnv = "ALLOSTERY_BUDGET_STATES";

struct Context {
  std::string command;
  Settings settings;
  std::string check_path;
  std::ostream& out;
  std::ostream& err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0, e.byte);
  }
}

std::string format_of(const Context& ctx, std::initializer_list<const char*> allowed) {
  const std::string f = ctx.settings.get_or("format", *allowed.begin());
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw InvalidArgument(ctx.command + ": unsupported format '" + f + "'");
}

/// Writes to --out DIR/<name> when set, otherwise to stdout.
void emit(const Context& ctx, const std::string& name, const std::string& content) {
  if (auto dir = ctx.settings.get("out")) {
    std::filesystem::create_directories(*dir);
    const auto path = std::filesystem::path(*dir) / name;
    std::ofstream file(path);
    if (!file) throw InvalidArgument("cannot write " + path.string());
    file << content;
    ctx.err << "wrote " << path.string() << '\n';
  } else {
    ctx.out << content;
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t budget_of(const Settings& s) {
  const std::size_t b = s.size_or("budget-states", kDefaultStateBudget);
  if (b == 0) throw InvalidArgument("budget-states must be positive");
  return b;
}

Ranks ranks_of(const Settings& s) {
  Ranks r{s.size_or("d", 1), s.size_or("m", 1)};
  if (r.d == 0 || r.m == 0) throw InvalidArgument("d and m must be at least 1");
  return r;
}

EpsilonSchedule schedule_of(const Settings& s) {
  const std::string e = s.get_or("epsilon", "schedule");
  if (e == "schedule") return default_schedule();
  Rational eps = parse_rational(e);
  if (eps <= 0 || eps >= 1) throw InvalidArgument("epsilon must lie in (0,1), got " + e);
  return fixed_schedule(eps);
}

void check_prime_strategy(const Settings& s) {
  const std::string strategy = s.get_or("prime-strategy", "smallest-admissible");
  if (strategy != "smallest-admissible") throw InvalidArgument("unknown prime strategy '" + strategy + "'");
}

std::vector<WreathElement> gammas_of(const Settings& s, Ranks ranks) {
  std::vector<WreathElement> out;
  if (s.has("gamma")) {
    for (const auto& text : s.all("gamma")) out.push_back(parse_element(text, ranks));
    return out;
  }
  for (auto& e : ball(GeneratorSet(ranks), s.size_or("radius", 1), 100'000)) {
    if (!e.element.is_identity()) out.push_back(std::move(e.element));
  }
  return out;
}

std::vector<SubgroupDatum> data_from_json(const json& j) {
  std::vector<SubgroupDatum> out;
  if (j.is_array()) {
    for (const auto& d : j) out.push_back(datum_from_json(d));
  } else if (j.is_object() && j.contains("window")) {
    for (const auto& d : j.at("window")) out.push_back(datum_from_json(d));
  } else if (j.is_object() && j.contains("datum")) {
    out.push_back(datum_from_json(j.at("datum")));
  } else {
    out.push_back(datum_from_json(j));
  }
  return out;
}

/// Window from --window FILE, else from the gammas (one gamma with --p is
/// forged at that prime, otherwise primes are assigned).
std::vector<SubgroupDatum> window_of(const Settings& s, Ranks& ranks) {
  check_prime_strategy(s);
  if (auto path = s.get("window")) {
    auto data = data_from_json(read_json(*path));
    if (!data.empty()) ranks = data.front().ranks;
    return data;
  }
  const auto gammas = gammas_of(s, ranks);
  const auto schedule = schedule_of(s);
  if (auto p = s.get("p")) {
    if (gammas.size() != 1) throw InvalidArgument("--p applies to exactly one gamma");
    return {forge(gammas.front(), parse_integer(*p), schedule(0))};
  }
  return forge_all(assign_primes(gammas, schedule));
}

std::mt19937_64 rng_of(const Settings& s) { return std::mt19937_64(s.size_or("seed", 0)); }

/// Comma-separated indices, ranges a-b, state texts, or random:K.
StateSet parse_set(const std::string& text, const WindowSystem& w, std::mt19937_64& rng) {
  const auto n = w.size().convert_to<std::uint64_t>();
  if (text.starts_with("random:")) {
    const Integer k_big = parse_integer(text.substr(7));
    if (k_big < 0 || k_big > Integer(n)) throw InvalidArgument("random set size out of range: " + text);
    const auto k = k_big.convert_to<std::size_t>();
    std::vector<std::uint64_t> all(n);
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    return make_state_set(all);
  }
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i < text.size() && !(text[i] == ',' && depth == 0)) continue;
    const std::string token = text.substr(start, i - start);
    start = i + 1;
    if (token.empty()) continue;
    if (token.front() == '(') {
      out.push_back(w.parse_index(token));
      continue;
    }
    const auto dash = token.find('-', 1);
    const Integer lo = parse_integer(token.substr(0, dash));
    const Integer hi = dash == std::string::npos ? lo : parse_integer(token.substr(dash + 1));
    if (lo < 0 || hi < lo || hi >= Integer(n)) throw ParseError("state range '" + token + "' out of range", 0, start - token.size());
    for (auto x = lo.convert_to<std::uint64_t>(); x <= hi.convert_to<std::uint64_t>(); ++x) out.push_back(x);
  }
  return make_state_set(out);
}

WreathElement element_of(const Settings& s, const WindowSystem& w) {
  if (auto text = s.get("element")) return parse_element(*text, w.ranks());
  return w.generators()[w.generators().lamp_index(0)];
}

int cmd_forge(Context& ctx) {
  format_of(ctx, {"json"});
  const Ranks ranks = ranks_of(ctx.settings);
  check_prime_strategy(ctx.settings);
  const auto gammas = ctx.settings.all("gamma");
  if (gammas.size() != 1) throw InvalidArgument("forge needs exactly one --gamma");
  const WreathElement gamma = parse_element(gammas.front(), ranks);
  const Rational eps = schedule_of(ctx.settings)(0);
  Integer p;
  if (auto text = ctx.settings.get("p")) {
    p = parse_integer(*text);
  } else {
    p = assign_primes(std::vector<WreathElement>{gamma}, fixed_schedule(eps)).front().prime;
  }
  const SubgroupDatum d = forge(gamma, p, eps);
  const auto problems = validate(d);
  json j;
  j["kind"] = "subgroup_datum";
  j["v"] = 1;
  j["datum"] = to_json(d);
  j["index"] = index(d).str();
  j["problems"] = problems;
  j["status"] = problems.empty() ? "valid" : "invalid";
  emit(ctx, "forge.json", dump(j));
  return problems.empty() ? kValid : kInvalid;
}

std::string criterion_markdown(const CriterionCertificate& c) {
  std::ostringstream md;
  md << "| gamma | p | index | fixed fraction | 1 - epsilon | ok |\n|---|---|---|---|---|---|\n";
  for (const auto& r : c.records) {
    md << "| `" << to_string(r.datum.gamma) << "` | " << r.datum.p << " | " << r.index << " | "
       << to_string(r.fixed_fraction) << " | " << to_string(Rational(1 - r.datum.epsilon)) << " | "
       << (r.ok() ? "yes" : "no") << " |\n";
  }
  md << "\nwindow fraction " << to_string(c.window_fraction) << ", product bound " << to_string(c.product_lower_bound)
     << ", transitivity " << c.transitivity.method << ", status **" << c.status() << "**\n";
  return md.str();
}

int cmd_check(Context& ctx) {
  const json j = read_json(ctx.check_path);
  const Verdict v = verify_certificate(j, budget_of(ctx.settings));
  json out;
  out["kind"] = "verdict";
  out["v"] = 1;
  out["certificate_kind"] = v.kind;
  out["recorded_status"] = v.recorded_status;
  out["valid"] = v.valid;
  out["agrees"] = v.agrees();
  out["failures"] = v.failures;
  emit(ctx, "verdict.json", dump(out));
  if (!v.agrees()) ctx.err << "recorded status '" << v.recorded_status << "' disagrees with re-verification\n";
  return v.valid ? kValid : kInvalid;
}

int cmd_verify(Context& ctx) {
  if (!ctx.check_path.empty()) return cmd_check(ctx);
  const std::string format = format_of(ctx, {"json", "md"});
  Ranks ranks = ranks_of(ctx.settings);
  CriterionConfig config;
  config.state_budget = budget_of(ctx.settings);
  auto data = window_of(ctx.settings, ranks);
  const CriterionCertificate cert = certify_window(std::move(data), ranks, config);
  if (format == "json") {
    emit(ctx, "verify.json", dump(to_json(cert, config)));
  } else {
    emit(ctx, "verify.md", criterion_markdown(cert));
  }
  ctx.err << "criterion: " << cert.status() << " (" << cert.records.size() << " gammas, window fraction "
          << to_string(cert.window_fraction) << " >= " << to_string(cert.product_lower_bound) << ")\n";
  return cert.status() == "valid" ? kValid : kInvalid;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

int cmd_simulate(Context& ctx) {
  const std::string format = format_of(ctx, {"csv", "json"});
  Ranks ranks = ranks_of(ctx.settings);
  const WindowSystem w = WindowSystem::unchecked(window_of(ctx.settings, ranks), ranks);
  const WreathElement x = element_of(ctx.settings, w);
  const std::size_t steps = ctx.settings.size_or("steps", 10);
  WindowSystem::State state = w.identity_state();
  const std::string start = ctx.settings.get_or("start", "identity");
  if (start == "random") {
    auto rng = rng_of(ctx.settings);
    std::uniform_int_distribution<std::uint64_t> pick(0, w.size().convert_to<std::uint64_t>() - 1);
    state = w.decode(pick(rng));
  } else if (start != "identity") {
    state = w.parse_state(start);
  }

  std::ostringstream csv;
  json rows = json::array();
  csv << "step,index,state\n";
  for (std::size_t t = 0; t <= steps; ++t) {
    const std::uint64_t idx = w.encode(state);
    const std::string text = w.to_string(state);
    csv << t << ',' << idx << ',' << csv_quote(text) << '\n';
    rows.push_back({{"step", t}, {"index", idx}, {"state", text}});
    if (t < steps) state = w.act(x, state);
  }
  if (format == "csv") {
    emit(ctx, "simulate.csv", csv.str());
  } else {
    json j;
    j["kind"] = "trajectory";
    j["v"] = 1;
    j["element"] = to_string(x);
    json window = json::array();
    for (const auto& d : w.data()) window.push_back(to_json(d));
    j["window"] = std::move(window);
    j["states"] = std::move(rows);
    emit(ctx, "simulate.json", dump(j));
  }
  return kValid;
}

int cmd_compare(Context& ctx) {
  const std::string format = format_of(ctx, {"json", "csv"});
  Ranks ranks = ranks_of(ctx.settings);
  const std::size_t budget = budget_of(ctx.settings);
  const WindowSystem w = WindowSystem::make(window_of(ctx.settings, ranks), ranks);
  w.require_enumerable(budget, "compare");
  auto rng = rng_of(ctx.settings);
  const auto a = ctx.settings.get("A"), b = ctx.settings.get("B");
  if (!a || !b) throw InvalidArgument("compare needs --A and --B");
  const StateSet A = parse_set(*a, w, rng);
  const StateSet B = parse_set(*b, w, rng);
  const ComparisonCertificate c = comparison_certificate(A, B, w, budget);
  if (format == "json") {
    emit(ctx, "compare.json", dump(to_json(c, w)));
  } else {
    std::ostringstream csv;
    csv << "piece,state,word,image\n";
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
      for (std::uint64_t s : c.pieces[i]) {
        csv << i << ',' << csv_quote(w.index_to_string(s)) << ',' << csv_quote(to_string(c.transporters[i])) << ','
            << csv_quote(w.index_to_string(w.apply_word(c.transporters[i], s, budget))) << '\n';
      }
    }
    emit(ctx, "compare.csv", csv.str());
  }
  return kValid;
}

std::string audit_markdown(const CastleAudit& a) {
  std::ostringstream md;
  md << "| tower | symmetric difference | defect | mu(V) |\n|---|---|---|---|\n";
  for (std::size_t i = 0; i < a.defects.size(); ++i) {
    md << "| " << i << " | " << a.symmetric_differences[i] << " | " << to_string(a.defects[i]) << " | "
       << to_string(a.base_measures[i]) << " |\n";
  }
  md << "\nmu(Fix gamma) = " << to_string(a.fixed_measure) << " <= " << to_string(a.bound) << ": "
     << (a.inequality_holds ? "holds" : "fails") << "\n";
  return md.str();
}

int cmd_audit(Context& ctx) {
  const std::string format = format_of(ctx, {"json", "md"});
  Ranks ranks = ranks_of(ctx.settings);
  const std::size_t budget = budget_of(ctx.settings);
  const WindowSystem w = WindowSystem::make(window_of(ctx.settings, ranks), ranks);
  w.require_enumerable(budget, "audit");
  const WreathElement gamma = element_of(ctx.settings, w);
  const std::string source = ctx.settings.get_or("castle", "transversal");
  Castle castle;
  if (source == "transversal") {
    castle = transversal_castle(w, 0, budget);
  } else if (source == "random") {
    auto rng = rng_of(ctx.settings);
    std::vector<WreathElement> pool;
    for (auto& e : ball(w.generators(), 2, 100'000)) {
      if (!e.element.is_identity()) pool.push_back(std::move(e.element));
    }
    castle = random_castle(w, rng, pool, budget);
  } else {
    try {
      castle = parse_castle(read_file(source), w);
    } catch (const ParseError& e) {
      throw ParseError(source + ": " + e.what(), e.line(), e.column());
    }
  }
  std::optional<Rational> tolerance;
  if (auto t = ctx.settings.get("tolerance")) tolerance = parse_rational(*t);
  const CastleAudit audit = audit_castle(castle, gamma, w, budget, tolerance);
  if (format == "json") {
    emit(ctx, "audit.json", dump(to_json(audit, castle, w)));
  } else {
    emit(ctx, "audit.md", audit_markdown(audit));
  }
  return audit.inequality_holds ? kValid : kInvalid;
}

int cmd_report(Context& ctx) {
  const std::string format = format_of(ctx, {"json", "md"});
  Ranks ranks = ranks_of(ctx.settings);
  CriterionConfig config;
  config.state_budget = budget_of(ctx.settings);
  auto data = window_of(ctx.settings, ranks);
  const CriterionCertificate cert = certify_window(data, ranks, config);
  if (!cert.valid()) {
    ctx.err << "criterion certificate is " << cert.status() << "; no report\n" << criterion_markdown(cert);
    return kInvalid;
  }
  const NonAFReport report = non_af_report(std::move(data), ranks, config);
  const bool to_dir = ctx.settings.has("out");
  if (to_dir || format == "json") emit(ctx, "report.json", dump(to_json(report, config)));
  if (to_dir || format == "md") emit(ctx, "report.md", markdown_summary(report));
  return report.ok() ? kValid : kInvalid;
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
  std::function<int(Context&)> run;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list{
      {"forge", "forge the finite-index subgroup of one gamma",
       {"d", "m", "gamma", "p", "epsilon", "prime-strategy", "out", "format"}, cmd_forge},
      {"verify", "certify the criterion on a window, or re-check a certificate with --check",
       {"d", "m", "radius", "gamma", "p", "epsilon", "prime-strategy", "window", "budget-states", "out", "format"},
       cmd_verify},
      {"simulate", "trajectory of a state under repeated action of an element",
       {"d", "m", "radius", "gamma", "p", "epsilon", "prime-strategy", "window", "element", "steps", "start", "seed",
        "out", "format"},
       cmd_simulate},
      {"compare", "comparison certificate for state sets A and B",
       {"d", "m", "radius", "gamma", "p", "epsilon", "prime-strategy", "window", "A", "B", "seed", "budget-states",
        "out", "format"},
       cmd_compare},
      {"audit", "audit a castle against the fixed set of an element",
       {"d", "m", "radius", "gamma", "p", "epsilon", "prime-strategy", "window", "element", "castle", "tolerance",
        "seed", "budget-states", "out", "format"},
       cmd_audit},
      {"report", "fixed-point bound and castle obstruction report",
       {"d", "m", "radius", "gamma", "p", "epsilon", "prime-strategy", "window", "budget-states", "out", "format"},
       cmd_report},
  };
  return list;
}

const char* describe(const std::string& key) {
  static const std::map<std::string, const char*> help{
      {"d", "lamp rank d >= 1"},
      {"m", "base rank m >= 1"},
      {"radius", "ball radius used when no --gamma is given"},
      {"gamma", "element in canonical text form; repeat for a window"},
      {"p", "prime for a single gamma"},
      {"epsilon", "'schedule' for 2^-(i+2) or a fixed rational"},
      {"prime-strategy", "prime assignment (smallest-admissible)"},
      {"window", "JSON file with forged data or a certificate"},
      {"budget-states", "largest stage enumerated explicitly"},
      {"seed", "seed for random choices"},
      {"out", "write outputs into this directory"},
      {"format", "json, csv or md"},
      {"element", "acting element (default s1)"},
      {"steps", "number of steps"},
      {"start", "identity, random or a state"},
      {"A", "indices, ranges a-b, states or random:K"},
      {"B", "indices, ranges a-b, states or random:K"},
      {"castle", "castle file, 'transversal' or 'random'"},
      {"tolerance", "defect tolerance for the audit"},
  };
  return help.at(key);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-stage certificates for profinite actions of lamplighter-type wreath products"};
  app.require_subcommand(1);
  std::string config_path;
  std::string check_path;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> given;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "key = value configuration file");
    if (std::string(c.name) == "verify") sub->add_option("--check", check_path, "certificate JSON to re-verify");
    for (const auto& key : c.keys) {
      auto* opt = sub->add_option("--" + key, given[c.name][key], describe(key))->expected(1);
      opt->multi_option_policy(key == "gamma" ? CLI::MultiOptionPolicy::TakeAll : CLI::MultiOptionPolicy::TakeLast);
    }
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kValid : kMalformed;
  }

  for (const auto& c : commands()) {
    if (!subs[c.name]->parsed()) continue;
    try {
      Settings settings;
      if (!config_path.empty()) settings = Settings::from_file(config_path);
      if (const char* env = std::getenv(kBudgetEnv)) settings.set("budget-states", {env});
      Settings flags;
      for (const auto& [key, values] : given[c.name]) {
        if (!values.empty()) flags.set(key, values);
      }
      settings.merge(flags);
      Context ctx{c.name, std::move(settings), check_path, out, err};
      return c.run(ctx);
    } catch (const BudgetExceeded& e) {
      err << "budget exceeded: " << e.what() << '\n';
      return kInvalid;
    } catch (const MalformedCastle& e) {
      err << "malformed castle: " << e.what() << '\n';
      return kInvalid;
    } catch (const ParseError& e) {
      err << "parse error: " << e.what() << '\n';
      return kMalformed;
    } catch (const InvalidArgument& e) {
      err << "invalid input: " << e.what() << '\n';
      return kMalformed;
    } catch (const nlohmann::json::exception& e) {
      err << "malformed JSON: " << e.what() << '\n';
      return kMalformed;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kInvalid;
    }
  }
  return kMalformed;
}

}  // namespace allostery::cli
