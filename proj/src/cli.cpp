#include "ccp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccp/decomposition.hpp"
#include "ccp/power_sums.hpp"
#include "ccp/simulator.hpp"
#include "ccp/verify.hpp"
#include "ccp/waiting_time.hpp"

namespace ccp::cli {

namespace {

using json = nlohmann::ordered_json;

struct Args {
  std::string command;
  PopularitySource source;
  std::optional<int> c, k, k_max, j, exponent, u, element;
  bool exclude = false;
  std::string backend = "auto";
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::int64_t k_cap = 0;
  bool renormalize = false;
  std::uint64_t guard = kDefaultEnumerationGuard;
  int n_max = 8;
  int trials = 50;
};

// One output cell. Values carry their backend so CSV and JSON agree.
using Cell = std::variant<std::int64_t, BigInt, Scalar, std::string, std::nullptr_t>;

struct Report {
  json meta = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;
};

std::string csv_cell(const Cell& cell) {
  struct {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const BigInt& v) const { return v.str(); }
    std::string operator()(const Scalar& v) const { return v.to_decimal(); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char ch : v) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return quoted + "\"";
    }
    std::string operator()(std::nullptr_t) const { return ""; }
  } visit;
  return std::visit(visit, cell);
}

void json_cell(json& row, const std::string& name, const Cell& cell) {
  if (const auto* v = std::get_if<std::int64_t>(&cell)) {
    row[name] = *v;
  } else if (const auto* b = std::get_if<BigInt>(&cell)) {
    if (boost::multiprecision::abs(*b) <= BigInt(std::numeric_limits<std::int64_t>::max())) {
      row[name] = b->convert_to<std::int64_t>();
    } else {
      row[name] = b->str();
    }
  } else if (const auto* s = std::get_if<Scalar>(&cell)) {
    if (s->is_exact()) {
      row[name] = s->to_string();
      row[name + "_decimal"] = s->to_double();
    } else {
      row[name] = s->to_double();
    }
  } else if (const auto* t = std::get_if<std::string>(&cell)) {
    row[name] = *t;
  } else {
    row[name] = nullptr;
  }
}

void emit(const Report& report, const Args& args, std::ostream& out, std::ostream& err) {
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (args.format == "json") {
    json doc = report.meta;
    json rows = json::array();
    for (const auto& r : report.rows) {
      json row = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) json_cell(row, report.columns[i], r[i]);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    doc["warnings"] = report.warnings;
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    out << (i ? "," : "") << report.columns[i];
  }
  out << '\n';
  for (const auto& r : report.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << '\n';
  }
}

template <Real T>
const char* backend_name() {
  return std::same_as<T, Rational> ? "exact" : "float";
}

template <Real T>
Report base_report(const Args& args, const Popularity<T>& pop) {
  Report r;
  r.meta["command"] = args.command;
  r.meta["backend"] = backend_name<T>();
  r.meta["n"] = pop.n();
  return r;
}

int need(const std::optional<int>& v, const char* flag, const std::string& command) {
  if (!v) fail(ErrorCode::RangeError, command + " needs " + flag);
  return *v;
}

std::string condition_warning(double condition, const std::string& where) {
  std::ostringstream os;
  os << "cancellation: condition estimate " << format_decimal(condition) << " exceeds "
     << format_decimal(kConditionWarningThreshold) << " at " << where
     << "; float result may have lost all significant digits";
  return os.str();
}

// k values for the distribution commands: a single --k or 0..kmax.
std::vector<int> k_values(const Args& args, int n, int c) {
  if (args.k && args.k_max) fail(ErrorCode::RangeError, "give either --k or --kmax, not both");
  if (args.k) return {*args.k};
  const int top = args.k_max.value_or(default_k_max(n, c));
  if (top < 0) fail(ErrorCode::RangeError, "--kmax must be nonnegative");
  std::vector<int> ks(top + 1);
  for (int k = 0; k <= top; ++k) ks[k] = k;
  return ks;
}

template <Real T>
Report cmd_distribution(const Args& args, const Popularity<T>& pop) {
  const int c = need(args.c, "--c", args.command);
  const EvalOptions opts{SumStrategy::Auto, args.guard};
  Report r = base_report(args, pop);
  r.meta["c"] = c;
  r.columns = {"k", args.command};
  double worst = 1.0;
  for (int k : k_values(args, pop.n(), c)) {
    T value;
    if (args.command == "pdf") {
      value = pdf(pop, c, k, opts);
    } else {
      const auto tail = ccdf_evaluation(pop, c, k, opts);
      if (tail.cancellation_warning()) {
        r.warnings.push_back(condition_warning(tail.condition, "k=" + std::to_string(k)));
      }
      worst = std::max(worst, tail.condition);
      value = args.command == "ccdf" ? tail.value : T(from_int<T>(1) - tail.value);
    }
    r.rows.push_back({std::int64_t{k}, Scalar(value)});
  }
  if (args.command != "pdf") r.meta["condition"] = worst;
  return r;
}

template <Real T>
Report cmd_expectation(const Args& args, const Popularity<T>& pop) {
  Report r = base_report(args, pop);
  r.columns = {"c", "expectation"};
  if (args.c) {
    r.rows.push_back({std::int64_t{*args.c}, Scalar(expectation(pop, *args.c, args.guard))});
  } else {
    for (int c = 1; c <= pop.n(); ++c) {
      r.rows.push_back({std::int64_t{c}, Scalar(expectation(pop, c, args.guard))});
    }
  }
  return r;
}

int exponent_arg(const Args& args) {
  if (args.exponent && args.k && *args.exponent != *args.k) {
    fail(ErrorCode::RangeError, "--exponent and --k disagree");
  }
  if (args.exponent) return *args.exponent;
  return need(args.k, "--exponent", args.command);
}

template <Real T>
Report cmd_alpha(const Args& args, const Popularity<T>& pop) {
  const int k = exponent_arg(args);
  const auto table = args.source.uniform ? alpha_uniform<T>(pop.n(), k)
                                         : alpha_general(pop, k, args.guard);
  Report r = base_report(args, pop);
  r.meta["k"] = k;
  r.meta["method"] = table.provenance == AlphaProvenance::Uniform ? "uniform" : "general";
  r.meta["condition"] = table.condition;
  if (table.cancellation_warning()) r.warnings.push_back(condition_warning(table.condition, "alpha"));
  r.columns = {"u", "alpha"};
  if (args.u) {
    if (*args.u < 1 || *args.u > k) fail(ErrorCode::RangeError, "--u must lie in [1..k]");
    r.rows.push_back({std::int64_t{*args.u}, Scalar(table.weight(*args.u))});
  } else {
    for (int u = 1; u <= k; ++u) r.rows.push_back({std::int64_t{u}, Scalar(table.weight(u))});
  }
  return r;
}

template <Real T>
Report cmd_eta(const Args& args, const Popularity<T>& pop) {
  const int k = exponent_arg(args);
  const int j = need(args.j, "--j", args.command);
  Report r = base_report(args, pop);
  r.meta["k"] = k;
  r.meta["j"] = j;
  r.columns = {"q", "eta"};
  for (int q = 1; q <= k; ++q) r.rows.push_back({std::int64_t{q}, eta(pop.n(), k, j, q)});
  return r;
}

template <Real T>
Report cmd_powersum(const Args& args, const Popularity<T>& pop) {
  const int k = exponent_arg(args);
  const int j = need(args.j, "--j", args.command);
  Report r = base_report(args, pop);
  r.columns = {"j", "k", "power_sum"};
  T value;
  if (args.element) {
    const PowerSumQuery q{j, k, *args.element,
                          args.exclude ? Membership::Exclude : Membership::Include};
    value = power_sum_query(pop, q, args.guard);
    r.meta["element"] = *args.element;
    r.meta["membership"] = args.exclude ? "exclude" : "include";
  } else {
    if (args.exclude) fail(ErrorCode::RangeError, "--exclude needs --element");
    if (j < 0 || j > pop.n()) fail(ErrorCode::RangeError, "--j outside [0..n]");
    if (k < 0) fail(ErrorCode::RangeError, "--exponent must be nonnegative");
    value = power_sum(pop, j, k, args.guard);
  }
  r.rows.push_back({std::int64_t{j}, std::int64_t{k}, Scalar(value)});
  return r;
}

Report cmd_simulate(const Args& args, const Popularity<double>& pop) {
  const int c = need(args.c, "--c", args.command);
  const auto dist = empirical_distribution(pop, c, SimConfig{args.samples, args.seed, args.k_cap});
  Report r = base_report(args, pop);
  r.meta["c"] = c;
  r.meta["samples"] = dist.samples;
  r.meta["seed"] = dist.seed;
  r.meta["generator"] = dist.generator;
  r.meta["k_cap"] = dist.k_cap;
  r.meta["truncated"] = dist.truncated;
  r.meta["mean"] = dist.mean();
  r.meta["standard_error"] = dist.standard_error();
  if (dist.truncated > 0) {
    r.warnings.push_back(std::to_string(dist.truncated) + " samples hit the trial cap " +
                         std::to_string(dist.k_cap) + " and are excluded from the moments");
  }
  r.columns = {"k", "count", "frequency", "cdf"};
  for (const auto& [k, count] : dist.counts) {
    r.rows.push_back({std::int64_t{k}, static_cast<std::int64_t>(count), Scalar(dist.frequency(k)),
                      Scalar(dist.cdf(k))});
  }
  return r;
}

template <Real T>
Report cmd_compare(const Args& args, const Popularity<T>& pop) {
  using Clock = std::chrono::steady_clock;
  const int k = exponent_arg(args);
  const int j = need(args.j, "--j", args.command);
  const int n = pop.n();
  if (!(0 < k && k < j && j <= n)) fail(ErrorCode::RangeError, "compare needs 0 < k < j <= n");

  BigInt fast_subsets = 0;
  for (int q = 1; q <= k; ++q) fast_subsets += binomial(n, q);
  const BigInt& brute_subsets = binomial(n, j);
  const Rational ratio = subset_count_ratio(n, j, k);

  auto t0 = Clock::now();
  const T fast = power_sum_fast(SmallSumCache<T>(pop, args.guard), j, k);
  const double fast_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  Report r = base_report(args, pop);
  r.meta["j"] = j;
  r.meta["k"] = k;
  r.columns = {"brute",        "fast",          "brute_seconds", "fast_seconds", "speedup",
               "brute_subsets", "fast_subsets", "subset_ratio",  "agree",        "status"};
  std::vector<Cell> row(r.columns.size(), nullptr);
  row[1] = Scalar(fast);
  row[3] = Scalar(fast_seconds);
  row[5] = brute_subsets;
  row[6] = fast_subsets;
  row[7] = Scalar(ratio);
  if (brute_subsets > BigInt(args.guard)) {
    row[9] = std::string("infeasible, ratio only");
  } else {
    t0 = Clock::now();
    const T brute = power_sum_bruteforce(pop, j, k, args.guard);
    const double brute_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool agree;
    if constexpr (std::same_as<T, Rational>) {
      agree = brute == fast;
    } else {
      agree = std::fabs(brute - fast) <= 1e-10 * std::fabs(brute);
    }
    row[0] = Scalar(brute);
    row[2] = Scalar(brute_seconds);
    row[4] = Scalar(fast_seconds > 0 ? brute_seconds / fast_seconds
                                     : std::numeric_limits<double>::infinity());
    row[8] = std::string(agree ? "true" : "false");
    row[9] = std::string("computed");
    if (!agree) r.warnings.push_back("brute-force and fast-path values differ");
  }
  r.rows.push_back(std::move(row));
  return r;
}

Report verify_report(const VerifyReport& v, const Args& args) {
  Report r;
  r.meta["command"] = "verify";
  r.meta["n_max"] = v.options.n_max;
  r.meta["trials"] = v.options.trials;
  r.meta["seed"] = v.options.seed;
  r.meta["passed"] = v.passed();
  json failures = json::array();
  r.columns = {"suite", "checks", "failed", "status"};
  for (const auto& s : v.suites) {
    r.rows.push_back({s.name, static_cast<std::int64_t>(s.checks),
                      static_cast<std::int64_t>(s.failed), std::string(s.passed() ? "pass" : "FAIL")});
    for (const auto& f : s.failures) {
      failures.push_back({{"suite", s.name}, {"identity", f.identity}, {"inputs", f.inputs},
                          {"lhs", f.lhs}, {"rhs", f.rhs}});
    }
  }
  r.meta["failures"] = failures;
  (void)args;
  return r;
}

void report_verify_failures(const VerifyReport& v, std::ostream& err) {
  for (const auto& s : v.suites) {
    for (const auto& f : s.failures) {
      err << "identity violated [" << s.name << "] " << f.identity << " at " << f.inputs
          << ": lhs=" << f.lhs << " rhs=" << f.rhs << '\n';
    }
    if (s.failed > s.failures.size()) {
      err << "[" << s.name << "] " << s.failed - s.failures.size() << " further violations\n";
    }
  }
}

BackendChoice parse_backend(const std::string& s) {
  if (s == "exact") return BackendChoice::Exact;
  if (s == "float") return BackendChoice::Float;
  return BackendChoice::Auto;
}

template <class F>
Report dispatch(const AnyPopularity& pop, F&& f) {
  return std::visit([&](const auto& p) { return f(p); }, pop);
}

Report execute(const Args& args, std::ostream& err, int& exit_code) {
  if (args.command == "verify") {
    const auto v = verify_identities(VerifyOptions{args.n_max, args.trials, args.seed});
    if (!v.passed()) {
      report_verify_failures(v, err);
      exit_code = 2;
    }
    return verify_report(v, args);
  }
  const bool has_file = args.source.file.has_value();
  if (has_file == args.source.uniform.has_value()) {
    fail(ErrorCode::RangeError, "give exactly one of --popularity FILE or --uniform N");
  }
  BackendChoice backend = parse_backend(args.backend);
  if (args.command == "simulate") {
    if (backend == BackendChoice::Exact) fail(ErrorCode::RangeError, "simulate runs in float mode only");
    backend = BackendChoice::Float;
  }
  const AnyPopularity pop = load_popularity(args.source, backend, args.renormalize);
  const std::string& cmd = args.command;
  if (cmd == "pdf" || cmd == "cdf" || cmd == "ccdf") {
    return dispatch(pop, [&](const auto& p) { return cmd_distribution(args, p); });
  }
  if (cmd == "expectation") return dispatch(pop, [&](const auto& p) { return cmd_expectation(args, p); });
  if (cmd == "alpha") return dispatch(pop, [&](const auto& p) { return cmd_alpha(args, p); });
  if (cmd == "eta") return dispatch(pop, [&](const auto& p) { return cmd_eta(args, p); });
  if (cmd == "powersum") return dispatch(pop, [&](const auto& p) { return cmd_powersum(args, p); });
  if (cmd == "compare") return dispatch(pop, [&](const auto& p) { return cmd_compare(args, p); });
  return cmd_simulate(args, std::get<Popularity<double>>(pop));
}

void add_popularity_flags(CLI::App* sub, Args& a) {
  auto* file = sub->add_option("--popularity", a.source.file, "popularity JSON file");
  auto* uni = sub->add_option("--uniform", a.source.uniform, "uniform popularity over N items");
  file->excludes(uni);
  sub->add_option("--backend", a.backend, "exact or float (default: from the input)")
      ->check(CLI::IsMember({"auto", "exact", "float"}));
  sub->add_flag("--renormalize", a.renormalize, "divide the values by their sum");
  sub->add_option("--guard", a.guard, "largest enumeration allowed");
}

void add_format_flag(CLI::App* sub, Args& a) {
  sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

AnyPopularity load_popularity_json(const std::string& text, BackendChoice backend,
                                   bool renormalize) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("popularity file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::ParseError, "popularity file must hold a JSON object");
  if (doc.contains("uniform") == doc.contains("probabilities")) {
    fail(ErrorCode::ParseError, "popularity file needs exactly one of \"uniform\" or \"probabilities\"");
  }
  if (doc.contains("uniform")) {
    const auto& u = doc["uniform"];
    if (!u.is_number_integer()) fail(ErrorCode::ParseError, "\"uniform\" must be an integer");
    const int n = u.get<int>();
    if (backend == BackendChoice::Float) return Popularity<double>::uniform(n);
    return Popularity<Rational>::uniform(n);
  }
  const auto& list = doc["probabilities"];
  if (!list.is_array()) fail(ErrorCode::ParseError, "\"probabilities\" must be an array");

  // Decimal entries keep their literal text so the exact backend can read
  // them as fractions over powers of ten.
  std::vector<std::string> literals;
  bool any_decimal = false;
  for (const auto& v : list) {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s.find('/') == std::string::npos) any_decimal = true;
      literals.push_back(s);
    } else if (v.is_number()) {
      any_decimal = true;
      literals.push_back(v.dump());
    } else {
      fail(ErrorCode::ParseError, "probabilities must be numbers or strings");
    }
  }
  if (backend == BackendChoice::Auto) backend = any_decimal ? BackendChoice::Float : BackendChoice::Exact;
  if (backend == BackendChoice::Exact) {
    std::vector<Rational> values;
    for (const auto& s : literals) values.push_back(parse_rational(s));
    return Popularity<Rational>::from_values(std::move(values), renormalize);
  }
  std::vector<double> values;
  for (const auto& s : literals) values.push_back(parse_double(s));
  return Popularity<double>::from_values(std::move(values), renormalize);
}

AnyPopularity load_popularity(const PopularitySource& source, BackendChoice backend,
                              bool renormalize) {
  if (source.uniform) {
    if (backend == BackendChoice::Float) return Popularity<double>::uniform(*source.uniform);
    return Popularity<Rational>::uniform(*source.uniform);
  }
  if (!source.file) fail(ErrorCode::ParseError, "no popularity source");
  std::ifstream in(*source.file);
  if (!in) fail(ErrorCode::ParseError, "cannot open popularity file '" + *source.file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_popularity_json(buf.str(), backend, renormalize);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Waiting times of the non-uniform coupon collector", "ccp"};
  app.require_subcommand(1);

  auto distribution = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_popularity_flags(sub, a);
    add_format_flag(sub, a);
    sub->add_option("--c", a.c, "number of distinct items to collect")->required();
    auto* k = sub->add_option("--k", a.k, "single trial count");
    auto* kmax = sub->add_option("--kmax", a.k_max, "table over k = 0..KMAX");
    k->excludes(kmax);
    return sub;
  };
  distribution("pdf", "Pr[T_c = k]");
  distribution("cdf", "Pr[T_c <= k]");
  distribution("ccdf", "Pr[T_c > k]");

  auto* expect = app.add_subcommand("expectation", "E[T_c], for one c or all c");
  add_popularity_flags(expect, a);
  add_format_flag(expect, a);
  expect->add_option("--c", a.c, "number of distinct items to collect");

  auto exponent_flags = [&](CLI::App* sub) {
    sub->add_option("--exponent", a.exponent, "power k");
    sub->add_option("--k", a.k, "alias of --exponent");
  };
  auto* alpha = app.add_subcommand("alpha", "decomposition weights alpha_{k,u}");
  add_popularity_flags(alpha, a);
  add_format_flag(alpha, a);
  exponent_flags(alpha);
  alpha->add_option("--u", a.u, "single weight index");

  auto* eta_cmd = app.add_subcommand("eta", "coefficients of S(j,k) over S(q,k), q = 1..k");
  add_popularity_flags(eta_cmd, a);
  add_format_flag(eta_cmd, a);
  exponent_flags(eta_cmd);
  eta_cmd->add_option("--j", a.j, "subset size")->required();

  auto* ps = app.add_subcommand("powersum", "sum of P_J^k over subsets of size j");
  add_popularity_flags(ps, a);
  add_format_flag(ps, a);
  exponent_flags(ps);
  ps->add_option("--j", a.j, "subset size")->required();
  ps->add_option("--element", a.element, "only subsets containing item L");
  ps->add_flag("--exclude", a.exclude, "only subsets not containing --element");

  auto* verify = app.add_subcommand("verify", "check every identity in exact arithmetic");
  add_format_flag(verify, a);
  verify->add_option("--n-max", a.n_max, "largest n of the random grid");
  verify->add_option("--trials", a.trials, "random popularities per n");
  verify->add_option("--seed", a.seed, "master seed");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo histogram of T_c");
  add_popularity_flags(sim, a);
  add_format_flag(sim, a);
  sim->add_option("--c", a.c, "number of distinct items to collect")->required();
  sim->add_option("--samples", a.samples, "number of samples");
  sim->add_option("--seed", a.seed, "master seed");
  sim->add_option("--k-cap", a.k_cap, "per-sample trial cap (default 1000 n)");

  auto* cmp = app.add_subcommand("compare", "fast path against enumeration");
  add_popularity_flags(cmp, a);
  add_format_flag(cmp, a);
  exponent_flags(cmp);
  cmp->add_option("--j", a.j, "subset size")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  a.command = app.get_subcommands().front()->get_name();
  if (a.command == "compare" && a.format == "csv" && !cmp->count("--format")) a.format = "json";

  try {
    int exit_code = 0;
    const Report report = execute(a, err, exit_code);
    emit(report, a, out, err);
    return exit_code;
  } catch (const Error& e) {
    if (a.format == "json") {
      err << json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}.dump() << '\n';
    } else {
      err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    }
    return 1;
  }
}

}  // namespace ccp::cli
