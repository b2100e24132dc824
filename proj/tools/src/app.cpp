#include "dgsm_app/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dgsm/error.hpp"

namespace dgsm::app {

using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unknown_function: return exit_unknown_function;
    case ErrorCode::constant_model: return exit_constant_model;
    case ErrorCode::missing_reference: return exit_missing_reference;
    case ErrorCode::domain_error:
    case ErrorCode::non_finite:
    case ErrorCode::accuracy_unattainable: return exit_numeric;
    case ErrorCode::invalid_argument:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::unsupported_distribution:
    case ErrorCode::insufficient_data: return exit_invalid;
  }
  return exit_invalid;
}

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::string gradient_mode_name(GradientMode m) {
  return m == GradientMode::analytic ? "analytic" : "finite_difference";
}

GradientMode parse_gradient_mode(const std::string& s) {
  if (s == "analytic") return GradientMode::analytic;
  if (s == "finite_difference") return GradientMode::finite_difference;
  fail(ErrorCode::invalid_argument, "unknown gradient mode '" + s + "'");
}

DistributionKind parse_distribution(const std::string& s) {
  if (s == "uniform01") return DistributionKind::uniform01;
  if (s == "normal") return DistributionKind::normal;
  fail(ErrorCode::invalid_argument, "unknown distribution '" + s + "'");
}

void put(json& j, const char* key, const std::optional<double>& v) {
  if (v && std::isfinite(*v)) j[key] = *v;
}

std::optional<double> get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

bool close_to(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

void RunConfig::validate() const {
  require(n > 0, ErrorCode::invalid_argument, "--n must be positive");
  require(std::isfinite(m_lo) && std::isfinite(m_hi) && m_lo > 0.0 && m_lo < m_hi,
          ErrorCode::invalid_argument, "--m-range needs 0 < lo < hi");
  require(is_power_of_two(n_lo) && is_power_of_two(n_hi) && n_lo <= n_hi,
          ErrorCode::invalid_argument, "--n-grid needs powers of two lo <= hi");
  require(!quantities.empty(), ErrorCode::invalid_argument, "--quantity is empty");
  require(!variables.empty(), ErrorCode::invalid_argument, "--variable is empty");
  for (auto v : variables) require(v >= 1, ErrorCode::invalid_argument, "--variable is 1-based");
  if (normal) {
    require(!means.empty() && means.size() == sigmas.size(), ErrorCode::invalid_argument,
            "--dist normal needs --means and --sigmas of equal, nonzero length");
    for (double m : means) require(std::isfinite(m), ErrorCode::invalid_argument, "means must be finite");
    for (double s : sigmas) {
      require(std::isfinite(s) && s > 0.0, ErrorCode::invalid_argument, "sigmas must be positive");
    }
  } else {
    require(means.empty() && sigmas.empty(), ErrorCode::invalid_argument,
            "--means/--sigmas need --dist normal");
  }
}

std::vector<Distribution> RunConfig::inputs() const {
  std::vector<Distribution> in;
  if (normal) {
    for (std::size_t k = 0; k < means.size(); ++k) in.push_back(Distribution::normal(means[k], sigmas[k]));
  }
  return in;
}

ReportOptions RunConfig::report_options() const {
  ReportOptions o;
  o.m_star.m_lo = m_lo;
  o.m_star.m_hi = m_hi;
  o.threads = threads;
  return o;
}

ParamMap params_from_json(const json& j) {
  require(j.is_object(), ErrorCode::invalid_argument, "--params must be a JSON object");
  ParamMap out;
  for (const auto& [key, value] : j.items()) {
    std::vector<double> values;
    if (value.is_number()) {
      values.push_back(value.get<double>());
    } else if (value.is_array()) {
      for (const auto& x : value) {
        require(x.is_number(), ErrorCode::invalid_argument, "parameter '" + key + "' must hold numbers");
        values.push_back(x.get<double>());
      }
    } else {
      fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a number or array");
    }
    out[key] = std::move(values);
  }
  return out;
}

ParamMap parse_params(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text.front() == '@') {
    std::ifstream file(text.substr(1));
    require(static_cast<bool>(file), ErrorCode::invalid_argument, "cannot read " + text.substr(1));
    std::stringstream ss;
    ss << file.rdbuf();
    body = ss.str();
  }
  json j = json::parse(body, nullptr, false);
  require(!j.is_discarded(), ErrorCode::invalid_argument, "--params is not valid JSON");
  return params_from_json(j);
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::invalid_argument, "expected lo:hi, got '" + text + "'");
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    const double a = std::stod(lo, &used);
    require(used == lo.size(), ErrorCode::invalid_argument, "bad number '" + lo + "'");
    const double b = std::stod(hi, &used);
    require(used == hi.size(), ErrorCode::invalid_argument, "bad number '" + hi + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    fail(ErrorCode::invalid_argument, "expected lo:hi, got '" + text + "'");
  }
}

json report_to_json(const BoundsReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["model"] = r.model;
  j["distribution"] = to_string(r.distribution);
  j["dimension"] = r.dimension;
  j["N"] = r.count;
  j["seed"] = r.seed;
  j["mean"] = r.mean;
  j["D"] = r.variance;
  j["range_heuristic"] = r.range_heuristic;
  json vars = json::array();
  for (std::size_t i = 0; i < r.variables.size(); ++i) {
    const auto& v = r.variables[i];
    json x;
    x["index"] = i + 1;
    x["S"] = v.s_first;
    x["S_tot"] = v.s_total;
    x["morris_mu"] = v.morris_mu;
    x["nu"] = v.nu;
    put(x, "zeta", v.zeta);
    put(x, "LB1", v.lb1);
    put(x, "LB2", v.lb2);
    put(x, "m_star", v.m_star);
    put(x, "LB_star", v.lb_star);
    put(x, "UB1", v.ub1);
    put(x, "UB2", v.ub2);
    put(x, "w_normal", v.w_normal);
    put(x, "LB_normal", v.lb_normal);
    put(x, "UB_normal", v.ub_normal);
    put(x, "range_lower", v.range_lower);
    put(x, "range_upper", v.range_upper);
    x["inert"] = v.inert;
    vars.push_back(std::move(x));
  }
  j["variables"] = std::move(vars);
  const auto& l = r.ledger;
  j["ledger"] = {{"n_f_lb", l.n_f_lb},
                 {"n_f_ub", l.n_f_ub},
                 {"n_f_s", l.n_f_s},
                 {"n_f_first_order", l.n_f_first_order},
                 {"gradient_calls", l.gradient_calls},
                 {"fd_function_calls", l.fd_function_calls},
                 {"gradient_mode", gradient_mode_name(l.gradient_mode)}};
  return j;
}

BoundsReport report_from_json(const json& j) {
  try {
    require(j.at("schema_version").get<int>() == kReportSchemaVersion, ErrorCode::invalid_argument,
            "unsupported report schema version");
    BoundsReport r;
    r.model = j.at("model").get<std::string>();
    r.distribution = parse_distribution(j.at("distribution").get<std::string>());
    r.dimension = j.at("dimension").get<std::size_t>();
    r.count = j.at("N").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.mean = j.at("mean").get<double>();
    r.variance = j.at("D").get<double>();
    r.range_heuristic = j.value("range_heuristic", false);
    for (const auto& x : j.at("variables")) {
      VariableReport v;
      v.s_first = x.at("S").get<double>();
      v.s_total = x.at("S_tot").get<double>();
      v.morris_mu = x.at("morris_mu").get<double>();
      v.nu = x.at("nu").get<double>();
      v.zeta = get(x, "zeta");
      v.lb1 = get(x, "LB1");
      v.lb2 = get(x, "LB2");
      v.m_star = get(x, "m_star");
      v.lb_star = get(x, "LB_star");
      v.ub1 = get(x, "UB1");
      v.ub2 = get(x, "UB2");
      v.w_normal = get(x, "w_normal");
      v.lb_normal = get(x, "LB_normal");
      v.ub_normal = get(x, "UB_normal");
      v.range_lower = get(x, "range_lower");
      v.range_upper = get(x, "range_upper");
      v.inert = x.value("inert", false);
      r.variables.push_back(v);
    }
    const json& l = j.at("ledger");
    r.ledger.n_f_lb = l.at("n_f_lb").get<std::uint64_t>();
    r.ledger.n_f_ub = l.at("n_f_ub").get<std::uint64_t>();
    r.ledger.n_f_s = l.at("n_f_s").get<std::uint64_t>();
    r.ledger.n_f_first_order = l.at("n_f_first_order").get<std::uint64_t>();
    r.ledger.gradient_calls = l.at("gradient_calls").get<std::uint64_t>();
    r.ledger.fd_function_calls = l.at("fd_function_calls").get<std::uint64_t>();
    r.ledger.gradient_mode = parse_gradient_mode(l.at("gradient_mode").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("malformed report JSON: ") + e.what());
  }
}

json analytic_to_json(const AnalyticReference& ref) {
  json j;
  j["mean"] = ref.mean;
  j["D"] = ref.variance;
  const std::size_t d = ref.total.size();
  auto at = [](const std::vector<double>& v, std::size_t i) -> std::optional<double> {
    if (i < v.size()) return v[i];
    return std::nullopt;
  };
  json vars = json::array();
  for (std::size_t i = 0; i < d; ++i) {
    json x;
    x["index"] = i + 1;
    put(x, "S", at(ref.first_order, i));
    put(x, "S_tot", at(ref.total, i));
    put(x, "morris_mu", at(ref.morris_mu, i));
    put(x, "nu", at(ref.nu, i));
    put(x, "zeta", at(ref.zeta, i));
    put(x, "LB1", at(ref.lb1, i));
    put(x, "LB2", at(ref.lb2, i));
    put(x, "m_star", at(ref.m_star, i));
    put(x, "LB_star", at(ref.lb_star, i));
    put(x, "UB1", at(ref.ub1, i));
    put(x, "UB2", at(ref.ub2, i));
    put(x, "w_normal", at(ref.w_normal, i));
    put(x, "LB_normal", at(ref.lb_normal, i));
    put(x, "UB_normal", at(ref.ub_normal, i));
    json tight = json::array();
    const double st = ref.total[i];
    const std::pair<const char*, const std::vector<double>*> bounds[] = {
        {"LB_star", &ref.lb_star}, {"UB1", &ref.ub1},       {"UB2", &ref.ub2},
        {"LB_normal", &ref.lb_normal}, {"UB_normal", &ref.ub_normal}};
    for (const auto& [name, values] : bounds) {
      if (i < values->size() && close_to((*values)[i], st)) tight.push_back(name);
    }
    x["tight"] = std::move(tight);
    vars.push_back(std::move(x));
  }
  j["variables"] = std::move(vars);
  return j;
}

std::string report_to_csv(const BoundsReport& r) {
  std::ostringstream os;
  os << "variable,S,S_tot,morris_mu,nu,zeta,LB1,LB2,m_star,LB_star,UB1,UB2,w_normal,LB_normal,"
        "UB_normal,range_lower,range_upper,inert\n";
  for (std::size_t i = 0; i < r.variables.size(); ++i) {
    const auto& v = r.variables[i];
    os << i + 1 << ',' << number(v.s_first) << ',' << number(v.s_total) << ','
       << number(v.morris_mu) << ',' << number(v.nu) << ',' << number(v.zeta) << ','
       << number(v.lb1) << ',' << number(v.lb2) << ',' << number(v.m_star) << ','
       << number(v.lb_star) << ',' << number(v.ub1) << ',' << number(v.ub2) << ','
       << number(v.w_normal) << ',' << number(v.lb_normal) << ',' << number(v.ub_normal) << ','
       << number(v.range_lower) << ',' << number(v.range_upper) << ',' << (v.inert ? 1 : 0)
       << '\n';
  }
  return os.str();
}

json convergence_to_json(const std::vector<ConvergenceTable>& tables) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  json arr = json::array();
  for (const auto& t : tables) {
    json x;
    x["quantity"] = to_string(t.quantity);
    x["variable"] = t.variable + 1;
    x["K"] = t.replicates;
    x["reference"] = t.reference;
    x["absolute_error"] = t.absolute_error;
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back({{"N", r.count}, {"rmse", r.rmse}});
    x["rows"] = std::move(rows);
    if (t.fit) {
      json f;
      f["c"] = t.fit->coefficient;
      f["alpha"] = t.fit->exponent;
      f["r_squared"] = t.fit->r_squared;
      f["rows_used"] = t.fit->rows_used;
      if (t.fit->excluded_count) f["excluded_N"] = *t.fit->excluded_count;
      f["warnings"] = t.fit->warnings;
      x["fit"] = std::move(f);
    } else {
      x["fit"] = nullptr;
    }
    arr.push_back(std::move(x));
  }
  j["tables"] = std::move(arr);
  return j;
}

std::string convergence_to_csv(const std::vector<ConvergenceTable>& tables) {
  std::ostringstream os;
  os << "quantity,variable,N,rmse,K\n";
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      os << to_string(t.quantity) << ',' << t.variable + 1 << ',' << r.count << ','
         << number(r.rmse) << ',' << t.replicates << '\n';
    }
  }
  return os.str();
}

namespace {

TestFunction build_function(const RunConfig& config, const Registry& registry) {
  config.validate();
  require(!config.function.empty(), ErrorCode::invalid_argument, "--function is required");
  const auto in = config.inputs();
  return registry.make(config.function, config.params, in);
}

void check_variables(const RunConfig& config, std::size_t d) {
  for (auto v : config.variables) {
    require(v >= 1 && v <= d, ErrorCode::invalid_argument,
            "--variable " + std::to_string(v) + " outside 1.." + std::to_string(d));
  }
}

}  // namespace

void cmd_analyze(const RunConfig& config, const Registry& registry, std::ostream& out) {
  const TestFunction fn = build_function(config, registry);
  const SamplePlan plan = make_plan(fn.model, config.n, std::nullopt, config.seed);
  const BoundsReport report = assemble_report(fn.model, plan, config.report_options());
  if (config.format == OutputFormat::csv) {
    out << report_to_csv(report);
    return;
  }
  json j = report_to_json(report);
  if (fn.analytic) j["analytic"] = analytic_to_json(*fn.analytic);
  out << j.dump(2) << '\n';
}

void cmd_convergence(const RunConfig& config, const Registry& registry, std::ostream& out) {
  require(config.k >= 2, ErrorCode::invalid_argument, "--k: K >= 2 replicates required");
  const TestFunction fn = build_function(config, registry);
  require(fn.analytic.has_value(), ErrorCode::missing_reference,
          "function '" + fn.name + "' has no analytic reference values");
  check_variables(config, fn.model.dimension());
  for (Quantity q : config.quantities) {
    for (auto v : config.variables) reference_value(*fn.analytic, q, v - 1);
  }
  const auto grid = power_of_two_grid(config.n_lo, config.n_hi);
  ConvergenceOptions opts;
  opts.seed = config.seed;
  opts.threads = config.threads;
  std::vector<ConvergenceTable> tables;
  for (auto v : config.variables) {
    auto t = rmse_convergence(fn, config.quantities, v - 1, grid, config.k, opts,
                              config.report_options());
    for (auto& x : t) tables.push_back(std::move(x));
  }
  if (config.format == OutputFormat::csv) {
    out << convergence_to_csv(tables);
  } else {
    out << convergence_to_json(tables).dump(2) << '\n';
  }
}

void cmd_list_functions(const Registry& registry, std::ostream& out) {
  for (const auto& e : registry.entries()) {
    out << e.name << "\n  dimension: " << e.dimension << "\n  parameters: " << e.parameters
        << "\n  analytic reference: " << (e.analytic ? "yes" : "no") << '\n';
  }
}

namespace {

struct CliState {
  RunConfig config;
  std::string params_text;
  std::string m_range = "0.1:100";
  std::string n_grid = "256:16384";
  std::string quantity = "s_tot";
  std::vector<std::size_t> variables{1};
  std::string dist = "uniform";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CliState& s) {
  cmd->add_option("--function", s.config.function, "Registry function name")->required();
  cmd->add_option("--params", s.params_text, "Function parameters: JSON object or @file");
  cmd->add_option("--n", s.config.n, "Number of Sobol' points N");
  cmd->add_option("--seed", s.seed, "Seed for replicate shifts (default DGSM_SEED or " +
                                        std::to_string(kDefaultSeed) + ")");
  cmd->add_option("--m-range", s.m_range, "m* search range lo:hi");
  cmd->add_option("--dist", s.dist, "Input distribution")->check(CLI::IsMember({"uniform", "normal"}));
  cmd->add_option("--means", s.config.means, "Normal means")->delimiter(',');
  cmd->add_option("--sigmas", s.config.sigmas, "Normal standard deviations")->delimiter(',');
  cmd->add_option("--out", s.config.out, "Output path, or - for stdout");
  cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", s.config.threads, "Worker threads (0 = auto)");
}

RunConfig finish(CliState& s) {
  RunConfig c = s.config;
  if (!s.params_text.empty()) c.params = parse_params(s.params_text);
  if (s.seed) {
    c.seed = *s.seed;
  } else if (const char* env = std::getenv("DGSM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      require(used == std::string(env).size(), ErrorCode::invalid_argument, "");
    } catch (const std::exception&) {
      fail(ErrorCode::invalid_argument, std::string("DGSM_SEED is not an unsigned integer: ") + env);
    }
  }
  const auto [m_lo, m_hi] = parse_range(s.m_range);
  c.m_lo = m_lo;
  c.m_hi = m_hi;
  const auto [n_lo, n_hi] = parse_range(s.n_grid);
  require(n_lo >= 1 && n_hi >= 1 && n_lo == std::floor(n_lo) && n_hi == std::floor(n_hi),
          ErrorCode::invalid_argument, "--n-grid needs integers");
  c.n_lo = static_cast<std::size_t>(n_lo);
  c.n_hi = static_cast<std::size_t>(n_hi);
  c.quantities.clear();
  std::stringstream qs(s.quantity);
  for (std::string item; std::getline(qs, item, ',');) c.quantities.push_back(parse_quantity(item));
  c.variables = s.variables;
  c.normal = s.dist == "normal";
  c.format = s.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  c.validate();
  return c;
}

}  // namespace

int run(int argc, const char* const* argv, const Registry& registry, std::ostream& out,
        std::ostream& err) {
  CLI::App cli{"Derivative-based global sensitivity bounds", "dgsm"};
  cli.require_subcommand(1);
  CliState analyze_state, conv_state;

  CLI::App* analyze = cli.add_subcommand("analyze", "Estimate indices and all DGSM bounds");
  add_common(analyze, analyze_state);

  CLI::App* conv = cli.add_subcommand("convergence", "RMSE convergence against analytic values");
  add_common(conv, conv_state);
  conv->add_option("--k", conv_state.config.k, "Replicates K (>= 2)");
  conv->add_option("--quantity", conv_state.quantity, "s, s_tot, lb1, lb2, ub1, ub2 (comma list)");
  conv->add_option("--variable", conv_state.variables, "1-based variable indices")->delimiter(',');
  conv->add_option("--n-grid", conv_state.n_grid, "N grid lo:hi, powers of two");

  CLI::App* list = cli.add_subcommand("list-functions", "List registry functions");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (list->parsed()) {
      cmd_list_functions(registry, out);
      return exit_ok;
    }
    CliState& state = analyze->parsed() ? analyze_state : conv_state;
    const RunConfig config = finish(state);

    std::ofstream file;
    std::ostream* sink = &out;
    if (config.out != "-") {
      file.open(config.out);
      require(static_cast<bool>(file), ErrorCode::invalid_argument, "cannot open " + config.out);
      sink = &file;
    }
    // Render fully before writing so a failed run leaves no partial output.
    std::ostringstream buffer;
    if (analyze->parsed()) {
      cmd_analyze(config, registry, buffer);
    } else {
      cmd_convergence(config, registry, buffer);
    }
    *sink << buffer.str();
    sink->flush();
    require(static_cast<bool>(*sink), ErrorCode::invalid_argument, "failed writing output");
    return exit_ok;
  } catch (const Error& e) {
    err << "dgsm: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "dgsm: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace dgsm::app
