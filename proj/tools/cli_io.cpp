// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsa_mf.h"

namespace rsa::cli {

namespace {

constexpr const char* kTool = "rsa-mf";

const std::vector<std::pair<Command, const char*>> kCommands = {
    {Command::solve, "solve"},           {Command::sweep, "sweep"},
    {Command::phase_lines, "phase-lines"}, {Command::jump, "jump"},
    {Command::critical_c, "critical-c"}, {Command::lambda0, "lambda0"},
    {Command::svmc_check, "svmc-check"}, {Command::ed_scaling, "ed-scaling"},
};

// Metadata keys that describe the output rather than the run.
const std::vector<std::string> kInformational = {"tool", "version", "axes", "breaks", "selection"};

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || std::isnan(v)) {
    throw UsageError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError(key + ": " + what);
}

std::string hyphenated(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

void check_status(rsa_status st) {
  if (st == RSA_OK) return;
  std::string msg = std::string(rsa_status_name(st)) + ": " + rsa_last_error();
  switch (st) {
    case RSA_ERR_CONVERGENCE:
    case RSA_ERR_NO_THRESHOLD:
      throw NumericalError(msg);
    case RSA_ERR_IO:
      throw OutputError(msg);
    case RSA_ERR_PARAMETER:
    case RSA_ERR_UNSUPPORTED:
    case RSA_ERR_SIZE:
      throw UsageError(msg);
    default:
      throw std::runtime_error(msg);
  }
}

struct ModelDeleter {
  void operator()(rsa_model* m) const { rsa_model_destroy(m); }
};
struct ListDeleter {
  void operator()(rsa_transition_list* l) const { rsa_transition_list_destroy(l); }
};
using ModelPtr = std::unique_ptr<rsa_model, ModelDeleter>;
using ListPtr = std::unique_ptr<rsa_transition_list, ListDeleter>;

rsa_spec spec_of(const RunConfig& cfg) {
  rsa_spec s = rsa_spec_default();
  s.p = cfg.p;
  s.c = cfg.c;
  s.field = cfg.field == "bimodal"    ? RSA_FIELD_BIMODAL
            : cfg.field == "gaussian" ? RSA_FIELD_GAUSSIAN
                                      : RSA_FIELD_NONE;
  s.h0 = cfg.h0;
  s.sigma = cfg.sigma;
  s.nodes = cfg.nodes;
  s.has_nu = cfg.nu.has_value() ? 1 : 0;
  s.nu = cfg.nu.value_or(1.0);
  return s;
}

ModelPtr make_model(const RunConfig& cfg) {
  const rsa_spec spec = spec_of(cfg);
  rsa_model* raw = nullptr;
  check_status(rsa_model_create(&spec, &raw));
  return ModelPtr(raw);
}

rsa_phase_options phase_of(const RunConfig& cfg) {
  rsa_phase_options o = rsa_phase_options_default();
  o.beta = cfg.beta;
  o.s_min = cfg.s_min;
  o.s_max = cfg.s_max;
  o.s_step = cfg.s_step;
  o.jump_threshold = cfg.jump_threshold;
  o.s_tolerance = cfg.s_tol;
  o.workers = cfg.workers;
  return o;
}

// Inclusive grid lo, lo + step, ..., hi with the last point snapped to hi.
std::vector<double> grid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  if (hi - g.back() > 1e-9 * step) {
    g.push_back(hi);
  } else {
    g.back() = hi;
  }
  return g;
}

bool non_stoquastic(const RunConfig& cfg) { return cfg.nu.has_value(); }

const char* source_name(rsa_branch_source s) {
  switch (s) {
    case RSA_SOURCE_FIXED_POINT: return "fixed-point";
    case RSA_SOURCE_GRID_REFINED: return "grid-refined";
    case RSA_SOURCE_BOUNDARY: return "boundary";
    case RSA_SOURCE_ANALYTIC_LAMBDA0: return "analytic-lambda0";
  }
  return "unknown";
}

std::vector<rsa_transition> collect(const rsa_transition_list* list) {
  std::vector<rsa_transition> out(rsa_transition_list_size(list));
  for (std::size_t i = 0; i < out.size(); ++i) check_status(rsa_transition_list_get(list, i, &out[i]));
  return out;
}

ListPtr traced(const rsa_model* model, const std::vector<double>& lambdas, const rsa_phase_options& o) {
  rsa_transition_list* raw = nullptr;
  check_status(rsa_trace_line(model, lambdas.data(), lambdas.size(), &o, &raw));
  return ListPtr(raw);
}

std::string breaks_of(const rsa_transition_list* list) {
  std::string out;
  for (std::size_t i = 0; i < rsa_transition_list_break_count(list); ++i) {
    double lo = 0.0;
    double hi = 0.0;
    check_status(rsa_transition_list_break(list, i, &lo, &hi));
    if (!out.empty()) out += ';';
    out += format_number(lo) + ":" + format_number(hi);
  }
  return out.empty() ? "none" : out;
}

Table run_solve(const RunConfig& cfg, const rsa_model* model) {
  std::vector<rsa_branch> branches(64);
  std::size_t count = 0;
  check_status(rsa_enumerate_branches(model, cfg.s, cfg.lambda, cfg.beta, branches.data(), branches.size(),
                                      &count));
  branches.resize(count);
  rsa_branch best{};
  check_status(rsa_global_min(model, cfg.s, cfg.lambda, cfg.beta, &best));
  Table t;
  t.columns = {"m"};
  if (non_stoquastic(cfg)) t.columns.push_back("mx");
  for (const char* c : {"f", "stable", "margin", "source", "global"}) t.columns.emplace_back(c);
  for (const auto& b : branches) {
    std::vector<Cell> row{b.m};
    if (non_stoquastic(cfg)) row.emplace_back(b.mx);
    row.emplace_back(b.f);
    row.emplace_back(static_cast<long>(b.stable));
    row.emplace_back(b.margin);
    row.emplace_back(std::string(source_name(b.source)));
    row.emplace_back(static_cast<long>(b.m == best.m));
    t.rows.push_back(std::move(row));
  }
  if (best.degenerate) t.metadata.emplace_back("selection", "degenerate tie resolved towards smaller m");
  return t;
}

Table run_sweep(const RunConfig& cfg, const rsa_model* model) {
  const auto s = grid(cfg.s_min, cfg.s_max, cfg.s_step);
  std::vector<rsa_branch> out(s.size());
  const auto o = phase_of(cfg);
  check_status(rsa_sweep(model, cfg.lambda, s.data(), s.size(), &o, out.data()));
  Table t;
  t.columns = {"s", "m"};
  if (non_stoquastic(cfg)) t.columns.push_back("mx");
  t.columns.push_back("f");
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<Cell> row{s[i], out[i].m};
    if (non_stoquastic(cfg)) row.emplace_back(out[i].mx);
    row.emplace_back(out[i].f);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_phase_lines(const RunConfig& cfg, const rsa_model* model) {
  const auto lambdas = grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_step);
  const auto o = phase_of(cfg);
  const auto line = traced(model, lambdas, o);
  auto points = collect(line.get());
  if (cfg.p == 2 || non_stoquastic(cfg)) {
    rsa_transition_list* raw = nullptr;
    check_status(rsa_second_order_locus(model, lambdas.data(), lambdas.size(), &o, &raw));
    const ListPtr second(raw);
    const auto extra = collect(second.get());
    points.insert(points.end(), extra.begin(), extra.end());
  }
  std::stable_sort(points.begin(), points.end(), [](const rsa_transition& a, const rsa_transition& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.s_star < b.s_star;
  });
  Table t;
  t.metadata.emplace_back("breaks", breaks_of(line.get()));
  t.columns = {"lambda", "s_star", "order", "delta_m", "m_low", "m_high"};
  for (const auto& p : points) {
    t.rows.push_back({p.lambda, p.s_star, std::string(p.order == RSA_ORDER_FIRST ? "first" : "second"),
                      p.delta_m, p.m_low, p.m_high});
  }
  return t;
}

Table run_jump(const RunConfig& cfg, const rsa_model* model) {
  const auto lambdas = grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_step);
  const auto line = traced(model, lambdas, phase_of(cfg));
  std::vector<double> dm(lambdas.size());
  check_status(rsa_jump_profile(line.get(), lambdas.data(), lambdas.size(), dm.data()));
  Table t;
  t.metadata.emplace_back("breaks", breaks_of(line.get()));
  t.metadata.emplace_back("selection", "largest first-order jump per lambda");
  t.columns = {"lambda", "delta_m"};
  for (std::size_t i = 0; i < lambdas.size(); ++i) t.rows.push_back({lambdas[i], dm[i]});
  return t;
}

Table run_critical_c(const RunConfig& cfg) {
  const rsa_spec spec = spec_of(cfg);
  rsa_critical_c_options o = rsa_critical_c_options_default();
  o.phase = phase_of(cfg);
  o.lambda_step = cfg.lambda_step;
  o.c_lo = cfg.c_lo;
  o.c_hi = cfg.c_hi;
  o.width = cfg.width;
  rsa_critical_c_result r{};
  check_status(rsa_critical_c(&spec, &o, &r));
  Table t;
  t.columns = {"c", "rounded", "c_lo", "c_hi"};
  t.rows.push_back({r.c, r.rounded, r.c_lo, r.c_hi});
  return t;
}

Table run_lambda0(const RunConfig& cfg, const rsa_model* model) {
  const auto o = phase_of(cfg);
  rsa_transition_list* raw = nullptr;
  check_status(rsa_lambda0_transitions(model, &o, &raw));
  const ListPtr list(raw);
  Table t;
  t.columns = {"s_star", "m_low", "m_high", "delta_m"};
  for (const auto& p : collect(list.get())) t.rows.push_back({p.s_star, p.m_low, p.m_high, p.delta_m});
  return t;
}

Table run_svmc_check(const RunConfig& cfg, const rsa_model* model) {
  std::vector<double> s;
  std::vector<double> l;
  for (double x : grid(cfg.s_min, cfg.s_max, cfg.s_step)) {
    for (double y : grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_step)) {
      s.push_back(x);
      l.push_back(y);
    }
  }
  std::vector<double> gaps(cfg.betas.size());
  check_status(rsa_svmc_quantum_gap(model, s.data(), l.data(), s.size(), cfg.betas.data(), cfg.betas.size(),
                                    gaps.data()));
  std::vector<double> m_quantum(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    rsa_branch b{};
    check_status(rsa_global_min(model, s[i], l[i], RSA_BETA_INF, &b));
    m_quantum[i] = b.m;
  }
  Table t;
  t.columns = {"beta", "max_gap", "max_argmin_shift"};
  for (std::size_t k = 0; k < cfg.betas.size(); ++k) {
    double shift = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      rsa_branch b{};
      check_status(rsa_svmc_global_min(model, s[i], l[i], cfg.betas[k], &b));
      shift = std::max(shift, std::abs(b.m - m_quantum[i]));
    }
    t.rows.push_back({cfg.betas[k], gaps[k], shift});
  }
  return t;
}

Table run_ed_scaling(const RunConfig& cfg, const rsa_model* model) {
  std::vector<rsa_scaling_row> rows(cfg.sizes.size());
  check_status(rsa_ed_scaling(model, cfg.s, cfg.lambda, cfg.sizes.data(), cfg.sizes.size(),
                              static_cast<std::size_t>(cfg.cap), rows.data()));
  Table t;
  t.columns = {"n_sites", "e0_per_site", "m_per_site", "f_mf", "gap", "ratio"};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long>(r.n_sites), r.e0_per_site, r.m_per_site, r.f_mf, r.gap, r.ratio});
  }
  return t;
}

}  // namespace

const char* to_string(Command c) noexcept {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> command_from_string(const std::string& s) {
  for (const auto& [cmd, name] : kCommands) {
    if (s == name) return cmd;
  }
  return std::nullopt;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "p",          "c",      "field",      "h0",          "sigma",  "nodes",
      "nu",      "s",          "lambda", "s_min",      "s_max",       "s_step", "lambda_min",
      "lambda_max", "lambda_step", "s_tol", "jump_threshold", "beta",  "c_lo",   "c_hi",
      "width",   "betas",      "sizes",  "cap",        "output",      "format", "workers"};
  return keys;
}

RunConfig defaults_for(Command command) {
  RunConfig cfg;
  cfg.command = command;
  if (command == Command::critical_c) {
    cfg.s_step = 0.01;
    cfg.s_tol = 1e-7;
  } else if (command == Command::svmc_check) {
    cfg.s_step = 0.05;
    cfg.lambda_step = 0.05;
  } else if (command == Command::ed_scaling) {
    cfg.s = 0.2;
  }
  return cfg;
}

RunConfig config_from_keys(const KeyValues& kv) {
  const auto& known = config_keys();
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError(key + ": unknown key");
  }
  const auto it = kv.find("command");
  if (it == kv.end()) throw UsageError("command: missing required field");
  const auto command = command_from_string(it->second);
  if (!command) throw UsageError("command: unknown command '" + it->second + "'");

  RunConfig cfg = defaults_for(*command);
  const auto get = [&kv](const char* key) -> const std::string* {
    const auto f = kv.find(key);
    return f == kv.end() ? nullptr : &f->second;
  };
  const auto num = [&](const char* key, double& dst) {
    if (const auto* v = get(key)) dst = parse_double(key, *v);
  };
  const auto integer = [&](const char* key, auto& dst) {
    if (const auto* v = get(key)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(parse_long(key, *v));
  };

  integer("p", cfg.p);
  num("c", cfg.c);
  if (const auto* v = get("field")) cfg.field = *v;
  num("h0", cfg.h0);
  num("sigma", cfg.sigma);
  integer("nodes", cfg.nodes);
  if (const auto* v = get("nu")) {
    if (*v == "none" || v->empty()) {
      cfg.nu.reset();
    } else {
      cfg.nu = parse_double("nu", *v);
    }
  }
  num("s", cfg.s);
  num("lambda", cfg.lambda);
  num("s_min", cfg.s_min);
  num("s_max", cfg.s_max);
  num("s_step", cfg.s_step);
  num("lambda_min", cfg.lambda_min);
  num("lambda_max", cfg.lambda_max);
  num("lambda_step", cfg.lambda_step);
  num("s_tol", cfg.s_tol);
  num("jump_threshold", cfg.jump_threshold);
  num("beta", cfg.beta);
  num("c_lo", cfg.c_lo);
  num("c_hi", cfg.c_hi);
  num("width", cfg.width);
  if (const auto* v = get("betas")) {
    cfg.betas.clear();
    for (const auto& item : split_list(*v)) cfg.betas.push_back(parse_double("betas", item));
  }
  if (const auto* v = get("sizes")) {
    cfg.sizes.clear();
    for (const auto& item : split_list(*v)) cfg.sizes.push_back(static_cast<int>(parse_long("sizes", item)));
  }
  integer("cap", cfg.cap);
  if (const auto* v = get("output")) cfg.output = *v;
  if (const auto* v = get("format")) {
    require(*v == "csv" || *v == "json", "format", "expected csv or json, got '" + *v + "'");
    cfg.format = *v == "csv" ? Format::csv : Format::json;
  }
  integer("workers", cfg.workers);

  require(cfg.p >= 2, "p", "must be an integer >= 2");
  require(cfg.c >= 0.0 && cfg.c <= 1.0, "c", "must lie in [0, 1]");
  require(cfg.field == "none" || cfg.field == "bimodal" || cfg.field == "gaussian", "field",
          "expected none, bimodal or gaussian, got '" + cfg.field + "'");
  require(std::isfinite(cfg.h0) && cfg.h0 >= 0.0, "h0", "must be finite and >= 0");
  require(std::isfinite(cfg.sigma) && cfg.sigma > 0.0, "sigma", "must be finite and > 0");
  require(cfg.nodes >= 1 && cfg.nodes <= 512, "nodes", "must lie in [1, 512]");
  if (cfg.nu) require(*cfg.nu >= 0.0 && *cfg.nu <= 1.0, "nu", "must lie in [0, 1]");
  require(cfg.s >= 0.0 && cfg.s <= 1.0, "s", "must lie in [0, 1]");
  require(cfg.lambda >= 0.0 && cfg.lambda <= 1.0, "lambda", "must lie in [0, 1]");
  require(cfg.s_min >= 0.0 && cfg.s_min <= 1.0, "s_min", "must lie in [0, 1]");
  require(cfg.s_max >= 0.0 && cfg.s_max <= 1.0, "s_max", "must lie in [0, 1]");
  require(cfg.s_min < cfg.s_max, "s_max", "must exceed s_min");
  require(std::isfinite(cfg.s_step) && cfg.s_step > 0.0, "s_step", "must be > 0");
  require(cfg.lambda_min >= 0.0 && cfg.lambda_min <= 1.0, "lambda_min", "must lie in [0, 1]");
  require(cfg.lambda_max >= 0.0 && cfg.lambda_max <= 1.0, "lambda_max", "must lie in [0, 1]");
  require(cfg.lambda_min <= cfg.lambda_max, "lambda_max", "must not be below lambda_min");
  require(std::isfinite(cfg.lambda_step) && cfg.lambda_step > 0.0, "lambda_step", "must be > 0");
  require(std::isfinite(cfg.s_tol) && cfg.s_tol > 0.0, "s_tol", "must be > 0");
  require(std::isfinite(cfg.jump_threshold) && cfg.jump_threshold > 0.0, "jump_threshold", "must be > 0");
  require(cfg.beta > 0.0, "beta", "must be > 0 or inf");
  require(cfg.c_lo >= 0.0 && cfg.c_hi <= 1.0 && cfg.c_lo < cfg.c_hi, "c_lo", "need 0 <= c_lo < c_hi <= 1");
  require(std::isfinite(cfg.width) && cfg.width > 0.0, "width", "must be > 0");
  require(!cfg.betas.empty(), "betas", "must not be empty");
  for (double b : cfg.betas) require(std::isfinite(b) && b > 0.0, "betas", "entries must be finite and > 0");
  require(!cfg.sizes.empty(), "sizes", "must not be empty");
  for (int n : cfg.sizes) require(n >= 1 && n <= 400, "sizes", "entries must lie in [1, 400]");
  require(cfg.cap >= 1, "cap", "must be >= 1");
  require(cfg.workers >= 1, "workers", "must be >= 1");
  return cfg;
}

std::vector<std::pair<std::string, std::string>> to_keys(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto put = [&out](const char* k, std::string v) { out.emplace_back(k, std::move(v)); };
  put("command", to_string(cfg.command));
  put("p", std::to_string(cfg.p));
  put("c", shortest(cfg.c));
  put("field", cfg.field);
  put("h0", shortest(cfg.h0));
  put("sigma", shortest(cfg.sigma));
  put("nodes", std::to_string(cfg.nodes));
  put("nu", cfg.nu ? shortest(*cfg.nu) : "none");
  put("s", shortest(cfg.s));
  put("lambda", shortest(cfg.lambda));
  put("s_min", shortest(cfg.s_min));
  put("s_max", shortest(cfg.s_max));
  put("s_step", shortest(cfg.s_step));
  put("lambda_min", shortest(cfg.lambda_min));
  put("lambda_max", shortest(cfg.lambda_max));
  put("lambda_step", shortest(cfg.lambda_step));
  put("s_tol", shortest(cfg.s_tol));
  put("jump_threshold", shortest(cfg.jump_threshold));
  put("beta", shortest(cfg.beta));
  put("c_lo", shortest(cfg.c_lo));
  put("c_hi", shortest(cfg.c_hi));
  put("width", shortest(cfg.width));
  std::string betas;
  for (double b : cfg.betas) betas += (betas.empty() ? "" : ",") + shortest(b);
  put("betas", betas);
  std::string sizes;
  for (int n : cfg.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  put("sizes", sizes);
  put("cap", std::to_string(cfg.cap));
  put("format", cfg.format == Format::csv ? "csv" : "json");
  return out;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot read '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config: top level must be an object");
  KeyValues kv;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_string()) {
      kv[key] = value.get<std::string>();
    } else if (value.is_number() || value.is_boolean()) {
      kv[key] = value.dump();
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!v.is_number()) throw UsageError(key + ": list entries must be numbers");
        joined += (joined.empty() ? "" : ",") + v.dump();
      }
      kv[key] = joined;
    } else if (value.is_null() && key == "nu") {
      kv[key] = "none";
    } else {
      throw UsageError(key + ": unsupported value type");
    }
  }
  return kv;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv) {
  CLI::App app{"Mean-field phase diagrams of reverse annealing in the p-spin model", kTool};
  app.require_subcommand(1, 1);
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : config_keys()) {
    if (key == "command") continue;
    options[key] = app.add_option("--" + hyphenated(key), flags[key]);
  }
  std::string config_path;
  app.add_option("--config", config_path, "flat JSON config file; flags take precedence");
  for (const auto& [cmd, name] : kCommands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  KeyValues kv;
  if (!config_path.empty()) kv = read_config_file(config_path);
  kv["command"] = app.get_subcommands().front()->get_name();
  for (const auto& [key, opt] : options) {
    if (opt->count() > 0) kv[key] = flags[key];
  }
  if (const char* env = std::getenv("RSA_MF_WORKERS")) kv["workers"] = env;
  return config_from_keys(kv);
}

RunConfig parse_metadata(const std::string& csv_text) {
  KeyValues kv;
  std::istringstream in(csv_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = line.substr(2, eq - 2);
    if (std::find(kInformational.begin(), kInformational.end(), key) != kInformational.end()) continue;
    kv[key] = line.substr(eq + 1);
  }
  return config_from_keys(kv);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (const auto& [k, v] : table.metadata) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&out](const auto& cell) {
            using T = std::decay_t<decltype(cell)>;
            if constexpr (std::is_same_v<T, double>) {
              out += format_number(cell);
            } else if constexpr (std::is_same_v<T, long>) {
              out += std::to_string(cell);
            } else {
              out += cell;
            }
          },
          row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      std::visit(
          [&jrow](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, double>) {
              // Same 12 significant digits as the CSV; non-finite values become strings.
              if (std::isfinite(c)) {
                jrow.push_back(std::strtod(format_number(c).c_str(), nullptr));
              } else {
                jrow.push_back(format_number(c));
              }
            } else {
              jrow.push_back(c);
            }
          },
          cell);
    }
    doc["rows"].push_back(std::move(jrow));
  }
  return doc.dump(2) + "\n";
}

Table run(const RunConfig& cfg) {
  Table t;
  if (cfg.command == Command::critical_c) {
    t = run_critical_c(cfg);
  } else {
    const auto model = make_model(cfg);
    switch (cfg.command) {
      case Command::solve: t = run_solve(cfg, model.get()); break;
      case Command::sweep: t = run_sweep(cfg, model.get()); break;
      case Command::phase_lines: t = run_phase_lines(cfg, model.get()); break;
      case Command::jump: t = run_jump(cfg, model.get()); break;
      case Command::lambda0: t = run_lambda0(cfg, model.get()); break;
      case Command::svmc_check: t = run_svmc_check(cfg, model.get()); break;
      case Command::ed_scaling: t = run_ed_scaling(cfg, model.get()); break;
      case Command::critical_c: break;
    }
  }
  std::vector<std::pair<std::string, std::string>> meta = {{"tool", kTool}, {"version", rsa_version()}};
  for (auto& kv : to_keys(cfg)) meta.push_back(std::move(kv));
  meta.emplace_back("axes", "lambda first, s second");
  for (auto& kv : t.metadata) meta.push_back(std::move(kv));
  t.metadata = std::move(meta);
  return t;
}

void emit(const Table& table, const RunConfig& cfg) {
  const std::string text = cfg.format == Format::csv ? render_csv(table) : render_json(table);
  if (cfg.output.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw OutputError("output: write to stdout failed");
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw OutputError("output: cannot open '" + cfg.output + "' for writing");
  out << text;
  out.close();
  if (!out) throw OutputError("output: write to '" + cfg.output + "' failed");
}

}  // namespace rsa::cli
