#include "dpsla/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dpsla/error.hpp"

namespace dpsla {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  fail(ErrorCode::Config, "config: " + field + ": " + why);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) bad(where.empty() ? key : where + "." + key, "unknown key");
}

double get_real(const json& obj, const std::string& sec, const char* key, double def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number()) bad(sec + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(sec + "." + key, "must be finite");
  return d;
}

std::uint64_t get_uint(const json& obj, const std::string& sec, const char* key, std::uint64_t def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) bad(sec + "." + key, "must be non-negative");
  bad(sec + "." + key, "expected an integer");
}

std::string get_string(const json& obj, const std::string& sec, const char* key, const std::string& def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_string()) bad(sec + "." + key, "expected a string");
  return v.get<std::string>();
}

void parse_problem(const json& j, RunConfig::Problem& p) {
  reject_unknown(j, "problem", {"type", "path", "n_agents", "dim", "rows_per_agent", "seed", "graph", "edge_prob", "x0"});
  p.type = get_string(j, "problem", "type", p.type);
  if (p.type != "paper" && p.type != "triangle" && p.type != "file")
    bad("problem.type", "expected paper, triangle or file");
  p.path = get_string(j, "problem", "path", p.path);
  if (p.type == "file" && p.path.empty()) bad("problem.path", "required when type is file");
  p.n_agents = get_uint(j, "problem", "n_agents", p.n_agents);
  p.dim = get_uint(j, "problem", "dim", p.dim);
  p.rows_per_agent = get_uint(j, "problem", "rows_per_agent", p.rows_per_agent);
  p.seed = get_uint(j, "problem", "seed", p.seed);
  if (p.n_agents < 2) bad("problem.n_agents", "need at least 2 agents");
  if (p.dim < 1) bad("problem.dim", "must be positive");
  if (p.rows_per_agent < 1) bad("problem.rows_per_agent", "must be positive");
  try {
    p.graph = parse_graph_kind(get_string(j, "problem", "graph", std::string(to_string(p.graph))));
  } catch (const Error& e) {
    bad("problem.graph", e.what());
  }
  if (p.graph == GraphKind::Triangle && p.type == "paper" && p.n_agents != 3)
    bad("problem.graph", "triangle needs n_agents = 3");
  p.edge_prob = get_real(j, "problem", "edge_prob", p.edge_prob);
  if (!(p.edge_prob >= 0.0 && p.edge_prob <= 1.0)) bad("problem.edge_prob", "must lie in [0, 1]");
  const std::string x0 = get_string(j, "problem", "x0", p.x0 == X0Policy::Center ? "center" : "random");
  if (x0 == "center") p.x0 = X0Policy::Center;
  else if (x0 == "random") p.x0 = X0Policy::Random;
  else bad("problem.x0", "expected center or random");
}

void parse_algorithm(const json& j, RunConfig::Algorithm& a) {
  reject_unknown(j, "algorithm", {"name", "gamma", "gamma_bar", "alpha0", "c_schedule", "level_init", "eta_cap",
                                  "constraint_beta", "eps_grad", "feasibility_domain", "dgd_scale", "naive_target"});
  a.name = get_string(j, "algorithm", "name", a.name);
  if (a.name != "dpsla" && a.name != "dgd" && a.name != "naive_polyak")
    bad("algorithm.name", "expected dpsla, dgd or naive_polyak");
  StepsizeConfig& s = a.stepsize;
  s.gamma = get_real(j, "algorithm", "gamma", s.gamma);
  s.gamma_bar = get_real(j, "algorithm", "gamma_bar", s.gamma_bar);
  s.alpha0 = get_real(j, "algorithm", "alpha0", s.alpha0);
  s.eps_grad = get_real(j, "algorithm", "eps_grad", s.eps_grad);
  if (j.contains("c_schedule")) {
    const json& c = j.at("c_schedule");
    reject_unknown(c, "algorithm.c_schedule", {"kind", "scale"});
    const std::string kind = get_string(c, "algorithm.c_schedule", "kind", "sqrt");
    if (kind == "sqrt") s.c_schedule.kind = CSchedule::Kind::Sqrt;
    else if (kind == "constant") s.c_schedule.kind = CSchedule::Kind::Constant;
    else bad("algorithm.c_schedule.kind", "expected sqrt or constant");
    s.c_schedule.scale = get_real(c, "algorithm.c_schedule", "scale", s.c_schedule.scale);
  }
  if (j.contains("level_init")) {
    const json& l = j.at("level_init");
    if (l.is_number()) {
      a.level_init = {l.get<double>()};
    } else if (l.is_array() && !l.empty()) {
      a.level_init.clear();
      for (const auto& v : l) {
        if (!v.is_number()) bad("algorithm.level_init", "expected numbers");
        a.level_init.push_back(v.get<double>());
      }
    } else {
      bad("algorithm.level_init", "expected a number or a non-empty array");
    }
    for (double v : a.level_init)
      if (!std::isfinite(v)) bad("algorithm.level_init", "must be finite");
  }
  if (j.contains("eta_cap")) {
    const json& e = j.at("eta_cap");
    if (e.is_null()) s.eta_cap.reset();
    else if (e.is_number_unsigned() && e.get<std::uint64_t>() > 0) s.eta_cap = e.get<std::size_t>();
    else bad("algorithm.eta_cap", "expected a positive integer or null");
  }
  const std::string cb = get_string(j, "algorithm", "constraint_beta",
                                    s.constraint_beta == ConstraintBeta::Raw ? "raw" : "clamped");
  if (cb == "raw") s.constraint_beta = ConstraintBeta::Raw;
  else if (cb == "clamped") s.constraint_beta = ConstraintBeta::Clamped;
  else bad("algorithm.constraint_beta", "expected raw or clamped");
  const std::string fd = get_string(j, "algorithm", "feasibility_domain",
                                    s.feasibility_domain == FeasibilityDomain::ConstraintBox ? "box" : "free");
  if (fd == "box") s.feasibility_domain = FeasibilityDomain::ConstraintBox;
  else if (fd == "free") s.feasibility_domain = FeasibilityDomain::Free;
  else bad("algorithm.feasibility_domain", "expected box or free");
  a.dgd_scale = get_real(j, "algorithm", "dgd_scale", a.dgd_scale);
  if (!(a.dgd_scale > 0.0)) bad("algorithm.dgd_scale", "must be positive");
  const std::string nt = get_string(j, "algorithm", "naive_target",
                                    a.naive_target == NaiveTarget::LocalMin ? "local_min" : "oracle");
  if (nt == "local_min") a.naive_target = NaiveTarget::LocalMin;
  else if (nt == "oracle") a.naive_target = NaiveTarget::OracleLocal;
  else bad("algorithm.naive_target", "expected local_min or oracle");

  if (!(s.gamma > 0.0)) bad("algorithm.gamma", "must be positive");
  if (!(s.gamma < s.gamma_bar)) bad("algorithm.gamma_bar", "must exceed gamma");
  if (!(s.gamma_bar < 2.0)) bad("algorithm.gamma_bar", "must be below 2");
  if (!(s.alpha0 > 0.0)) bad("algorithm.alpha0", "must be positive");
  if (!(s.c_schedule.scale > 0.0)) bad("algorithm.c_schedule.scale", "must be positive");
  if (!(s.eps_grad > 0.0)) bad("algorithm.eps_grad", "must be positive");
}

void parse_run(const json& j, RunConfig::Run& r) {
  reject_unknown(j, "run", {"iterations", "record_every", "threads", "residual_form"});
  r.iterations = static_cast<std::int64_t>(get_uint(j, "run", "iterations", static_cast<std::uint64_t>(r.iterations)));
  r.record_every =
      static_cast<std::int64_t>(get_uint(j, "run", "record_every", static_cast<std::uint64_t>(r.record_every)));
  r.threads = static_cast<unsigned>(get_uint(j, "run", "threads", r.threads));
  if (r.iterations < 1) bad("run.iterations", "must be at least 1");
  if (r.record_every < 1) bad("run.record_every", "must be at least 1");
  if (r.threads < 1) bad("run.threads", "must be at least 1");
  const std::string rf = get_string(j, "run", "residual_form", r.residual_form == ResidualForm::Sum ? "sum" : "average");
  if (rf == "sum") r.residual_form = ResidualForm::Sum;
  else if (rf == "average") r.residual_form = ResidualForm::Average;
  else bad("run.residual_form", "expected sum or average");
}

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

bool operator==(const RunConfig::Algorithm& a, const RunConfig::Algorithm& b) {
  const StepsizeConfig& x = a.stepsize;
  const StepsizeConfig& y = b.stepsize;
  return a.name == b.name && a.level_init == b.level_init && a.dgd_scale == b.dgd_scale &&
         a.naive_target == b.naive_target && x.gamma == y.gamma && x.gamma_bar == y.gamma_bar &&
         x.alpha0 == y.alpha0 && x.c_schedule.kind == y.c_schedule.kind && x.c_schedule.scale == y.c_schedule.scale &&
         x.eps_grad == y.eps_grad && x.constraint_beta == y.constraint_beta &&
         x.feasibility_domain == y.feasibility_domain && x.eta_cap == y.eta_cap;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.problem == b.problem && a.algorithm == b.algorithm && a.run == b.run && a.output == b.output;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Config, "config: syntax error at " + line_context(text, e.byte) + ": " + e.what());
  }
  RunConfig cfg;
  reject_unknown(doc, "", {"problem", "algorithm", "run", "output"});
  if (doc.contains("problem")) parse_problem(doc.at("problem"), cfg.problem);
  if (doc.contains("algorithm")) parse_algorithm(doc.at("algorithm"), cfg.algorithm);
  if (doc.contains("run")) parse_run(doc.at("run"), cfg.run);
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, "output", {"directory"});
    cfg.output.directory = get_string(o, "output", "directory", cfg.output.directory);
    if (cfg.output.directory.empty()) bad("output.directory", "must not be empty");
  }
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string config_to_json(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  const auto& a = cfg.algorithm;
  const auto& s = a.stepsize;
  json j;
  j["problem"] = {{"type", p.type},
                  {"path", p.path},
                  {"n_agents", p.n_agents},
                  {"dim", p.dim},
                  {"rows_per_agent", p.rows_per_agent},
                  {"seed", p.seed},
                  {"graph", std::string(to_string(p.graph))},
                  {"edge_prob", p.edge_prob},
                  {"x0", p.x0 == X0Policy::Center ? "center" : "random"}};
  json level = a.level_init.size() == 1 ? json(a.level_init[0]) : json(a.level_init);
  j["algorithm"] = {{"name", a.name},
                    {"gamma", s.gamma},
                    {"gamma_bar", s.gamma_bar},
                    {"alpha0", s.alpha0},
                    {"c_schedule",
                     {{"kind", s.c_schedule.kind == CSchedule::Kind::Sqrt ? "sqrt" : "constant"},
                      {"scale", s.c_schedule.scale}}},
                    {"level_init", level},
                    {"eta_cap", s.eta_cap ? json(*s.eta_cap) : json(nullptr)},
                    {"constraint_beta", s.constraint_beta == ConstraintBeta::Raw ? "raw" : "clamped"},
                    {"eps_grad", s.eps_grad},
                    {"feasibility_domain", s.feasibility_domain == FeasibilityDomain::ConstraintBox ? "box" : "free"},
                    {"dgd_scale", a.dgd_scale},
                    {"naive_target", a.naive_target == NaiveTarget::LocalMin ? "local_min" : "oracle"}};
  j["run"] = {{"iterations", cfg.run.iterations},
              {"record_every", cfg.run.record_every},
              {"threads", cfg.run.threads},
              {"residual_form", cfg.run.residual_form == ResidualForm::Sum ? "sum" : "average"}};
  j["output"] = {{"directory", cfg.output.directory}};
  return j.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canon = json::parse(config_to_json(cfg)).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AlgorithmSpec RunConfig::algorithm_spec() const {
  AlgorithmSpec spec;
  if (algorithm.name == "dpsla") {
    spec = AlgorithmSpec::dpsla(algorithm.stepsize);
    spec.level_init = algorithm.level_init;
  } else if (algorithm.name == "dgd") {
    spec = AlgorithmSpec::dgd(algorithm.dgd_scale);
  } else {
    spec = AlgorithmSpec::naive_polyak(algorithm.naive_target);
  }
  return spec;
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.iterations = run.iterations;
  o.record_every = run.record_every;
  o.seed = problem.seed;
  o.x0 = problem.x0;
  o.threads = run.threads;
  o.check_invariants = true;
  o.residual_form = run.residual_form;
  return o;
}

ProblemInstance build_instance(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  ProblemInstance inst = [&] {
    if (p.type == "triangle") return gen_triangle_demo();
    if (p.type == "file") return instance_from_json(read_text_file(p.path));
    Rng rng(p.seed);
    return gen_paper_instance(p.n_agents, p.dim, p.rows_per_agent, rng, GraphSpec{p.graph, p.edge_prob});
  }();
  const auto& lv = cfg.algorithm.level_init;
  if (cfg.algorithm.name == "dpsla" && lv.size() != 1 && lv.size() != inst.n_agents())
    bad("algorithm.level_init", "need one value or one per agent");
  return inst;
}

}  // namespace dpsla
