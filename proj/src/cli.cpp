#include "ldp/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ldp/conditions.hpp"
#include "ldp/error.hpp"
#include "ldp/expression.hpp"
#include "ldp/ldp_harness.hpp"
#include "ldp/models.hpp"
#include "ldp/parallel.hpp"
#include "ldp/rate_solver.hpp"
#include "ldp/sde_sim.hpp"
#include "ldp/skeleton.hpp"

namespace ldp::cli {

namespace {

constexpr const char* kBeginResolved = "----- resolved configuration -----";
constexpr const char* kEndResolved = "----- end resolved configuration -----";

namespace fs = std::filesystem;
using config::Resolved;

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string joined(std::span<const double> v, const char* sep = " ") {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : sep) + num(x);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(';', start);
    std::string item = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? std::string() : item.substr(a, b - a + 1));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

/// Collects artifacts and summary lines for one run.
class Session {
 public:
  Session(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error(fmt::format("cannot write {}", (dir_ / name).string()));
    artifacts.push_back(name);
    return f;
  }

  template <class... Args>
  void say(fmt::format_string<Args...> f, Args&&... args) {
    lines.push_back(fmt::format(f, std::forward<Args>(args)...));
  }

  std::vector<std::string> artifacts;
  std::vector<std::string> lines;
  int status = kOk;

 private:
  fs::path dir_;
};

Vec x0_of(const Resolved& cfg) { return cfg.reals("experiment", "x0"); }

// -- check -------------------------------------------------------------------

void write_report(Session& s, const ConditionReport& report) {
  auto csv = s.open("condition_report.csv");
  csv << "condition_id,samples,violations,verdict\n";
  csv << to_string(report.id) << ',' << report.samples_checked << ',' << report.violations.size()
      << ',' << report.verdict() << '\n';
  if (!report.violations.empty()) {
    auto v = s.open("violations.csv");
    v << "t,x,y,lhs,rhs\n";
    for (const auto& e : report.violations)
      v << num(e.t) << ',' << joined(e.x) << ',' << joined(e.y) << ',' << num(e.lhs) << ','
        << num(e.rhs) << '\n';
  }
  s.say("condition {}: {} ({} samples, {} violations)", to_string(report.id), report.verdict(),
        report.samples_checked, report.violations.size());
  if (!std::isnan(report.witness)) s.say("integral witness: {}", num(report.witness));
  if (!report.violations.empty()) {
    const auto& e = report.violations.front();
    s.say("first violation: t = {}, x = ({}), lhs = {} > rhs = {}", num(e.t), joined(e.x, ", "),
          num(e.lhs), num(e.rhs));
  }
}

void run_check(Session& s, const Resolved& cfg, const CoefficientField& field) {
  const std::string& condition = cfg.text("experiment", "condition");
  const auto envelope = std::make_shared<expr::Expression>(
      expr::Expression::parse(cfg.text("experiment", "envelope"), {0, true, false}));
  const auto modulus = std::make_shared<expr::Expression>(
      expr::Expression::parse(cfg.text("experiment", "modulus"), {0, false, true}));
  auto mod_fn = [modulus](double u) { return (*modulus)(u); };
  const EnvelopeSpec env([envelope](double t) { return envelope->eval<double>(t, {}); },
                         EnvelopeSpec::kDefaultNodes, cfg.text("experiment", "envelope"));
  const double K = cfg.real("experiment", "K");
  const double R = cfg.real("experiment", "R");

  if (condition == "osgood") {
    const bool near = cfg.text("experiment", "modulus_kind") == "near-zero";
    const ModulusSpec spec = near ? ModulusSpec::near_zero(mod_fn, modulus->text())
                                  : ModulusSpec::at_infinity(mod_fn, cfg.real("experiment", "anchor"),
                                                             modulus->text());
    const double anchor = cfg.real("experiment", "anchor");
    auto cutoffs = geometric_cutoffs(anchor, cfg.real("experiment", "cutoff"),
                                     static_cast<int>(cfg.integer("experiment", "per_decade")));
    if (!cutoffs.empty() && cutoffs.front() == anchor) cutoffs.erase(cutoffs.begin());
    const OsgoodVerdict v = osgood_integral(spec, anchor, cutoffs, cfg.real("experiment", "threshold"));
    auto csv = s.open("osgood.csv");
    csv << "cutoff,integral\n";
    for (const auto& [c, value] : v.integral_values) csv << num(c) << ',' << num(value) << '\n';
    s.say("osgood integral of {}: {} (last value {}, threshold {})", modulus->text(),
          to_string(v.verdict), num(v.limit()), num(v.threshold));
    return;
  }

  SampleConfig sampler;
  sampler.count = static_cast<std::size_t>(cfg.integer("experiment", "samples"));
  sampler.seed = cfg.seed();
  sampler.radial = cfg.text("experiment", "radial") == "log" ? RadialLaw::LogUniform
                                                             : RadialLaw::UniformVolume;
  sampler.radius_min = cfg.real("experiment", "radius_min");
  sampler.radius_max = cfg.real("experiment", "radius_max");
  sampler.gap_min = cfg.real("experiment", "gap_min");
  sampler.gap_max = cfg.real("experiment", "gap_max");

  if (condition == "growth") {
    sampler.radius_min = std::max(sampler.radius_min, K);
    if (!(sampler.radius_max > sampler.radius_min))
      throw config::ValidationError("config", "experiment.radius_max", "radius_max must be > K");
    const ModulusSpec gamma = ModulusSpec::at_infinity(mod_fn, K, modulus->text());
    write_report(s, check_growth_condition(field, env, gamma, K, sampler));
  } else if (condition == "localized" || condition == "localized-weak") {
    const double c0 = cfg.real("experiment", "c0");
    sampler.radius_min = 0.0;
    sampler.radius_max = R;
    sampler.gap_max = std::min(sampler.gap_max, c0 * (1.0 - 1e-9));
    if (!(sampler.gap_max > sampler.gap_min))
      throw config::ValidationError("config", "experiment.gap_min", "gap_min must be < c0");
    const ModulusSpec eta = ModulusSpec::near_zero(mod_fn, modulus->text());
    write_report(s, check_localized_condition(field, env, eta, R, c0, sampler,
                                              condition == "localized-weak"));
  } else if (condition == "modulus-continuity") {
    const ModulusSpec H = ModulusSpec::near_zero(mod_fn, modulus->text());
    write_report(s, check_modulus_continuity(field, env, H, sampler));
  } else if (condition == "integrability") {
    write_report(s, check_integrability(field, R));
  } else {
    write_report(s, check_bounded_integrability(field, sampler));
  }
}

// -- skeleton ----------------------------------------------------------------

void run_skeleton(Session& s, const Resolved& cfg, const CoefficientField& field) {
  const int intervals = static_cast<int>(cfg.integer("experiment", "intervals"));
  const ControlPath l = cfg.text("experiment", "control") == "line"
                            ? ControlPath::straight_line(cfg.reals("experiment", "slope"), intervals)
                            : ControlPath::zero(field.noise_dim(), intervals);
  const Vec x0 = x0_of(cfg);
  const SamplePath path =
      integrate_skeleton(field, l, x0, static_cast<int>(cfg.integer("experiment", "substeps")));
  {
    auto csv = s.open("skeleton_path.csv");
    csv << "t";
    for (int i = 1; i <= field.dim(); ++i) csv << ",x" << i;
    csv << '\n';
    for (std::size_t k = 0; k < path.size(); ++k)
      csv << num(path.grid()[k]) << ',' << joined(path.state(k), ",") << '\n';
  }
  s.say("control energy e(l) = {}", num(energy(l)));
  s.say("F(l)(1) = ({})", joined(path.terminal(), ", "));
  auto csv = s.open("skeleton.csv");
  csv << "n,reference_steps,gap\n";
  const auto ref = static_cast<int>(cfg.integer("experiment", "reference_steps"));
  for (long long n : cfg.integers("experiment", "n")) {
    const double gap = skeleton_gap(field, l, x0, static_cast<int>(n), ref);
    csv << n << ',' << ref << ',' << num(gap) << '\n';
    s.say("n = {}: skeleton gap {}", n, num(gap));
  }
}

// -- simulate ----------------------------------------------------------------

void run_simulate(Session& s, const Resolved& cfg, const CoefficientField& field) {
  ExperimentConfig ec;
  ec.epsilon = cfg.real("experiment", "epsilon");
  ec.n = static_cast<int>(cfg.integer("experiment", "n"));
  ec.replicas = static_cast<int>(cfg.integer("experiment", "replicas"));
  ec.root_seed = cfg.seed();
  validate(ec);
  const Vec x0 = x0_of(cfg);
  const auto d = static_cast<std::size_t>(field.dim());
  const auto m = static_cast<std::size_t>(field.noise_dim());
  const auto M = static_cast<std::size_t>(ec.replicas);
  const auto n = static_cast<std::size_t>(ec.n);
  const auto keep = std::min<std::size_t>(M, static_cast<std::size_t>(cfg.integer("experiment", "paths")));

  std::vector<double> terminal(M * d);
  std::vector<double> kept(keep * (n + 1) * d);
  parallel_chunks(M, [&](unsigned, std::size_t begin, std::size_t end) {
    std::vector<double> noise(n * m), path((n + 1) * d);
    for (std::size_t r = begin; r < end; ++r) {
      fill_noise(ec.n, field.noise_dim(), ec.root_seed, r, noise);
      euler_maruyama_into(field, ec.epsilon, ec.n, noise, x0, path);
      std::copy(path.end() - static_cast<std::ptrdiff_t>(d), path.end(), terminal.begin() + static_cast<std::ptrdiff_t>(r * d));
      if (r < keep) std::copy(path.begin(), path.end(), kept.begin() + static_cast<std::ptrdiff_t>(r * (n + 1) * d));
    }
  });

  {
    auto csv = s.open("terminal.csv");
    csv << "replica";
    for (std::size_t i = 1; i <= d; ++i) csv << ",x" << i;
    csv << '\n';
    for (std::size_t r = 0; r < M; ++r)
      csv << r << ',' << joined({terminal.data() + r * d, d}, ",") << '\n';
  }
  if (keep > 0) {
    auto csv = s.open("paths.csv");
    csv << "replica,t";
    for (std::size_t i = 1; i <= d; ++i) csv << ",x" << i;
    csv << '\n';
    const auto grid = uniform_nodes(ec.n);
    for (std::size_t r = 0; r < keep; ++r)
      for (std::size_t k = 0; k <= n; ++k)
        csv << r << ',' << num(grid[k]) << ','
            << joined({kept.data() + (r * (n + 1) + k) * d, d}, ",") << '\n';
  }
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    for (std::size_t r = 0; r < M; ++r) mean += terminal[r * d + i];
    mean /= static_cast<double>(M);
    double var = 0.0;
    for (std::size_t r = 0; r < M; ++r) var += (terminal[r * d + i] - mean) * (terminal[r * d + i] - mean);
    var /= static_cast<double>(M > 1 ? M - 1 : 1);
    s.say("X{}(1): mean {}, variance {} over {} replicas", i + 1, num(mean), num(var), M);
  }
}

// -- rate --------------------------------------------------------------------

RateQuery rate_query(const Resolved& cfg, const CoefficientField& field) {
  RateQuery q(field, x0_of(cfg));
  q.N = static_cast<int>(cfg.integer("experiment", "N"));
  q.substeps = static_cast<int>(cfg.integer("experiment", "substeps"));
  q.residual_tolerance = cfg.real("experiment", "tolerance");
  q.optimizer.max_iterations = static_cast<int>(cfg.integer("experiment", "max_iterations"));
  q.optimizer.gradient_tolerance = cfg.real("experiment", "gradient_tolerance");
  q.penalties = cfg.reals("experiment", "penalties");
  q.starts = static_cast<int>(cfg.integer("experiment", "starts"));
  q.seed = cfg.seed();
  return q;
}

void run_rate(Session& s, const Resolved& cfg, const CoefficientField& field) {
  const RateQuery q = rate_query(cfg, field);
  const auto& targets = cfg.points("experiment", "targets");
  const auto entries = rate_lower_envelope(q, targets);
  auto csv = s.open("rate.csv");
  csv << "target,value,residual,grad_norm,converged,stages\n";
  bool all = true;
  for (const auto& e : entries) {
    const auto& r = e.result;
    csv << joined(e.target) << ',' << num(r.value) << ',' << num(r.residual) << ','
        << num(r.gradient_norm) << ',' << (r.converged ? "true" : "false") << ','
        << r.trace.size() << '\n';
    const std::string residual =
        r.residual < 1e-6 ? std::string("residual < 1e-6") : fmt::format("residual = {:.3g}", r.residual);
    s.say("target ({}): I ≈ {:.4f}, {}{}", joined(e.target, ", "), r.value, residual,
          r.converged ? "" : (r.infeasible ? " [not converged; infeasible trend]" : " [not converged]"));
    all = all && r.converged;
  }
  if (const auto probes = cfg.integer("experiment", "gradient_probes"); probes > 0) {
    RateQuery g = q;
    g.target = targets.front();
    s.say("gradient check: max relative discrepancy {:.3g} over {} probes",
          gradient_check(g, static_cast<int>(probes), 1.0, 1e-6, cfg.seed()), probes);
  }
  if (!all) {
    s.status = kNotConverged;
    s.say("optimization did not reach the residual tolerance {}", num(q.residual_tolerance));
  }
}

// -- ldp ---------------------------------------------------------------------

EventSpec event_of(const Resolved& cfg) {
  const auto& kind = cfg.text("experiment", "event");
  if (kind == "halfspace") return TerminalHalfspace{cfg.reals("experiment", "a"), cfg.real("experiment", "c")};
  if (kind == "ball") return TerminalOutsideBall{cfg.reals("experiment", "y0"), cfg.real("experiment", "r")};
  if (kind == "sup-exit") return SupExit{cfg.real("experiment", "R")};
  return CoupledGap{cfg.real("experiment", "delta0"), static_cast<int>(cfg.integer("experiment", "n_fine"))};
}

std::optional<double> rate_bound_of(Session& s, const Resolved& cfg, const CoefficientField& field) {
  const auto& text = cfg.text("experiment", "rate_bound");
  if (text == "none") return std::nullopt;
  if (text != "solve") return std::stod(text);
  const Vec x0 = x0_of(cfg);
  const double a = cfg.reals("experiment", "a")[0];
  const double c = cfg.real("experiment", "c");
  if (a == 0.0) throw ParameterError("rate_bound = solve needs a nonzero halfspace normal");
  RateQuery q(field, x0);
  const SamplePath flow = integrate_skeleton(field, ControlPath::zero(field.noise_dim(), q.N), x0, q.substeps);
  if (a * flow.terminal()[0] >= c) {
    s.say("rate bound: the zero-control endpoint lies in the event, -inf I = 0");
    return 0.0;
  }
  q.target = Vec{c / a};
  const RateResult r = minimize_terminal(q);
  s.say("rate bound: I({}) ≈ {} (residual {:.3g})", num(c / a), num(r.value), r.residual);
  if (!r.converged) s.status = kNotConverged;
  return -r.value;
}

void run_ldp(Session& s, const Resolved& cfg, const CoefficientField& field) {
  ExperimentConfig ec;
  ec.n = static_cast<int>(cfg.integer("experiment", "n"));
  ec.replicas = static_cast<int>(cfg.integer("experiment", "replicas"));
  ec.root_seed = cfg.seed();
  const EventSpec event = event_of(cfg);
  const auto bound = rate_bound_of(s, cfg, field);
  const LdpReport report =
      ldp_curve(field, x0_of(cfg), event, cfg.reals("experiment", "epsilons"), ec, bound);
  auto csv = s.open("ldp_curve.csv");
  csv << "epsilon,n,replicas,hits,p_hat,std_err,eps_log_p,rate_bound,reliable\n";
  s.say("event: {}", describe(event));
  for (const auto& e : report.entries) {
    csv << num(e.epsilon) << ',' << e.n << ',' << e.replicas << ',' << e.hits << ','
        << num(e.p_hat) << ',' << num(e.std_err) << ',' << num(e.eps_log_p) << ','
        << (bound ? num(*bound) : std::string()) << ',' << (e.reliable ? "true" : "false") << '\n';
    s.say("epsilon = {}: p_hat = {} ± {} ({} hits), epsilon log p = {}{}", num(e.epsilon),
          num(e.p_hat), num(e.std_err), e.hits, num(e.eps_log_p),
          e.zero_hits ? " [zero hits: rule-of-three bound]" : (e.reliable ? "" : " [unreliable]"));
  }
  for (const auto& w : report.warnings) s.say("warning: {}", w);
  s.say("note: finite-epsilon Monte Carlo; the epsilon -> 0 limit is not asserted");
}

// -- lemma1 / exit -----------------------------------------------------------

void run_lemma1(Session& s, const Resolved& cfg, const CoefficientField& field) {
  ExperimentConfig ec;
  ec.epsilon = cfg.real("experiment", "epsilon");
  ec.replicas = static_cast<int>(cfg.integer("experiment", "replicas"));
  ec.root_seed = cfg.seed();
  std::vector<int> ns;
  for (long long n : cfg.integers("experiment", "n")) ns.push_back(static_cast<int>(n));
  ec.n = ns.front();
  const auto rows = lemma1_experiment(field, ec, x0_of(cfg), ns,
                                      static_cast<int>(cfg.integer("experiment", "n_fine")),
                                      cfg.real("experiment", "delta0"));
  auto csv = s.open("lemma1.csv");
  csv << "n,n_fine,delta0,epsilon,replicas,hits,p_hat,std_err\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << r.n_fine << ',' << num(r.delta0) << ',' << num(r.epsilon) << ','
        << r.estimate.replicas << ',' << r.estimate.hits << ',' << num(r.estimate.p_hat) << ','
        << num(r.estimate.std_err) << '\n';
    s.say("n = {}: P(gap >= {}) ≈ {} ± {} ({} hits)", r.n, num(r.delta0), num(r.estimate.p_hat),
          num(r.estimate.std_err), r.estimate.hits);
  }
  s.say("note: common random numbers across n; only the ordering in n at fixed epsilon is "
        "meaningful, no rate in n or epsilon is implied");
}

void run_exit(Session& s, const Resolved& cfg, const CoefficientField& field) {
  ExperimentConfig ec;
  ec.epsilon = cfg.real("experiment", "epsilon");
  ec.n = static_cast<int>(cfg.integer("experiment", "n"));
  ec.replicas = static_cast<int>(cfg.integer("experiment", "replicas"));
  ec.root_seed = cfg.seed();
  const auto rows = exit_probability_experiment(field, ec, x0_of(cfg), cfg.reals("experiment", "radii"));
  auto csv = s.open("exit.csv");
  csv << "R,epsilon,n,replicas,hits,p_hat,std_err\n";
  for (const auto& r : rows) {
    csv << num(r.R) << ',' << num(ec.epsilon) << ',' << ec.n << ',' << r.estimate.replicas << ','
        << r.estimate.hits << ',' << num(r.estimate.p_hat) << ',' << num(r.estimate.std_err) << '\n';
    s.say("R = {}: P(sup |X| >= R) ≈ {} ± {} ({} hits)", num(r.R), num(r.estimate.p_hat),
          num(r.estimate.std_err), r.estimate.hits);
  }
}

std::string compose_summary(const Session& s, const Resolved& cfg, const std::string& label,
                            const std::string& source) {
  std::string out = "ldpkit run\n";
  out += fmt::format("config: {}\nmodel: {}\nexperiment: {}\nseed: {}\n\n", source, label,
                     cfg.text("experiment", "kind"), cfg.seed());
  for (const auto& l : s.lines) out += l + "\n";
  static const char* names[] = {"ok", "failure", "validation error", "numerical divergence",
                                "optimization not converged"};
  out += fmt::format("\nstatus: {} ({})\n", s.status, names[s.status]);
  if (!s.artifacts.empty()) {
    out += "artifacts:";
    for (const auto& a : s.artifacts) out += " " + a;
    out += "\n";
  }
  out += fmt::format("\n{}\n{}{}\n", kBeginResolved, cfg.to_text(), kEndResolved);
  return out;
}

}  // namespace

CoefficientField build_model(const Resolved& cfg) {
  const auto& name = cfg.text("model", "name");
  CoefficientField field = [&] {
    if (name == "custom") {
      const int d = static_cast<int>(cfg.integer("model", "d"));
      const int m = static_cast<int>(cfg.integer("model", "m"));
      return expr::make_expression_field("custom", d, m, split_list(cfg.text("model", "drift")),
                                         split_list(cfg.text("model", "diffusion")));
    }
    std::map<std::string, double> params;
    for (const char* k : {"d", "r", "a"}) {
      if (!cfg.has("model", k)) continue;
      const auto& v = cfg.get("model", k);
      params[k] = std::holds_alternative<long long>(v) ? static_cast<double>(std::get<long long>(v))
                                                       : std::get<double>(v);
    }
    return models::make(name, params);
  }();
  const double R = cfg.real("model", "truncate");
  if (R > 0.0) return truncate(field, R).field;
  return field;
}

RunOutcome run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  Resolved cfg;
  const std::string source = options.config_text ? std::string("<embedded>") : options.config_path;
  try {
    config::RawConfig raw = options.config_text ? config::parse_text(*options.config_text, source)
                                                : config::parse_file(options.config_path);
    for (const auto& o : options.overrides) config::apply_override(raw, o);
    if (options.seed) raw.sections[""]["seed"] = {std::to_string(*options.seed), "--seed"};
    cfg = config::resolve(raw);
  } catch (const Error& e) {
    outcome.status = kValidation;
    outcome.summary = fmt::format("validation error: {}\n", e.what());
    err << outcome.summary;
    return outcome;
  }

  const fs::path dir(options.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  Session s(dir);
  std::string label = cfg.text("model", "name");
  try {
    const CoefficientField field = build_model(cfg);
    label = field.label();
    if (cfg.real("model", "truncate") > 0.0)
      s.say("model truncated at R = {}", num(cfg.real("model", "truncate")));
    const auto& kind = cfg.text("experiment", "kind");
    if (kind == "check") run_check(s, cfg, field);
    else if (kind == "skeleton") run_skeleton(s, cfg, field);
    else if (kind == "simulate") run_simulate(s, cfg, field);
    else if (kind == "rate") run_rate(s, cfg, field);
    else if (kind == "ldp") run_ldp(s, cfg, field);
    else if (kind == "lemma1") run_lemma1(s, cfg, field);
    else run_exit(s, cfg, field);
  } catch (const DivergenceError& e) {
    s.status = kDivergence;
    s.say("numerical divergence: {}", e.what());
  } catch (const ParameterError& e) {
    s.status = kValidation;
    s.say("validation error: {}", e.what());
  } catch (const std::exception& e) {
    s.status = kFailure;
    s.say("error: {}", e.what());
  }

  try {
    {
      std::ofstream f(dir / "resolved.cfg", std::ios::binary);
      f << cfg.to_text();
    }
    s.artifacts.push_back("resolved.cfg");
    s.artifacts.push_back("summary.txt");
    outcome.summary = compose_summary(s, cfg, label, source);
    std::ofstream f(dir / "summary.txt", std::ios::binary);
    f << outcome.summary;
    if (!f) throw Error(fmt::format("cannot write {}", (dir / "summary.txt").string()));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    outcome.status = kFailure;
    return outcome;
  }
  outcome.status = s.status;
  outcome.artifacts = s.artifacts;
  if (!options.quiet) out << outcome.summary;
  else if (outcome.status != kOk) err << fmt::format("status {}: see {}\n", outcome.status, (dir / "summary.txt").string());
  return outcome;
}

std::string extract_resolved_config(const std::string& summary) {
  const auto begin = summary.find(kBeginResolved);
  const auto end = summary.find(kEndResolved);
  if (begin == std::string::npos || end == std::string::npos || end < begin)
    throw ParameterError("summary has no resolved configuration block");
  const auto start = begin + std::string(kBeginResolved).size() + 1;
  return summary.substr(start, end - start);
}

void list_models(std::ostream& out) {
  for (const auto& m : models::catalog()) {
    std::string params;
    for (const auto& p : m.params) params += (params.empty() ? "" : ", ") + p;
    out << fmt::format("{}{}\n  dimensions: {}\n  coefficients: {}\n  conditions: {}\n\n", m.name,
                       params.empty() ? "" : "(" + params + ")", m.dims, m.description, m.conditions);
  }
  out << "custom\n  dimensions: d, m from [model]\n  coefficients: drift and diffusion "
         "expressions in t, x1..xd, separated by ';' (diffusion row-major d x m)\n"
         "  conditions: audit with kind = check\n";
}

}  // namespace ldp::cli
