#include "opfrob/cli.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "opfrob/frobalg.hpp"
#include "opfrob/hydroflow.hpp"
#include "opfrob/integ.hpp"
#include "opfrob/opfields.hpp"
#include "opfrob/report.hpp"
#include "opfrob/symalg.hpp"
#include "opfrob/system_file.hpp"

namespace opfrob {

namespace {

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  double tol = 1e-9;
  std::optional<double> guard;
  bool json = false;
  bool serial = false;
  bool timing = false;
};

struct Context {
  const SystemFile& file;
  SamplingSpec sampling;
  IntegOptions options;
  PointSet points;
};

Context make_context(const SystemFile& file, const GlobalFlags& g) {
  Context ctx{file, file.sampling, {}, {}};
  if (g.seed) ctx.sampling.seed = *g.seed;
  if (g.samples) ctx.sampling.count = *g.samples;
  if (g.guard) ctx.sampling.guard = *g.guard;
  ctx.options.tol = g.tol;
  ctx.options.seed = ctx.sampling.seed;
  ctx.options.exec = g.serial ? Execution::serial : Execution::parallel;
  ctx.points = sample_points(file.dimension, ctx.sampling, file.domain());
  return ctx;
}

void require(bool ok, const char* what) {
  if (!ok) throw InputError(what);
}

std::string prefixed(const std::string& prefix, const std::string& name) { return prefix + ": " + name; }

void merge_prefixed(Report& into, const Report& from, const std::string& prefix) {
  for (auto c : from.checks()) {
    c.name = prefixed(prefix, c.name);
    into.add(std::move(c));
  }
  for (const auto& n : from.notes()) into.note(prefixed(prefix, n));
  for (auto it = from.data().begin(); it != from.data().end(); ++it) into.data()[prefixed(prefix, it.key())] = it.value();
}

Report cmd_verify_algebra(const Context& c) {
  require(!c.file.basis.empty(), "verify-algebra needs \"basis\"");
  return verify_algebra(c.file.operator_basis(c.file.basis), c.file.covector, c.points, c.options);
}

Report cmd_dualize(const Context& c) {
  require(!c.file.basis.empty(), "dualize needs \"basis\"");
  require(c.file.covector.has_value(), "dualize needs \"covector\"");
  return dualize_family(c.file.operator_basis(c.file.basis), *c.file.covector, c.points, c.options).report;
}

Report cmd_symcheck(const Context& c) {
  require(!c.file.basis.empty(), "symcheck needs \"basis\"");
  require(!c.file.candidates.empty() || !c.file.polynomials.empty(),
          "symcheck needs \"candidates\" or \"polynomials\"");
  const auto basis = c.file.operator_basis(c.file.basis);
  Report report("symcheck");
  std::vector<std::pair<std::string, OperatorField>> members;
  for (const auto& name : c.file.candidates) members.emplace_back(name, c.file.field(name));
  if (!c.file.polynomials.empty()) {
    require(basis.is_constant(), "polynomial symmetries need a constant basis");
    std::vector<Matrix<double>> ms;
    const std::vector<double> origin(c.file.dimension, 0.0);
    for (const auto& f : basis.fields()) ms.push_back(f(origin));
    const auto flat = FlatBasis::create(ms, c.file.flat_vector, c.options.tol);
    for (const auto& p : c.file.polynomials) members.emplace_back(p.name, analytic_symmetry(flat, p.f));
  }
  for (const auto& [name, field] : members) merge_prefixed(report, sym_membership(basis, field, c.points, c.options), name);
  if (c.file.one_form) {
    for (const auto& [name, field] : members)
      merge_prefixed(report, conservation_law_check(field, *c.file.one_form, c.points, c.options), name);
  }
  return report;
}

Report cmd_nijenhuis(const Context& c) {
  std::vector<std::string> names = c.file.candidates.empty() ? c.file.basis : c.file.candidates;
  require(!names.empty(), "nijenhuis needs \"basis\" or \"candidates\"");
  Report report("nijenhuis");
  for (const auto& name : names)
    report.add(nijenhuis_check(c.file.field(name), c.points, c.options, prefixed(name, "torsion")));
  if (names.size() > 1)
    report.add(pairwise_check(c.file.field_list(names), BracketNorm::full, c.points, c.options,
                              "pairwise strong symmetry"));
  return report;
}

IntegrableSystem build_system(const Context& c) {
  const auto& names = c.file.generating_names();
  require(!names.empty(), "generate needs \"basis\" or \"system_basis\"");
  require(c.file.one_form.has_value(), "generate needs \"one_form\"");
  return generate_system(c.file.operator_basis(names), *c.file.one_form, c.file.chart, c.points, c.options);
}

Report cmd_generate(const Context& c) { return build_system(c).report; }

Report cmd_killing(const Context& c) {
  const auto sys = build_system(c);
  Report report("killing");
  for (const auto& chk : sys.report.checks())
    if (!chk.passed()) report.add(chk);
  report.merge(killing_tensors(sys, c.points, c.options));
  return report;
}

Report cmd_hj(const Context& c, const std::vector<std::vector<double>>& levels) {
  require(!levels.empty(), "hj needs level values (--c or \"levels\")");
  const auto sys = build_system(c);
  Report report("hj");
  for (const auto& chk : sys.report.checks())
    if (!chk.passed()) report.add(chk);
  report.merge(hj_check(sys, levels, c.points, c.options));
  return report;
}

Report cmd_poisson(const Context& c) {
  require(!c.file.hamiltonians.empty(), "poisson-check needs \"hamiltonians\"");
  return verify_commuting_family(c.file.hamiltonians, c.points, c.options);
}

Report cmd_inverse(const Context& c) {
  require(!c.file.hamiltonians.empty(), "inverse needs \"hamiltonians\"");
  require(c.file.covector.has_value(), "inverse needs \"covector\"");
  return inverse_verify(c.file.hamiltonians, *c.file.covector, c.points, c.options).report;
}

Report cmd_flow(const Context& c) {
  require(!c.file.flows.empty(), "flow needs \"flows\"");
  require(c.file.initial_curve.has_value(), "flow needs \"initial_curve\"");
  FlowOptions fo;
  fo.order = c.file.order;
  const auto sol = taylor_flow(c.file.field_list(c.file.flows), *c.file.initial_curve, fo);
  Report report("flow");
  const double tol = c.file.flow_tolerance;
  auto scalar = [&](std::string name, double r) {
    CheckResult chk;
    chk.name = std::move(name);
    chk.max_residual = r;
    chk.tolerance = tol;
    chk.samples = 1;
    chk.status = r <= tol ? Status::pass : Status::fail;
    report.add(std::move(chk));
  };
  const auto& names = c.file.flows;
  for (std::size_t j = 0; j < names.size(); ++j) scalar("evolution " + names[j], evolution_residual(sol, j));
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      scalar("compatibility " + names[i] + "," + names[j], flow_compatibility_residual(sol, i, j));
  report.note("truncation order " + std::to_string(sol.order));
  if (!sol.generic_initial_curve) report.note("warning: initial curve is not generic at x0");
  return report;
}

Report run_command(const std::string& cmd, const Context& c, const std::vector<std::vector<double>>& levels) {
  if (cmd == "verify-algebra") return cmd_verify_algebra(c);
  if (cmd == "dualize") return cmd_dualize(c);
  if (cmd == "symcheck") return cmd_symcheck(c);
  if (cmd == "nijenhuis") return cmd_nijenhuis(c);
  if (cmd == "generate") return cmd_generate(c);
  if (cmd == "killing") return cmd_killing(c);
  if (cmd == "hj") return cmd_hj(c, levels);
  if (cmd == "poisson-check") return cmd_poisson(c);
  if (cmd == "inverse") return cmd_inverse(c);
  if (cmd == "flow") return cmd_flow(c);
  throw InputError("unknown command " + cmd);
}

std::vector<double> parse_level(const std::string& text, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto e = Expression::parse(item, n);
    if (!e.is_constant()) throw InputError("--c values must be constants");
    const std::vector<double> z(n, 0.0);
    out.push_back(e.eval(std::span<const double>(z)));
  }
  if (out.size() != n) throw InputError("--c needs n comma-separated values");
  return out;
}

int emit(const Report& report, const SamplingSpec& sampling, const GlobalFlags& g, double seconds,
         std::ostream& out) {
  if (g.json) {
    auto j = report.to_json(sampling);
    if (g.timing) j["wall_time_s"] = seconds;
    out << j.dump(2) << "\n";
  } else {
    out << report.to_text(sampling);
    if (g.timing) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "time: %.3f s\n", seconds);
      out << buf;
    }
  }
  return report.passed() ? kExitPass : kExitFail;
}

int execute(const SystemFile& file, const std::vector<std::string>& commands, const std::string& label,
            const GlobalFlags& g, const std::vector<std::string>& c_values, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Context ctx = make_context(file, g);
  std::vector<std::vector<double>> levels = file.levels;
  if (!c_values.empty()) {
    levels.clear();
    for (const auto& v : c_values) levels.push_back(parse_level(v, file.dimension));
  }
  Report report(label);
  if (commands.size() == 1) {
    report.merge(run_command(commands[0], ctx, levels));
  } else {
    for (const auto& cmd : commands) merge_prefixed(report, run_command(cmd, ctx, levels), cmd);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return emit(report, ctx.sampling, g, seconds, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator Frobenius algebras and commuting quadratic Hamiltonians", "opfrob"};
  app.require_subcommand(1);
  GlobalFlags g;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double guard = 0.0;
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed (default 42)");
  auto* samples_opt = app.add_option("--samples", samples, "number of sample points (default 50)")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  auto* guard_opt = app.add_option("--guard", guard, "denominator floor (default 1e-3)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", g.json, "emit the report as JSON");
  app.add_flag("--serial", g.serial, "evaluate sample points serially");
  app.add_flag("--timing", g.timing, "append wall time to the report");
  app.fallthrough();

  std::string file_path;
  std::vector<std::string> c_values;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"verify-algebra", "check (A1), (A2), commutativity, closure and associativity of a basis"},
      {"dualize", "dual family for a covector, with symmetry checks"},
      {"symcheck", "membership of candidate fields in the symmetry algebra"},
      {"nijenhuis", "torsion and pairwise strong symmetry of fields"},
      {"generate", "commuting quadratic Hamiltonians from a basis and a conservation law"},
      {"killing", "Killing tensors of the generated system"},
      {"hj", "Hamilton-Jacobi differential at sample points"},
      {"poisson-check", "pairwise Poisson brackets of given Hamiltonians"},
      {"inverse", "hypotheses of the inverse problem and reconstruction"},
      {"flow", "compatibility of hydrodynamic flows on Taylor jets"},
  };
  std::vector<CLI::App*> file_subs;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("file", file_path, "system file (JSON)")->required();
    if (std::string(s.name) == "hj") sub->add_option("--c", c_values, "level values c1,...,cn (repeatable)");
    file_subs.push_back(sub);
  }
  std::string builtin_name;
  std::string variant;
  bool dump = false;
  auto* builtin = app.add_subcommand("builtin", "run an embedded fixture");
  builtin->add_option("name", builtin_name, "fixture name")->required();
  builtin->add_option("--variant", variant, "fixture variant");
  builtin->add_flag("--dump", dump, "print the fixture instead of running it");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (seed_opt->count()) g.seed = seed;
  if (samples_opt->count()) g.samples = samples;
  if (guard_opt->count()) g.guard = guard;

  try {
    for (auto* sub : file_subs) {
      if (!sub->parsed()) continue;
      const auto file = SystemFile::load(file_path);
      return execute(file, {sub->get_name()}, sub->get_name(), g, c_values, out);
    }
    std::string name = builtin_name;
    if (!variant.empty()) name += "_" + variant;
    const std::string* text = builtin_text(name);
    if (!text) text = builtin_text(name + "_constant");
    if (!text) {
      std::string known;
      for (const auto& n : builtin_names()) known += " " + n;
      throw InputError("unknown builtin " + name + "; available:" + known);
    }
    if (dump) {
      out << *text;
      return kExitPass;
    }
    const auto file = SystemFile::from_text(*text);
    if (file.commands.empty()) throw InputError("fixture lists no commands");
    return execute(file, file.commands, "builtin " + name, g, {}, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace opfrob
