#ifndef ALMAB_CLI_HPP
#define ALMAB_CLI_HPP

#include "almab/frames.hpp"
#include "almab/group.hpp"
#include "almab/hermitian.hpp"
#include "almab/io.hpp"
#include "almab/measures.hpp"
#include "almab/multiplicity.hpp"
#include "almab/quotient.hpp"
#include "almab/selftest.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace almab::cli
{

inline constexpr const char * kVersion = "0.1.0";

enum ExitCode : int
{
  ok = 0,
  usage_error = 1,
  consistency_failure = 2
};

namespace detail
{

using nlohmann::json;

struct Options
{
  std::string spec;
  std::string metric;
  std::string a;
  std::string b;
  std::string x;
  std::string point;
  std::string generators;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string side = "left";
  int points = 50;
};

struct InputError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string & path, const char * flag)
{
  if (path.empty()) throw InputError(std::string("missing required flag ") + flag);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline json read_json(const std::string & path, const char * flag)
{
  const std::string text = read_file(path, flag);
  try {
    return io::parse_document(text);
  } catch (const ParseError & e) {
    throw InputError(path + ": " + e.what());
  }
}

template <typename F>
auto in_file(const std::string & path, F && f) -> decltype(f())
{
  try {
    return f();
  } catch (const ParseError & e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument & e) {
    throw InputError(path + ": " + e.what());
  }
}

inline Side parse_side(const std::string & s)
{
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw InputError("--side must be left or right");
}

inline GroupPtr load_group(const Options & o)
{
  const std::string text = read_file(o.spec, "--spec");
  return in_file(o.spec, [&] { return GroupDescriptor::make(parse_spec(text)); });
}

inline GroupElement load_element(const std::string & path, const char * flag, const GroupPtr & G)
{
  const json doc = read_json(path, flag);
  return in_file(path, [&] { return io::element_from_json(doc, G); });
}

inline HermitianForm load_metric(const Options & o, const GroupPtr & G)
{
  const Side side = parse_side(o.side);
  if (o.metric.empty()) return HermitianForm::identity(G->dim(), side);
  const json doc = read_json(o.metric, "--metric");
  HermitianForm h = in_file(o.metric, [&] { return io::metric_from_json(doc, side); });
  if (h.dim() != G->dim()) {
    throw InputError(o.metric + ": metric is " + std::to_string(h.dim()) + "x" + std::to_string(h.dim()) +
                     ", group dimension is " + std::to_string(G->dim()));
  }
  return h;
}

inline std::vector<GroupElement> load_generators(const Options & o, const GroupPtr & G)
{
  const json doc = read_json(o.generators, "--generators");
  return in_file(o.generators, [&] {
    const json & list = doc.is_object() ? ::almab::detail::require_field(doc, "generators", "") : doc;
    if (!list.is_array()) throw ParseError("generators", "expected an array of elements");
    std::vector<GroupElement> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
      out.push_back(io::element_from_json(list[k], G, "generators[" + std::to_string(k) + "]"));
    }
    return out;
  });
}

inline json spec_echo(const GroupPtr & G) { return json::parse(serialize_spec(G->aleph())); }

struct Report
{
  json inputs = json::object();
  json outputs = json::object();
  int code = ExitCode::ok;
};

inline Report cmd_info(const Options & o)
{
  const GroupPtr G = load_group(o);
  Report r;
  r.inputs["spec"] = spec_echo(G);
  r.outputs = {{"dim_v", G->d()},
               {"dim_group", G->dim()},
               {"jordan_layout", io::jordan_layout_to_json(G->jordan())},
               {"jordan", io::to_json(G->J())},
               {"is_abelian", G->abelian()},
               {"center", io::center_to_json(center(*G, o.tol))}};
  return r;
}

inline Report cmd_exp(const Options & o)
{
  const GroupPtr G = load_group(o);
  const json doc = read_json(o.x, "--x");
  const AlgebraElement x = in_file(o.x, [&] { return io::algebra_from_json(doc, G->d()); });
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"x", io::algebra_to_json(x)}};
  r.outputs["element"] = io::element_to_json(exp_full(G, x));
  try {
    r.outputs["restricted"] = io::element_to_json(exp_restricted(G, x, o.tol));
  } catch (const std::domain_error &) {
    r.outputs["restricted"] = nullptr;
  }
  return r;
}

inline Report cmd_mul(const Options & o)
{
  const GroupPtr G = load_group(o);
  const GroupElement a = load_element(o.a, "--a", G);
  const GroupElement b = load_element(o.b, "--b", G);
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"a", io::element_to_json(a)}, {"b", io::element_to_json(b)}};
  r.outputs["product"] = io::element_to_json(multiply(a, b));
  return r;
}

inline Report cmd_inv(const Options & o)
{
  const GroupPtr G = load_group(o);
  const GroupElement a = load_element(o.a, "--a", G);
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"a", io::element_to_json(a)}};
  r.outputs["inverse"] = io::element_to_json(inverse(a));
  return r;
}

inline Report cmd_center(const Options & o)
{
  const GroupPtr G = load_group(o);
  Report r;
  r.inputs["spec"] = spec_echo(G);
  r.outputs["center"] = io::center_to_json(center(*G, o.tol));
  if (!o.a.empty()) {
    const GroupElement a = load_element(o.a, "--a", G);
    r.inputs["a"] = io::element_to_json(a);
    r.outputs["a_is_central"] = is_central(a, o.tol);
  }
  return r;
}

inline Report cmd_haar(const Options & o)
{
  const GroupPtr G = load_group(o);
  const GroupElement a = load_element(o.a, "--a", G);
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"a", io::element_to_json(a)}};
  r.outputs = {{"modular", modular(a)}, {"left_density", left_density(a)}, {"right_density", right_density(a)}};
  return r;
}

inline Report cmd_frame(const Options & o)
{
  const GroupPtr G = load_group(o);
  const GroupElement p = load_element(o.point, "--point", G);
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"point", io::element_to_json(p)}};
  for (FrameKind kind :
       {FrameKind::left_frame, FrameKind::right_frame, FrameKind::left_coframe, FrameKind::right_coframe}) {
    r.outputs[to_string(kind)] = io::to_json(frame_at(kind, p));
  }
  return r;
}

inline Report cmd_kahler(const Options & o)
{
  const GroupPtr G = load_group(o);
  const HermitianForm h = load_metric(o, G);
  Report r;
  r.inputs = {{"spec", spec_echo(G)}, {"metric", io::metric_to_json(h)}};
  const KahlerVerdict v = kahler_verdict(*G, h, o.tol);
  r.outputs = io::verdict_to_json(v);
  if (!v.method_agreement) r.code = ExitCode::consistency_failure;
  return r;
}

inline Report cmd_quotient(const Options & o)
{
  const GroupPtr G = load_group(o);
  const HermitianForm h = load_metric(o, G);
  const std::vector<GroupElement> gens = load_generators(o, G);
  Report r;
  json gens_echo = json::array();
  for (const auto & g : gens) gens_echo.push_back(io::element_to_json(g));
  r.inputs = {{"spec", spec_echo(G)}, {"metric", io::metric_to_json(h)}, {"generators", gens_echo}};
  r.outputs["discreteness_verified"] = DiscreteSubgroup::discreteness_verified;

  std::optional<DiscreteSubgroup> gamma;
  try {
    gamma.emplace(verify_central(G, gens, o.tol));
  } catch (const NonCentralGenerator & e) {
    r.outputs["central"] = false;
    r.outputs["failure"] = {{"generator", e.index()},
                            {"kernel_residual", e.residuals().kernel},
                            {"torus_residual", e.residuals().torus}};
    r.outputs["kahler"] = nullptr;
    return r;
  } catch (const std::invalid_argument & e) {
    r.outputs["central"] = false;
    r.outputs["failure"] = {{"message", e.what()}};
    r.outputs["kahler"] = nullptr;
    return r;
  }
  r.outputs["central"] = true;

  ElementSampler sample(o.seed);
  std::vector<GroupElement> pts;
  for (int k = 0; k < o.points; ++k) pts.push_back(sample.element(G));
  r.outputs["right_gamma_residual"] = check_right_gamma_invariance(h, *gamma, pts);

  const KahlerVerdict v = kahler_verdict(*G, pullback_metric(h, *gamma), o.tol);
  r.outputs["kahler"] = io::verdict_to_json(v);
  if (!v.method_agreement) r.code = ExitCode::consistency_failure;
  return r;
}

inline Report cmd_selftest(const Options & o)
{
  Report r;
  r.inputs["seed"] = o.seed;
  json checks = json::array();
  bool all = true;
  for (const auto & res : run_selftest(o.seed)) {
    checks.push_back({{"name", res.name}, {"passed", res.passed}, {"worst", res.worst}, {"threshold", res.threshold}});
    all = all && res.passed;
  }
  r.outputs = {{"checks", checks}, {"all_passed", all}};
  if (!all) r.code = ExitCode::consistency_failure;
  return r;
}

} // namespace detail

/// Runs one CLI invocation. args excludes the program name. A single JSON
/// report goes to `out`; diagnostics go to `err`.
inline int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  using detail::Options;
  using detail::Report;
  Options o;
  CLI::App app{"Invariant structures on complex almost Abelian Lie groups", "almab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Command
  {
    const char * name;
    const char * help;
    Report (*fn)(const Options &);
  };
  const std::vector<Command> commands = {
      {"info", "dimensions, Jordan layout, Abelian flag and center", detail::cmd_info},
      {"exp", "exponential of an algebra element (--x)", detail::cmd_exp},
      {"mul", "group product of --a and --b", detail::cmd_mul},
      {"inv", "inverse of --a", detail::cmd_inv},
      {"center", "center description (optionally test --a)", detail::cmd_center},
      {"haar", "Haar densities and modular function at --a", detail::cmd_haar},
      {"frame", "invariant frames and coframes at --point", detail::cmd_frame},
      {"kahler-check", "Kahler verdict for an invariant metric", detail::cmd_kahler},
      {"quotient-check", "centrality of --generators and the quotient verdict", detail::cmd_quotient},
      {"selftest", "run the property battery", detail::cmd_selftest},
  };

  std::vector<std::pair<CLI::App *, const Command *>> subs;
  for (const auto & c : commands) {
    CLI::App * sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--spec", o.spec, "group spec JSON");
    sub->add_option("--metric", o.metric, "metric JSON (default identity)");
    sub->add_option("--a", o.a, "group element JSON");
    sub->add_option("--b", o.b, "group element JSON");
    sub->add_option("--x", o.x, "algebra element JSON");
    sub->add_option("--point", o.point, "group element JSON");
    sub->add_option("--generators", o.generators, "JSON array of group elements");
    sub->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--side", o.side, "left|right")->check(CLI::IsMember({"left", "right"}));
    sub->add_option("--points", o.points, "sample points for invariance residuals")->check(CLI::PositiveNumber);
    subs.emplace_back(sub, &c);
  }

  std::vector<const char *> argv{"almab"};
  for (const auto & a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError & e) {
    std::ostringstream msg;
    const int code = app.exit(e, out, msg);
    err << msg.str();
    return code == 0 ? ExitCode::ok : ExitCode::usage_error;
  }

  for (const auto & [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      Report r = cmd->fn(o);
      nlohmann::json report = {{"command", cmd->name},
                               {"inputs", r.inputs},
                               {"outputs", r.outputs},
                               {"tolerances", {{"tol", o.tol}, {"seed", o.seed}, {"side", o.side}}},
                               {"version", kVersion}};
      out << report.dump(2) << "\n";
      if (r.code == ExitCode::consistency_failure) err << "internal consistency check failed\n";
      return r.code;
    } catch (const detail::InputError & e) {
      err << "error: " << e.what() << "\n";
      return ExitCode::usage_error;
    } catch (const ConsistencyError & e) {
      err << "consistency failure: " << e.what() << "\n";
      return ExitCode::consistency_failure;
    } catch (const std::exception & e) {
      err << "error: " << e.what() << "\n";
      return ExitCode::usage_error;
    }
  }
  return ExitCode::usage_error;
}

} // namespace almab::cli

#endif
