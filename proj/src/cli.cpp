#include "mtsc/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mtsc/casebook.hpp"
#include "mtsc/erasure.hpp"
#include "mtsc/gaussian.hpp"
#include "mtsc/json_io.hpp"
#include "mtsc/optimizer.hpp"
#include "mtsc/regions.hpp"
#include "mtsc/repro.hpp"

namespace mtsc {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string format = "json";
  bool bits = false;
  std::string path;

  NumberStyle style() const { return {bits, 9}; }
  bool csv() const { return format == "csv"; }
};

// A model with an optional system and X, from the casebook or from files.
struct Source {
  std::string case_name;
  std::string model_path, gamma_path, x_path;
  ErasureParams erasure;

  bool has_case() const { return !case_name.empty(); }

  void add_options(CLI::App& cmd) {
    cmd.add_option("--case", case_name,
                   "Built-in instance: toy, toy_bt_gamma, appendix_c, erasure");
    cmd.add_option("--model", model_path, "Source model JSON");
    cmd.add_option("--gamma", gamma_path, "Auxiliary system JSON");
    cmd.add_option("--x", x_path, "X channel JSON");
    cmd.add_option("--p", erasure.p, "Erasure probability for --case erasure");
    cmd.add_option("--L", erasure.encoders, "Encoder count for --case erasure");
    cmd.add_option("--D", erasure.distortion, "Target erasure rate for --case erasure");
    cmd.add_option("--lambda", erasure.lambda, "Error penalty of the erasure distortion");
  }

  SourceModel model() const {
    if (has_case()) return instance().model;
    if (model_path.empty()) throw UsageError("need --case or --model");
    return source_model_from_json(read_json_file(model_path));
  }

  std::optional<AuxSystem> gamma() const {
    if (!gamma_path.empty()) return aux_system_from_json(read_json_file(gamma_path));
    if (has_case()) return instance().gamma;
    return std::nullopt;
  }

  std::optional<XChannel> x() const {
    if (!x_path.empty()) return x_channel_from_json(read_json_file(x_path));
    if (has_case() && model_path.empty()) return instance().x;
    return std::nullopt;
  }

  Instance instance() const {
    if (!model_path.empty()) throw UsageError("--case and --model are exclusive");
    const CaseName name = parse_case_name(case_name);
    if (name == CaseName::kErasure) erasure.validate();
    return casebook(name, erasure);
  }
};

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
  } else {
    write_text_file(o.path, text);
  }
}

void emit_json(const Output& o, const Json& j, std::ostream& out) {
  emit(o, j.dump(2) + "\n", out);
}

// Key/value CSV for scalar results.
std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string s = "key,value\n";
  for (const auto& [k, v] : rows) s += k + "," + v + "\n";
  return s;
}

std::string rate_key(const Output& o, const std::string& base) {
  return base + (o.bits ? "_bits" : "_nats");
}

int cmd_info(const Source& src, const std::string& dump_model, const std::string& dump_gamma,
             const std::string& dump_x, const Output& o, std::ostream& out) {
  if (!src.has_case() && src.model_path.empty()) {
    Json cases = Json::array({"toy", "toy_bt_gamma", "appendix_c", "erasure"});
    emit_json(o, {{"cases", cases}}, out);
    return kExitOk;
  }
  const SourceModel model = src.model();
  const auto gamma = src.gamma();
  const auto x = src.x();
  if (!dump_model.empty()) write_text_file(dump_model, to_json(model).dump(2) + "\n");
  if (!dump_gamma.empty()) {
    if (!gamma) throw UsageError("--dump-gamma needs a system");
    write_text_file(dump_gamma, to_json(*gamma).dump(2) + "\n");
  }
  if (!dump_x.empty()) {
    if (!x) throw UsageError("--dump-x needs an X channel");
    write_text_file(dump_x, to_json(x->kernel).dump(2) + "\n");
  }

  const NumberStyle style = o.style();
  Json vars = Json::array();
  for (const auto& v : model.joint().variables()) vars.push_back({{"name", v.name}, {"size", v.size}});
  Json j{{"L", model.encoders()}, {"K", model.distortion_count()}, {"variables", vars}};
  std::vector<std::pair<std::string, std::string>> rows{
      {"L", std::to_string(model.encoders())}, {"K", std::to_string(model.distortion_count())}};
  if (gamma) {
    validate_aux_system(model, *gamma);
    const JointPmf full = build_full_joint(model, x, *gamma);
    Json classes = Json::object();
    const std::pair<const char*, GammaClass> names[] = {
        {"outer", GammaClass::kOuter},
        {"bt_inner", GammaClass::kBergerTungInner},
        {"bt_outer", GammaClass::kBergerTungOuter}};
    for (const auto& [name, cls] : names) {
      const MarkovReport report = check_gamma_class(model, x, full, cls);
      classes[name] = {{"pass", report.pass()}, {"max_residual", style.rate(report.max_residual())}};
      rows.emplace_back(std::string(name) + "_pass", report.pass() ? "true" : "false");
    }
    j["gamma_classes"] = classes;
    Json d = Json::array();
    for (std::size_t k = 0; k < model.distortion_count(); ++k) {
      const double e = expected_distortion(model, full, k);
      d.push_back(style.plain(e));
      rows.emplace_back("E[d" + std::to_string(k + 1) + "]", style.format_plain(e));
    }
    j["expected_distortions"] = d;
  }
  if (x) j["x_in_chi"] = check_chi(model, *x).pass();
  if (o.csv()) {
    emit(o, kv_csv(rows), out);
  } else {
    emit_json(o, j, out);
  }
  return kExitOk;
}

int cmd_bounds(const Source& src, const std::string& kind, const Output& o, std::ostream& out) {
  const SourceModel model = src.model();
  const auto gamma = src.gamma();
  if (!gamma) throw UsageError("bounds needs --gamma or --case");
  validate_aux_system(model, *gamma);
  RegionConstraints c;
  if (kind == "bt-inner") {
    c = bt_inner_constraints(model, *gamma, Validation::kStrict);
  } else if (kind == "bt-outer") {
    c = bt_outer_constraints(model, *gamma, Validation::kStrict);
  } else {
    const auto x = src.x();
    if (!x) throw UsageError("new-outer needs --x");
    validate_x_channel(model, *x);
    c = new_outer_constraints(model, *x, *gamma, Validation::kStrict);
  }
  if (o.csv()) {
    emit(o, to_csv(c, o.style()), out);
  } else {
    Json j = to_json(c, o.style());
    j["kind"] = kind;
    emit_json(o, j, out);
  }
  return kExitOk;
}

int cmd_erasure(const ErasureParams& params, std::optional<std::size_t> curve, const Output& o,
                std::ostream& out) {
  const NumberStyle style = o.style();
  if (curve) {
    if (*curve < 2) throw UsageError("--curve needs at least 2 points");
    const auto points = erasure_curve(params.p, {params.encoders}, *curve);
    if (o.csv()) {
      emit(o, to_csv(points, style), out);
      return kExitOk;
    }
    Json arr = Json::array();
    for (const auto& pt : points) {
      arr.push_back({{"D", style.plain(pt.distortion)}, {rate_key(o, "sum_rate"), style.rate(pt.sum_rate)}});
    }
    emit_json(o, {{"p", params.p}, {"L", params.encoders}, {"curve", arr}}, out);
    return kExitOk;
  }
  params.validate();
  const double rate = erasure_sum_rate(params);
  if (o.csv()) {
    emit(o, to_csv(std::vector<CurvePoint>{{params.distortion, params.encoders, rate}}, style), out);
  } else {
    emit_json(o,
              {{"p", params.p},
               {"L", params.encoders},
               {"D", params.distortion},
               {rate_key(o, "sum_rate"), style.rate(rate)}},
              out);
  }
  return kExitOk;
}

int cmd_gaussian(const GaussianParams& params, double distortion, const std::vector<double>& witness,
                 const std::vector<double>& rates, const Output& o, std::ostream& out) {
  params.validate();
  const NumberStyle style = o.style();
  if (witness.empty()) {
    if (!rates.empty()) throw UsageError("--rates needs --witness");
    const GaussianSumRate best = gaussian_min_sum_rate(params, distortion);
    if (o.csv()) {
      std::vector<std::pair<std::string, std::string>> rows{
          {rate_key(o, "sum_rate"), style.format_rate(best.sum_rate)}};
      for (std::size_t l = 0; l < best.r.size(); ++l) {
        rows.emplace_back("r" + std::to_string(l + 1), style.format_rate(best.r[l]));
      }
      emit(o, kv_csv(rows), out);
    } else {
      Json r = Json::array();
      for (double v : best.r) r.push_back(style.rate(v));
      emit_json(o, {{"D", distortion}, {rate_key(o, "sum_rate"), style.rate(best.sum_rate)}, {"r", r}},
                out);
    }
    return kExitOk;
  }
  const auto bounds = gaussian_subset_bounds(params, distortion, witness);
  const std::size_t L = params.encoders();
  std::optional<bool> contains;
  if (!rates.empty()) contains = gaussian_region_contains(params, {rates, {distortion}}, witness);
  if (o.csv()) {
    std::string s = "subset,bound\n";
    for (SubsetMask a = 0; a < bounds.size(); ++a) {
      s += subset_label(a, L) + "," + style.format_rate(bounds[a]) + "\n";
    }
    if (contains) s += std::string("contains,") + (*contains ? "true" : "false") + "\n";
    emit(o, s, out);
  } else {
    Json list = Json::array();
    for (SubsetMask a = 0; a < bounds.size(); ++a) {
      list.push_back({{"A", subset_label(a, L)}, {rate_key(o, "bound"), style.rate(bounds[a])}});
    }
    Json j{{"D", distortion}, {"constraints", list}};
    if (contains) j["contains"] = *contains;
    emit_json(o, j, out);
  }
  return kExitOk;
}

int cmd_repro(const std::string& target, const std::string& curve_out, const Output& o,
              std::ostream& out) {
  const ReproReport report = run_repro(target);
  const NumberStyle style = o.style();
  if (!curve_out.empty()) {
    if (report.curve.empty()) throw UsageError("--curve-out applies to erasure-figure only");
    write_text_file(curve_out, to_csv(report.curve, style));
  }
  auto value = [&](const ReproCheck& c) {
    return c.is_rate ? style.format_rate(c.computed) : style.format_plain(c.computed);
  };
  if (o.csv()) {
    std::string s = "check,expected,computed,status\n";
    for (const auto& c : report.checks) {
      s += "\"" + c.name + "\",\"" + c.expected + "\"," + value(c) + "," + (c.pass ? "PASS" : "FAIL") +
           "\n";
    }
    emit(o, s, out);
  } else if (o.format == "text") {
    std::ostringstream s;
    for (const auto& c : report.checks) {
      s << (c.pass ? "PASS  " : "FAIL  ") << c.name << " = " << value(c) << "  (" << c.expected
        << ")\n";
    }
    s << report.target << ": " << (report.pass() ? "PASS" : "FAIL") << "\n";
    emit(o, s.str(), out);
  } else {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"name", c.name},
                        {"expected", c.expected},
                        {"computed", c.is_rate ? style.rate(c.computed) : style.plain(c.computed)},
                        {"status", c.pass ? "PASS" : "FAIL"}});
    }
    emit_json(o,
              {{"target", report.target},
               {"unit", o.bits ? "bits" : "nats"},
               {"checks", checks},
               {"status", report.pass() ? "PASS" : "FAIL"}},
              out);
  }
  return report.pass() ? kExitOk : kExitFail;
}

int cmd_optimize(const Source& src, std::vector<double> caps, const OptimizerOptions& options,
                 const std::string& gamma_out, const Output& o, std::ostream& out, std::ostream& err) {
  const SourceModel model = src.model();
  if (caps.empty() && src.has_case() && parse_case_name(src.case_name) == CaseName::kErasure) {
    caps = {src.erasure.distortion};
  }
  if (caps.size() != model.distortion_count()) {
    throw UsageError("--caps needs one value per distortion measure");
  }
  const OptimizerResult result = optimize_bt_inner_sum_rate(model, caps, options);
  if (!result.feasible) {
    err << "optimize: no system met the distortion caps after " << result.evaluations
        << " evaluations\n";
    return kExitFail;
  }
  if (!gamma_out.empty()) write_text_file(gamma_out, to_json(*result.gamma).dump(2) + "\n");
  const NumberStyle style = o.style();
  if (o.csv()) {
    emit(o, to_csv(*result.constraints, style), out);
  } else {
    Json j{{rate_key(o, "sum_rate"), style.rate(result.best_sum_rate)},
           {"evaluations", result.evaluations},
           {"best_restart", result.best_restart},
           {"seed", options.seed},
           {"region", to_json(*result.constraints, style)}};
    emit_json(o, j, out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-distortion bounds for multiterminal source coding", "mtsc"};
  app.require_subcommand(1);
  app.fallthrough();
  Output o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_flag("--bits", o.bits, "Report rates in bits instead of nats");
  app.add_option("--out", o.path, "Write output to a file instead of stdout");

  Source src;
  std::string dump_model, dump_gamma, dump_x;
  auto* info = app.add_subcommand("info", "Describe a model and check its system");
  src.add_options(*info);
  info->add_option("--dump-model", dump_model, "Write the model JSON");
  info->add_option("--dump-gamma", dump_gamma, "Write the system JSON");
  info->add_option("--dump-x", dump_x, "Write the X channel JSON");

  std::string kind;
  auto* bounds = app.add_subcommand("bounds", "Subset rate bounds of one system");
  bounds->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"bt-inner", "bt-outer", "new-outer"}));

  ErasureParams erasure;
  std::optional<std::size_t> curve;
  auto* ec = app.add_subcommand("erasure-ceo", "Binary erasure CEO sum rate");
  ec->add_option("--p", erasure.p)->required();
  ec->add_option("--L", erasure.encoders)->required();
  auto* d_opt = ec->add_option("--D", erasure.distortion);
  auto* curve_opt = ec->add_option("--curve", curve, "Number of curve points over [p^L, 1]");
  d_opt->excludes(curve_opt);

  GaussianParams gauss;
  double gauss_d = 0.0;
  std::vector<double> witness, rates;
  auto* gc = app.add_subcommand("gaussian-ceo", "Quadratic Gaussian CEO sum rate or region");
  gc->add_option("--sigma2", gauss.sigma2)->required();
  gc->add_option("--noise", gauss.noise_vars)->required()->delimiter(',');
  gc->add_option("--D", gauss_d)->required();
  gc->add_option("--witness", witness, "Test-channel parameters r_l")->delimiter(',');
  gc->add_option("--rates", rates, "Rate point to test for membership")->delimiter(',');

  std::string target, curve_out;
  auto* repro = app.add_subcommand("repro", "Recompute published numbers and check them");
  repro->add_option("target", target)
      ->required()
      ->check(CLI::IsMember({"toy", "appendix-c", "appendix-e", "erasure-figure"}));
  repro->add_option("--curve-out", curve_out, "Write the erasure curves as CSV");

  OptimizerOptions opt;
  std::vector<double> caps;
  std::string gamma_out;
  auto* optimize = app.add_subcommand("optimize", "Search for a small Berger-Tung sum rate");
  optimize->add_option("--caps", caps, "Distortion caps, one per measure")->delimiter(',');
  optimize->add_option("--budget", opt.budget)->capture_default_str();
  optimize->add_option("--seed", opt.seed)->capture_default_str();
  optimize->add_option("--restarts", opt.restarts)->capture_default_str();
  optimize->add_option("--card", opt.cardinalities, "Encoder output alphabet sizes")
      ->delimiter(',');
  optimize->add_option("--gamma-out", gamma_out, "Write the best system JSON");

  // bounds and optimize share the model options with info
  src.add_options(*bounds);
  src.add_options(*optimize);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*info) return cmd_info(src, dump_model, dump_gamma, dump_x, o, out);
    if (*bounds) return cmd_bounds(src, kind, o, out);
    if (*ec) {
      if (!*d_opt && !*curve_opt) throw UsageError("erasure-ceo needs --D or --curve");
      return cmd_erasure(erasure, curve, o, out);
    }
    if (*gc) return cmd_gaussian(gauss, gauss_d, witness, rates, o, out);
    if (*repro) return cmd_repro(target, curve_out, o, out);
    if (*optimize) return cmd_optimize(src, caps, opt, gamma_out, o, out, err);
  } catch (const MarkovError& e) {
    err << "mtsc: " << e.what() << "\n";
    return kExitFail;
  } catch (const NotSupermodularError& e) {
    err << "mtsc: " << e.what() << "\n";
    return kExitFail;
  } catch (const FormatError& e) {
    err << "mtsc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mtsc: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mtsc
