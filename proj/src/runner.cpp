#include "satmodel/runner.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "satmodel/criterion.hpp"
#include "satmodel/errors.hpp"
#include "satmodel/odometer.hpp"
#include "satmodel/raster.hpp"

namespace satmodel {

using json = nlohmann::ordered_json;

namespace {

json big(const BigReal& x) { return x.to_string(); }

json ext(const ExtReal& x) { return x.to_string(); }

// Real points get their value; other points their log-polar pair.
json point(const LogPolarComplex& z) {
  if (z.is_zero()) return "0";
  if (z.is_infinite()) return "inf";
  json j;
  j["log_r"] = ext(z.log_r());
  j["theta"] = big(z.theta());
  if (z.log_r().fits()) {
    const BigReal r = exp(z.log_r().to_big());
    if (z.theta().is_zero()) return big(r);
  }
  return j;
}

json margin_json(std::size_t n, const Margin& m) {
  json j{{"record", "margin"}, {"n", n}, {"sign", m.sign}, {"in_disk", m.in_disk}};
  j["log_ratio"] = m.log_ratio ? ext(*m.log_ratio) : json(nullptr);
  j["value"] = m.value ? big(*m.value) : json(nullptr);
  return j;
}

Candidate make_candidate(const JobConfig& c, Precision prec) {
  if (c.candidate_kind == "fixed") return Candidate::fixed(BigReal::from_string(c.candidate_x, prec));
  if (c.candidate_kind == "center") return Candidate::center_based(c.candidate_delta);
  return Candidate::theorem(c.alpha, c.beta);
}

void run_render(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  RenderOptions opts;
  opts.threads = c.threads;
  opts.backend = c.backend;
  const bool fast = c.backend == Backend::kFast || (c.backend == Backend::kAuto && fast_kernel_suitable(params, c.horizon));
  const DepthGrid grid = render_depth_grid(params, c.window, c.horizon, opts);
  const Palette palette = c.palette ? *c.palette : default_palette(c.horizon);
  const std::string image = "render.pgm";
  write_image_file((std::filesystem::path(c.out_dir) / image).string(), grid, palette);

  std::vector<std::uint64_t> moduli;
  for (std::size_t n = 0; n < c.horizon; ++n) {
    const Level& lv = params.level(n);
    moduli.push_back(lv.q.exact ? *lv.q.exact : UINT64_MAX);
  }
  const OdometerScale scale(moduli);
  for (std::size_t n = 0; n <= c.horizon; ++n) {
    json j{{"record", "components"}, {"level", n}, {"count", count_components(grid, n)}};
    j["expected"] = scale.cumulative(n) == UINT64_MAX ? json(nullptr) : json(scale.cumulative(n));
    report.write(j);
  }
  if (c.horizon >= 1) {
    try {
      const RealSlice s = critical_real_slice(grid, 1);
      report.write({{"record", "real_slice"},
                    {"level", 1},
                    {"found", s.found},
                    {"contiguous", s.contiguous},
                    {"left", s.left},
                    {"right", s.right},
                    {"pixel_width", s.pixel_width}});
    } catch (const ValidationError&) {
      // No y = 0 row in this window; the slice is simply not reported.
    }
  }
  report.write({{"record", "image"},
                {"path", image},
                {"format", "P5"},
                {"width", c.window.width},
                {"height", c.window.height},
                {"backend", fast ? "fast" : "exact"}});
}

void run_centers(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  const X0Estimate e = estimate_x0(params, c.horizon);
  for (std::size_t n = 0; n < e.centers.size(); ++n) {
    json j{{"record", "center"}, {"n", n}, {"s", big(e.centers[n])}};
    j["increment"] = n + 1 < e.centers.size() ? big(e.increments[n]) : json(nullptr);
    report.write(j);
  }
  report.write({{"record", "x0_estimate"},
                {"x0_lower", big(e.x0_lower)},
                {"gap", big(e.gap)},
                {"horizon", c.horizon},
                {"note", "model-level evidence at finite horizon"}});
}

void run_criterion(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  const CriterionReport r = check_class_membership(params, make_candidate(c, params.precision()), c.horizon);
  for (std::size_t n = 0; n < r.centers.size(); ++n) {
    report.write({{"record", "center"}, {"n", n}, {"s", big(r.centers[n])}});
  }
  for (std::size_t n = 0; n < r.margins.size(); ++n) report.write(margin_json(n, r.margins[n]));
  json v{{"record", "verdict"},
         {"verdict", r.verdict()},
         {"semi_decision", true},
         {"horizon", r.horizon},
         {"candidate", r.candidate_rule},
         {"candidate_x", big(r.candidate_x)},
         {"x0_lower", big(r.x0_lower)},
         {"gap", big(r.gap)},
         {"precision", static_cast<long>(r.precision)},
         {"tolerance", big(r.tolerance)}};
  v["fails_at"] = r.fails_at ? json(*r.fails_at) : json(nullptr);
  report.write(v);
}

void run_levin(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  const std::size_t last = c.levin_last.value_or(c.horizon > 0 ? c.horizon - 1 : 0);
  const LevinReport r = check_levin(params.rotations(), c.levin_first, last, c.levin_delta, params.precision());
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    report.write({{"record", "levin_value"}, {"n", r.first + k}, {"v", big(r.values[k])}});
  }
  report.write({{"record", "levin"},
                {"first", r.first},
                {"last", last},
                {"sup", big(r.sup)},
                {"delta", r.delta},
                {"satisfied", r.satisfied},
                {"degenerate", r.degenerate}});
}

json disk_preimage_check(const ModelParams& params, std::size_t samples) {
  const Precision prec = params.precision();
  const BigReal two_pi = BigReal::two_pi(prec);
  BigReal worst(prec);
  std::size_t levels = 0;
  for (std::size_t n = 0; n < params.size(); ++n) {
    const Level& lv = params.level(n);
    if (!lv.t) continue;
    ++levels;
    const Disk d = moebius_preimage_disk(*lv.t);
    for (std::size_t k = 0; k < samples; ++k) {
      const BigReal a = two_pi * BigReal::ratio(k, samples, prec);
      const Complex z{d.center + d.radius * cos(a), d.radius * sin(a)};
      const LogPolarComplex u = moebius_apply(*lv.t, to_log_polar(z));
      const BigReal dev = abs(u.log_r().to_big());
      if (dev > worst) worst = dev;
    }
  }
  const BigReal tol(1e-12, prec);
  return {{"record", "check"},
          {"name", "disk-preimage"},
          {"pass", worst <= tol},
          {"levels", levels},
          {"points_per_level", samples},
          {"max_log_deviation", big(worst)},
          {"tolerance", "1e-12"}};
}

json arg_check(const JobConfig& c, const ModelParams& params) {
  const ArgReport r = check_arg_inequality(params.C(), c.arg_q, c.samples, c.seed, params.precision());
  return {{"record", "check"},
          {"name", "arg-inequality"},
          {"pass", r.violations.empty()},
          {"q", c.arg_q},
          {"tested", r.tested},
          {"violations", r.violations.size()}};
}

json sector_check(const JobConfig& c, const ModelParams& params) {
  json per = json::array();
  bool pass = true;
  for (std::size_t n = 0; n <= c.horizon; ++n) {
    const SectorReport r = check_sector_bound(params, n, c.samples, c.seed + n);
    pass = pass && r.violations.empty();
    per.push_back({{"n", n}, {"bound", big(r.bound)}, {"verified", r.verified}, {"rejected", r.rejected},
                   {"violations", r.violations.size()}});
  }
  const bool exploratory = params.C() < BigReal::pi(params.precision());
  return {{"record", "check"}, {"name", "sector-bound"}, {"pass", pass}, {"exploratory", exploratory}, {"levels", per}};
}

json monotonicity_check(const JobConfig& c, const ModelParams& params) {
  const Precision prec = params.precision();
  const BigReal c_prime = c.c_prime ? BigReal::from_string(*c.c_prime, prec)
                                    : (BigReal(1.0, prec) + params.C()) / BigReal(2.0, prec);
  const X0Estimate e = estimate_x0(params, c.horizon);
  const BigReal x0 = e.x0_lower + BigReal(c.candidate_delta, prec) * e.gap;
  const MonotonicityReport r = verify_monotonicity(params, c_prime, x0, c.horizon);
  return {{"record", "check"},
          {"name", "monotonicity"},
          {"pass", r.all_pass()},
          {"c_prime", big(c_prime)},
          {"x0", big(x0)},
          {"verdict_at_c", r.at_c.verdict()},
          {"verdict_at_c_prime", r.at_c_prime.verdict()},
          {"transfer_ok", r.transfer_ok}};
}

json recursion_check(const JobConfig& c, const ModelParams& params) {
  const TheoremReport r = verify_theorem_recursion(params, c.alpha, c.beta, c.horizon);
  json per = json::array();
  for (const TheoremLevel& lv : r.levels) {
    per.push_back({{"n", lv.n}, {"x", point(lv.x)}, {"log_eta_t", ext(lv.log_eta_t)}, {"bound_ok", lv.bound_ok},
                   {"side_value", ext(lv.side_value)}, {"side_ok", lv.side_ok}, {"hypothesis_ok", lv.hypothesis_ok}});
  }
  json j{{"record", "check"}, {"name", "recursion"}, {"pass", r.all_pass()}, {"eta", big(r.eta)}, {"levels", per}};
  j["hypothesis_violated_at"] = r.hypothesis_violated_at ? json(*r.hypothesis_violated_at) : json(nullptr);
  return j;
}

void run_verify(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  // Each suite reports on its own line; a numerical failure in one suite is
  // recorded there and rethrown after the others ran.
  std::optional<NumericalError> failure;
  auto guarded = [&](const char* name, auto fn) {
    try {
      report.write(fn());
    } catch (const NumericalError& e) {
      report.write({{"record", "check"}, {"name", name}, {"pass", false}, {"error", e.what()}});
      if (!failure) failure = e;
    }
  };
  guarded("disk-preimage", [&] { return disk_preimage_check(params, 100); });
  guarded("arg-inequality", [&] { return arg_check(c, params); });
  guarded("sector-bound", [&] { return sector_check(c, params); });
  guarded("monotonicity", [&] { return monotonicity_check(c, params); });
  guarded("recursion", [&] { return recursion_check(c, params); });
  if (failure) throw *failure;
}

void run_address(const JobConfig& c, const ModelParams& params, ReportWriter& report) {
  const Precision prec = params.precision();
  const Complex z{BigReal::from_string(c.point_re, prec), BigReal::from_string(c.point_im, prec)};
  const LogPolarComplex lp = to_log_polar(z);
  const Address a = address_of(params, lp, c.horizon);
  json labels = json::array();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Level& lv = params.level(j);
    labels.push_back(lv.q.exact ? json(component_label(a[j], lv.p, *lv.q.exact)) : json(nullptr));
  }
  report.write({{"record", "address"},
                {"re", c.point_re},
                {"im", c.point_im},
                {"n", c.horizon},
                {"digits", a},
                {"labels", labels},
                {"depth", escape_depth(params, lp, c.horizon)}});
}

}  // namespace

void ReportWriter::write(const json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
}

json report_header(const JobConfig& config, const ModelParams& params) {
  return {{"record", "header"},
          {"schema", kReportSchema},
          {"version", kVersion},
          {"modules",
           {{"numerics", kVersion}, {"model-core", kVersion}, {"combinatorics", kVersion},
            {"criterion", kVersion}, {"raster", kVersion}, {"cli", kVersion}}},
          {"command", config.command},
          {"config", config.to_json()},
          {"precision", static_cast<long>(params.precision())},
          {"tolerance", big(params.tolerance())},
          {"levels", params.size()}};
}

void run_job(const JobConfig& config, const ModelParams& params, ReportWriter& report) {
  report.write(report_header(config, params));
  if (config.command == "render") run_render(config, params, report);
  else if (config.command == "centers") run_centers(config, params, report);
  else if (config.command == "criterion") run_criterion(config, params, report);
  else if (config.command == "levin") run_levin(config, params, report);
  else if (config.command == "verify") run_verify(config, params, report);
  else if (config.command == "address") run_address(config, params, report);
  else throw ValidationError("unknown command '" + config.command + "'");
}

RunResult run(JobConfig config) {
  RunResult result;
  std::optional<ModelParams> params;
  try {
    params.emplace(validate(config));
  } catch (const ValidationError& e) {
    result.status = kExitValidation;
    result.errors = e.messages().empty() ? std::vector<std::string>{e.what()} : e.messages();
    return result;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  const std::string name = config.command + ".jsonl";
  std::ofstream file(std::filesystem::path(config.out_dir) / name, std::ios::binary);
  if (!file) {
    result.status = kExitValidation;
    result.errors.push_back("cannot write to output directory '" + config.out_dir + "'");
    return result;
  }
  result.artifacts.push_back(name);
  if (config.command == "render") result.artifacts.push_back("render.pgm");

  ReportWriter report(file);
  try {
    run_job(config, *params, report);
  } catch (const ValidationError& e) {
    report.write({{"record", "error"}, {"kind", "validation"}, {"message", e.what()}});
    result.status = kExitValidation;
    result.errors.push_back(e.what());
  } catch (const NumericalError& e) {
    report.write({{"record", "error"}, {"kind", "numerical"}, {"message", e.what()}});
    result.status = kExitNumerical;
    result.errors.push_back(e.what());
  }
  return result;
}

}  // namespace satmodel
