// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N]... [--expect-fail N]...
//
// Exit status is 0 when the failing criteria are exactly the expected ones.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "satmodel/criterion.hpp"
#include "satmodel/errors.hpp"
#include "satmodel/odometer.hpp"
#include "satmodel/raster.hpp"
#include "satmodel/runner.hpp"

using namespace satmodel;
namespace fs = std::filesystem;

namespace {

using Fractions = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GeneratorRule rule(GeneratorRule::Kind kind, std::uint64_t q0) {
  GeneratorRule r;
  r.kind = kind;
  r.q0 = q0;
  return r;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

BigReal uniform(std::mt19937_64& rng, double lo, double hi, Precision p) {
  return BigReal(std::uniform_real_distribution<double>(lo, hi)(rng), p);
}

// 1. |M_t(z)| = 1 on the boundary of the preimage disk.
Outcome disk_preimage() {
  const Precision p = 128;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  const BigReal two_pi = BigReal::two_pi(p);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BigReal t = uniform(rng, 0.01, 0.99, p);
    const Disk d = moebius_preimage_disk(t);
    for (int k = 0; k < 100; ++k) {
      const BigReal a = two_pi * BigReal::ratio(k, 100, p);
      const Complex z{d.center + d.radius * cos(a), d.radius * sin(a)};
      const LogPolarComplex w = moebius_apply(t, to_log_polar(z));
      worst = std::max(worst, std::abs(std::expm1(w.log_r().to_double())));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 10.0, "max ||M_t(z)| - 1| = " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 2. Component counts 1/3/6 for (1/3, 1/2).
Outcome component_counts() {
  const auto t0 = Clock::now();
  // The third fraction only completes level 2; counts depend on q_0, q_1.
  const ModelParams params(BigReal(1.5, 128), RotationSequence(Fractions{{1, 3}, {1, 2}, {1, 3}}), 3, 128);
  const DepthGrid g = render_depth_grid(params, Window{-0.2, 1.05, -0.65, 0.65, 2048, 2048}, 2);
  const std::uint64_t c0 = count_components(g, 0), c1 = count_components(g, 1), c2 = count_components(g, 2);
  const double secs = seconds_since(t0);
  return {c0 == 1 && c1 == 3 && c2 == 6 && secs < 120.0,
          "counts " + std::to_string(c0) + "/" + std::to_string(c1) + "/" + std::to_string(c2) + ", " + fmt(secs) +
              " s"};
}

// 3. s_1 against t_0 / (1 - (1 - t_0) t_1^{1/q_0}).
Outcome center_solver() {
  const Precision p = 256;
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::uint64_t> qd(2, 200);
  const BigReal one(1.0, p);
  const BigReal tol = BigReal::pow2(-100, p);
  int tested = 0, bad = 0;
  while (tested < 100) {
    const std::uint64_t q0 = qd(rng), q1 = qd(rng);
    const std::uint64_t p0 = 1 + rng() % (q0 - 1), p1 = 1 + rng() % (q1 - 1);
    if (std::gcd(p0, q0) != 1 || std::gcd(p1, q1) != 1) continue;
    const double C = std::uniform_real_distribution<double>(1.01, 8.0)(rng);
    if (C * p0 >= q0 || C * p1 >= q1) continue;
    const ModelParams params(BigReal(C, p), RotationSequence(Fractions{{p0, q0}, {p1, q1}}), 2, p);
    const BigReal t0 = t_value(params, 0), t1 = t_value(params, 1);
    const BigReal oracle = t0 / (one - (one - t0) * exp(log(t1) / BigReal::from_uint(q0, p)));
    bad += abs(solve_centers(params, 1)[1] - oracle) > tol;
    ++tested;
  }
  return {bad == 0, std::to_string(tested) + " parameter sets, " + std::to_string(bad) + " beyond 2^-100"};
}

// 4. [s_8, 1] survives; just below s_8 something escapes.
Outcome monotone_escape() {
  const Precision p = 256;
  const ModelParams params(BigReal(2.0, p), RotationSequence(rule(GeneratorRule::Kind::kTower, 3)), 10, p);
  const std::size_t N = 8;
  const BigReal s8 = solve_centers(params, N)[N];
  const BigReal one(1.0, p);
  std::mt19937_64 rng(404);
  std::size_t escaped_above = 0, escaped_below = 0;
  for (int k = 0; k < 1000; ++k) {
    const BigReal x = s8 + uniform(rng, 0.0, 1.0, p) * (one - s8);
    escaped_above += escape_depth(params, real_point(x), N) < N;
  }
  const BigReal width = BigReal(1e-2, p) * (one - s8);
  for (int k = 0; k < 1000; ++k) {
    const BigReal x = s8 - uniform(rng, 0.0, 1.0, p) * width;
    if (x >= s8) continue;
    escaped_below += orbit(params, real_point(x), N + 1).depth.has_value();
  }
  return {escaped_above == 0 && escaped_below > 0, std::to_string(escaped_above) + " of 1000 escape in [s_8, 1], " +
                                                       std::to_string(escaped_below) + " of 1000 escape below s_8"};
}

// 5. |arg z| <= (pi/2)(1/2)^n on K_{n,0} at C = 2 pi.
Outcome sector_bound() {
  const Precision p = 256;
  GeneratorRule geo = rule(GeneratorRule::Kind::kGeometric, 8);
  geo.ratio = 2;
  const ModelParams params(BigReal::two_pi(p), RotationSequence(geo), 7, p);
  const BigReal tol = BigReal::pow2(-64, p);
  std::size_t violations = 0, verified = 0;
  for (std::size_t n = 0; n <= 6; ++n) {
    std::size_t have = 0;
    for (std::uint64_t seed = 500 + n * 100; have < 10000; ++seed) {
      const SectorReport r = check_sector_bound(params, n, 10000 - have, seed, &tol);
      have += r.verified;
      violations += r.violations.size();
    }
    verified += have;
  }
  return {violations == 0, std::to_string(verified) + " verified samples, " + std::to_string(violations) + " violations"};
}

// 6. Argument inequalities.
Outcome arg_inequalities() {
  const Precision p = 256;
  const std::pair<BigReal, std::uint64_t> cases[] = {
      {BigReal(4.0, p), 16}, {BigReal::pi(p), 100}, {BigReal(8.0, p), 1000}};
  std::size_t tested = 0, violations = 0;
  std::uint64_t seed = 600;
  for (const auto& [C, q] : cases) {
    const ArgReport r = check_arg_inequality(C, q, 10000, ++seed, p);
    tested += r.tested;
    violations += r.violations.size();
  }
  return {tested == 30000 && violations == 0,
          std::to_string(tested) + " samples, " + std::to_string(violations) + " violations"};
}

// 7. x'_n >= x_n and the verdict transfers from C to C' <= C.
Outcome monotonicity() {
  const Precision p = 256;
  // q_0 = 3 would give t_0 = 4/3 at C = 4, so the tower starts at q_0 = 8.
  const ModelParams params(BigReal(4.0, p), RotationSequence(rule(GeneratorRule::Kind::kTower, 8)), 9, p);
  const X0Estimate e = estimate_x0(params, 8);
  const BigReal x0 = e.x0_lower + BigReal(0.5, p) * e.gap;
  const MonotonicityReport r = verify_monotonicity(params, BigReal(2.0, p), x0, 8);
  std::size_t ok = 0;
  for (const auto& l : r.levels) ok += l.ok;
  return {r.all_pass() && r.transfer_ok, std::to_string(ok) + "/" + std::to_string(r.levels.size()) +
                                             " levels ordered, C verdict " + r.at_c.verdict() + ", C' verdict " +
                                             r.at_c_prime.verdict()};
}

// 8. x_n >= eta t_n and the side condition for n <= 15.
Outcome theorem_recursion() {
  const Precision p = 512;
  const ModelParams params(BigReal(2.0, p), RotationSequence(rule(GeneratorRule::Kind::kTower, 3)), 16, p);
  const TheoremReport r = verify_theorem_recursion(params, 0.5, 1.5, 15);
  std::size_t bound = 0, side = 0;
  for (const auto& l : r.levels) {
    bound += l.bound_ok;
    side += l.side_ok;
  }
  const bool pass = r.levels.size() == 16 && bound == 16 && side == 16 && r.eta == BigReal(4.0, p);
  return {pass, "eta = " + r.eta.to_string(6) + ", bound " + std::to_string(bound) + "/16, side " +
                    std::to_string(side) + "/16"};
}

// 9. Levin values.
Outcome levin_values() {
  const Precision p = 256;
  const LevinReport t = check_levin(RotationSequence(rule(GeneratorRule::Kind::kTower, 3)), 0, 12, 1e-3, p);
  bool tower_ok = !t.values.empty();
  for (const BigReal& v : t.values) tower_ok = tower_ok && abs(v - BigReal(0.5, p)) <= BigReal::pow2(-64, p);
  GeneratorRule lin = rule(GeneratorRule::Kind::kAffine, 2);
  lin.a = 1;
  lin.b = 1;
  const BigReal v50 = check_levin(RotationSequence(lin), 50, 50, 1e-3, p).values.at(0);
  const LevinReport window = check_levin(RotationSequence(lin), 0, 10000, 1e-3, p);
  return {tower_ok && v50 > BigReal(0.9, p) && !window.satisfied,
          "tower " + std::to_string(t.values.size()) + " values at 1/2, linear v_50 = " + v50.to_string(6) +
              ", sup over [0, 10^4] = " + window.sup.to_string(6) + (window.satisfied ? " satisfied" : " not satisfied")};
}

// 10. Structure for (1/28, 1/39670): 28 components, critical slice ending at 1.
Outcome twenty_eight_components() {
  const auto t0 = Clock::now();
  const ModelParams params(BigReal(3.2, 128), RotationSequence(Fractions{{1, 28}, {1, 39670}}), 2, 128);
  const DepthGrid g = render_depth_grid(params, Window{0.04, 1.02, -0.49, 0.49, 4097, 4097}, 1);
  const std::uint64_t c1 = count_components(g, 1);
  const RealSlice s = critical_real_slice(g, 1);
  const double secs = seconds_since(t0);
  const bool pass = c1 == 28 && s.found && s.contiguous && std::abs(s.right - 1.0) <= s.pixel_width && secs < 600.0;
  return {pass, std::to_string(c1) + " level-1 components, slice [" + fmt(s.left, 6) + ", " + fmt(s.right, 6) + "]" +
                    (s.contiguous ? " contiguous" : " broken") + ", " + fmt(secs) + " s"};
}

// 11. Odometer cycles over every scale with prod q_k <= 10^5, and label bijections for q <= 1000.
Outcome combinatorics(double budget_seconds) {
  const auto t0 = Clock::now();
  constexpr std::uint64_t kLimit = 100000;

  std::size_t pairs = 0, bad_labels = 0;
  for (std::uint64_t q = 2; q <= 1000; ++q) {
    std::vector<char> hit(q);
    for (std::uint64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      ++pairs;
      std::fill(hit.begin(), hit.end(), 0);
      for (std::uint64_t m = 0; m < q; ++m) {
        const std::uint64_t k = component_label(m, p, q);
        if (k >= q || hit[k] || (k * p) % q != m) {
          ++bad_labels;
          break;
        }
        hit[k] = 1;
      }
    }
  }

  // Every ordered scale, depth first; each one walks its full cycle.
  std::uint64_t total = 0, checked = 0, bad_cycles = 0, steps = 0;
  bool out_of_time = false;
  std::vector<std::uint64_t> moduli;
  std::function<void(std::uint64_t)> visit = [&](std::uint64_t prod) {
    for (std::uint64_t q = 2; prod * q <= kLimit; ++q) {
      moduli.push_back(q);
      ++total;
      if (!out_of_time) {
        const OdometerScale s(moduli);
        const std::uint64_t N = prod * q;
        const Address zero(moduli.size(), 0);
        Address a = sigma_succ(zero, s);
        std::uint64_t len = 1;
        while (a != zero && len <= N) {
          a = sigma_succ(a, s);
          ++len;
        }
        steps += len;
        bad_cycles += len != N;
        ++checked;
        if ((checked & 1023) == 0 && seconds_since(t0) > budget_seconds) out_of_time = true;
      }
      visit(prod * q);
      moduli.pop_back();
    }
  };
  visit(1);

  const bool pass = bad_labels == 0 && bad_cycles == 0 && checked == total;
  std::string detail = std::to_string(pairs) + " label pairs (" + std::to_string(bad_labels) + " bad), " +
                       std::to_string(checked) + " of " + std::to_string(total) + " scales cycled (" +
                       std::to_string(bad_cycles) + " bad, " + std::to_string(steps) + " steps)";
  if (checked < total) detail += "; exhaustive enumeration exceeds the " + fmt(budget_seconds) + " s budget";
  return {pass, detail};
}

// 12. Byte-identical reports; s_10 stable under precision doubling.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "satmodel_acceptance";
  fs::remove_all(dir);
  JobConfig c = parse_config(R"({"command": "criterion",
      "params": {"C": 2, "generator": {"kind": "tower", "q0": 3}}, "precision": 256, "horizon": 8,
      "criterion": {"candidate": {"kind": "center", "delta": 0.5}}})");
  c.out_dir = dir.string();
  JobConfig r = parse_config(R"({"command": "render", "params": {"C": 1.5, "fractions": ["1/3", "1/2", "1/3"]},
      "horizon": 2, "precision": 128,
      "render": {"window": {"x_min": -0.2, "x_max": 1.05, "y_min": -0.65, "y_max": 0.65, "width": 300, "height": 300}}})");
  r.out_dir = dir.string();
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const char* files[] = {"criterion.jsonl", "render.jsonl", "render.pgm"};
  std::vector<std::string> first;
  bool identical = run(c).status == kExitOk && run(r).status == kExitOk;
  for (const char* f : files) first.push_back(slurp(dir / f));
  identical = identical && run(c).status == kExitOk && run(r).status == kExitOk;
  for (std::size_t k = 0; k < 3; ++k) identical = identical && !first[k].empty() && slurp(dir / files[k]) == first[k];

  const ModelParams lo(BigReal(2.0, 256), RotationSequence(rule(GeneratorRule::Kind::kTower, 3)), 11, 256);
  const BigReal a = solve_centers(lo, 10)[10].with_precision(512);
  const BigReal b = solve_centers(lo.with_precision(512), 10)[10];
  const BigReal rel = abs(a - b) / b;
  const bool stable = rel < BigReal::pow2(-100, 512);
  return {identical && stable, std::string(identical ? "reports identical" : "reports differ") +
                                   ", |s_10(256) - s_10(512)| / s_10 = " + rel.to_string(3)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  double budget = 120.0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--only" || arg == "--expect-fail" || arg == "--budget") && i + 1 < argc) {
      const std::string v = argv[++i];
      if (arg == "--only") only.insert(std::stoi(v));
      else if (arg == "--expect-fail") expect_fail.insert(std::stoi(v));
      else budget = std::stod(v);
    } else {
      std::cerr << "usage: acceptance [--only N]... [--expect-fail N]... [--budget SECONDS]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"disk preimage", disk_preimage},
      {"component counts", component_counts},
      {"center solver", center_solver},
      {"monotone escape", monotone_escape},
      {"sector bound", sector_bound},
      {"argument inequalities", arg_inequalities},
      {"monotonicity in C", monotonicity},
      {"theorem recursion", theorem_recursion},
      {"Levin values", levin_values},
      {"28-component render", twenty_eight_components},
      {"odometer and labels", [budget] { return combinatorics(budget); }},
      {"determinism and stability", determinism},
  };

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::cout << (o.pass ? "PASS " : "FAIL ") << std::setw(2) << id << "  " << criteria[k].first << ": " << o.detail
              << std::endl;
  }

  std::set<int> expected;
  for (int id : expect_fail)
    if (only.empty() || only.count(id)) expected.insert(id);
  if (failed != expected) {
    std::cout << "failing criteria differ from the expected set" << std::endl;
    return 1;
  }
  return 0;
}
