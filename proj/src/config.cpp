#include "satmodel/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "satmodel/errors.hpp"

namespace satmodel {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"render", "criterion", "levin", "verify", "address", "centers"};

// Collects messages instead of failing on the first problem.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void allow(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      errors_.push_back(where + " must be an object");
      return;
    }
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
      if (!known.count(k)) errors_.push_back("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
    }
  }

  // Numbers are accepted as text so decimal constants stay exact.
  void text(const json& obj, const char* key, std::string& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (v.is_string()) out = v.get<std::string>();
    else if (v.is_number()) out = v.dump();
    else errors_.push_back(where + key + " must be a number or a numeric string");
  }

  template <typename T>
  void number(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if constexpr (std::is_integral_v<T>) {
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        out = v.get<T>();
        return;
      }
      errors_.push_back(where + key + " must be a non-negative integer");
    } else {
      if (v.is_number()) {
        out = v.get<T>();
        return;
      }
      errors_.push_back(where + key + " must be a number");
    }
  }

 private:
  std::vector<std::string>& errors_;
};

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_fraction(const json& v) {
  try {
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
      if (v[0].get<std::int64_t>() < 0 || v[1].get<std::int64_t>() < 0) return std::nullopt;
      return std::make_pair(v[0].get<std::uint64_t>(), v[1].get<std::uint64_t>());
    }
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) return std::nullopt;
      std::size_t used = 0;
      const std::uint64_t p = std::stoull(s.substr(0, slash), &used);
      if (used != slash) return std::nullopt;
      const std::string qs = s.substr(slash + 1);
      const std::uint64_t q = std::stoull(qs, &used);
      if (used != qs.size()) return std::nullopt;
      return std::make_pair(p, q);
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::optional<GeneratorRule::Kind> parse_kind(const std::string& s) {
  if (s == "affine") return GeneratorRule::Kind::kAffine;
  if (s == "geometric") return GeneratorRule::Kind::kGeometric;
  if (s == "tower") return GeneratorRule::Kind::kTower;
  return std::nullopt;
}

std::optional<Precision> parse_bits(const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size() && v >= 32 && v <= 1 << 20) return static_cast<Precision>(v);
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

void set_precision(JobConfig& c, const std::string& s, std::vector<std::string>& errors) {
  if (s == "auto") {
    c.auto_precision = true;
    return;
  }
  if (auto bits = parse_bits(s)) {
    c.precision = *bits;
    c.auto_precision = false;
  } else {
    errors.push_back("precision must be \"auto\" or an integer number of bits in [32, 1048576], got '" + s + "'");
  }
}

}  // namespace

RotationSequence JobConfig::rotations() const {
  if (generator) return RotationSequence(*generator);
  return RotationSequence(fractions);
}

std::size_t JobConfig::levels_needed() const { return command == "address" ? horizon : horizon + 1; }

JobConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("configuration is not valid JSON: ") + e.what());
  }
  std::vector<std::string> errors;
  Reader rd(errors);
  JobConfig c;
  rd.allow(doc, "", {"command", "params", "precision", "horizon", "render", "criterion", "verify", "levin", "address",
                     "out", "threads"});
  if (!doc.is_object()) throw ValidationError(errors);

  if (doc.contains("command") && doc["command"].is_string()) c.command = doc["command"].get<std::string>();
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    errors.push_back("command must be one of render, criterion, levin, verify, address, centers");
  }

  bool horizon_given = false;
  if (doc.contains("params")) {
    const json& p = doc["params"];
    rd.allow(p, "params", {"C", "fractions", "generator"});
    if (p.is_object()) {
      rd.text(p, "C", c.C, "params.");
      if (p.contains("fractions")) {
        if (!p["fractions"].is_array()) {
          errors.push_back("params.fractions must be a list of \"p/q\" strings or [p, q] pairs");
        } else {
          for (std::size_t i = 0; i < p["fractions"].size(); ++i) {
            if (auto f = parse_fraction(p["fractions"][i])) c.fractions.push_back(*f);
            else errors.push_back("params.fractions[" + std::to_string(i) + "] is not a fraction p/q");
          }
        }
      }
      if (p.contains("generator")) {
        const json& g = p["generator"];
        rd.allow(g, "params.generator", {"kind", "q0", "p", "a", "b", "ratio", "base"});
        GeneratorRule rule;
        if (g.is_object()) {
          const std::string kind = g.value("kind", std::string());
          if (auto k = parse_kind(kind)) rule.kind = *k;
          else errors.push_back("params.generator.kind must be affine, geometric or tower");
          rd.number(g, "q0", rule.q0, "params.generator.");
          rd.number(g, "p", rule.p, "params.generator.");
          rd.number(g, "a", rule.a, "params.generator.");
          rd.number(g, "b", rule.b, "params.generator.");
          rd.number(g, "ratio", rule.ratio, "params.generator.");
          rd.number(g, "base", rule.base, "params.generator.");
        }
        c.generator = rule;
      }
      if (c.generator && !c.fractions.empty()) errors.push_back("params: give either fractions or generator, not both");
    }
  }
  if (!c.generator && c.fractions.empty()) errors.push_back("params needs fractions or a generator");

  if (doc.contains("precision")) {
    std::string s;
    rd.text(doc, "precision", s, "");
    if (!s.empty()) set_precision(c, s, errors);
  }
  if (doc.contains("horizon")) {
    rd.number(doc, "horizon", c.horizon, "");
    horizon_given = true;
  }
  if (doc.contains("out")) {
    if (doc["out"].is_string()) c.out_dir = doc["out"].get<std::string>();
    else errors.push_back("out must be a string");
  }
  rd.number(doc, "threads", c.threads, "");

  if (doc.contains("render")) {
    const json& r = doc["render"];
    rd.allow(r, "render", {"window", "palette", "backend"});
    if (r.is_object()) {
      if (r.contains("window")) {
        const json& w = r["window"];
        rd.allow(w, "render.window", {"x_min", "x_max", "y_min", "y_max", "width", "height"});
        rd.number(w, "x_min", c.window.x_min, "render.window.");
        rd.number(w, "x_max", c.window.x_max, "render.window.");
        rd.number(w, "y_min", c.window.y_min, "render.window.");
        rd.number(w, "y_max", c.window.y_max, "render.window.");
        rd.number(w, "width", c.window.width, "render.window.");
        rd.number(w, "height", c.window.height, "render.window.");
      }
      if (r.contains("palette")) {
        Palette pal;
        bool ok = r["palette"].is_array();
        if (ok) {
          for (const auto& v : r["palette"]) {
            if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 255) ok = false;
            else pal.push_back(static_cast<std::uint8_t>(v.get<int>()));
          }
        }
        if (ok) c.palette = pal;
        else errors.push_back("render.palette must be a list of gray levels 0..255");
      }
      if (r.contains("backend")) {
        const std::string b = r["backend"].is_string() ? r["backend"].get<std::string>() : "";
        if (b == "auto") c.backend = Backend::kAuto;
        else if (b == "fast") c.backend = Backend::kFast;
        else if (b == "exact") c.backend = Backend::kExact;
        else errors.push_back("render.backend must be auto, fast or exact");
      }
    }
  }

  if (doc.contains("criterion")) {
    const json& cr = doc["criterion"];
    rd.allow(cr, "criterion", {"candidate"});
    if (cr.is_object() && cr.contains("candidate")) {
      const json& cd = cr["candidate"];
      rd.allow(cd, "criterion.candidate", {"kind", "alpha", "beta", "x", "delta"});
      if (cd.is_object()) {
        c.candidate_kind = cd.value("kind", std::string("theorem"));
        if (c.candidate_kind != "theorem" && c.candidate_kind != "fixed" && c.candidate_kind != "center") {
          errors.push_back("criterion.candidate.kind must be theorem, fixed or center");
        }
        rd.number(cd, "alpha", c.alpha, "criterion.candidate.");
        rd.number(cd, "beta", c.beta, "criterion.candidate.");
        rd.text(cd, "x", c.candidate_x, "criterion.candidate.");
        rd.number(cd, "delta", c.candidate_delta, "criterion.candidate.");
      }
    }
  }

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    rd.allow(v, "verify", {"alpha", "beta", "samples", "seed", "q", "c_prime"});
    if (v.is_object()) {
      rd.number(v, "alpha", c.alpha, "verify.");
      rd.number(v, "beta", c.beta, "verify.");
      rd.number(v, "samples", c.samples, "verify.");
      rd.number(v, "seed", c.seed, "verify.");
      rd.number(v, "q", c.arg_q, "verify.");
      if (v.contains("c_prime")) {
        std::string s;
        rd.text(v, "c_prime", s, "verify.");
        c.c_prime = s;
      }
    }
  }

  if (doc.contains("levin")) {
    const json& l = doc["levin"];
    rd.allow(l, "levin", {"first", "last", "delta"});
    if (l.is_object()) {
      rd.number(l, "first", c.levin_first, "levin.");
      if (l.contains("last")) {
        std::size_t last = 0;
        rd.number(l, "last", last, "levin.");
        c.levin_last = last;
      }
      rd.number(l, "delta", c.levin_delta, "levin.");
    }
  }

  if (doc.contains("address")) {
    const json& a = doc["address"];
    rd.allow(a, "address", {"re", "im"});
    if (a.is_object()) {
      rd.text(a, "re", c.point_re, "address.");
      rd.text(a, "im", c.point_im, "address.");
    }
  }

  if (!horizon_given) {
    // Default: everything an explicit list allows, six levels for generators.
    if (c.generator) c.horizon = 6;
    else if (!c.fractions.empty()) c.horizon = c.command == "address" ? c.fractions.size() : c.fractions.size() - 1;
  }
  if (!errors.empty()) throw ValidationError(errors);
  return c;
}

Overrides overrides_from_env(const std::map<std::string, std::string>& env) {
  Overrides o;
  std::vector<std::string> errors;
  auto get = [&](const char* name) -> std::optional<std::string> {
    const auto it = env.find(std::string(kEnvPrefix) + name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  o.precision = get("PRECISION");
  o.out_dir = get("OUT");
  try {
    if (auto h = get("HORIZON")) o.horizon = static_cast<std::size_t>(std::stoull(*h));
  } catch (const std::exception&) {
    errors.push_back(std::string(kEnvPrefix) + "HORIZON must be a non-negative integer");
  }
  try {
    if (auto t = get("THREADS")) o.threads = static_cast<unsigned>(std::stoul(*t));
  } catch (const std::exception&) {
    errors.push_back(std::string(kEnvPrefix) + "THREADS must be a non-negative integer");
  }
  if (!errors.empty()) throw ValidationError(errors);
  return o;
}

void apply_overrides(JobConfig& config, const Overrides& o) {
  std::vector<std::string> errors;
  if (o.precision) set_precision(config, *o.precision, errors);
  if (o.horizon) config.horizon = *o.horizon;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.threads) config.threads = *o.threads;
  if (!errors.empty()) throw ValidationError(errors);
}

Precision auto_precision(const RotationSequence& rotations, std::size_t levels) {
  const auto terms = rotations.expand(levels, 64);
  double bits = 64.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const ExtReal& q = terms[k].q.value;
    bits += q.fits() ? std::log2(q.to_double()) : std::numeric_limits<double>::infinity();
    if (bits > 8192.0) return 8192;
  }
  return static_cast<Precision>(std::ceil(bits));
}

ModelParams validate(JobConfig& config) {
  std::vector<std::string> errors;
  if (config.command == "render") {
    try {
      config.window.validate();
    } catch (const ValidationError& e) {
      errors.insert(errors.end(), e.messages().begin(), e.messages().end());
    }
    if (config.palette && config.palette->size() < config.horizon + 2) {
      errors.push_back("render.palette needs " + std::to_string(config.horizon + 2) + " entries (depths 0..N+1)");
    }
  }
  if ((config.command == "criterion" || config.command == "centers") && config.horizon < 1) {
    errors.push_back("horizon must be at least 1 for " + config.command);
  }
  if (config.command == "levin" && config.levin_last && *config.levin_last < config.levin_first) {
    errors.push_back("levin.last must not be below levin.first");
  }

  std::optional<RotationSequence> rot;
  try {
    rot = config.rotations();
  } catch (const ValidationError& e) {
    errors.insert(errors.end(), e.messages().begin(), e.messages().end());
  }
  std::size_t levels = config.levels_needed();
  if (config.command == "levin") {
    const std::size_t last = config.levin_last.value_or(config.horizon > 0 ? config.horizon - 1 : 0);
    levels = std::max(levels, last + 2);
  }
  if (rot && levels > rot->available()) {
    errors.push_back("horizon " + std::to_string(config.horizon) + " needs " + std::to_string(levels) +
                     " rotation numbers but only " + std::to_string(rot->available()) + " are given");
  }
  if (!errors.empty() || !rot) throw ValidationError(errors);

  if (config.auto_precision) config.precision = auto_precision(*rot, config.horizon);
  BigReal C(config.precision);
  try {
    C = BigReal::from_string(config.C, config.precision);
  } catch (const ValidationError&) {
    throw ValidationError("params.C is not a number: '" + config.C + "'");
  }
  // The levin command only reads the fractions, but t_n must still be valid.
  ModelParams params(C, *rot, levels, config.precision);

  // Candidate checks belong here too, so a bad candidate leaves no report behind.
  if (config.command == "criterion") {
    const Precision prec = config.precision;
    const BigReal one(1.0, prec);
    if (config.candidate_kind == "theorem") {
      const double a = config.alpha, b = config.beta;
      if (!(a > 0 && a < 1 && b > 1 && a * b < 1)) {
        errors.push_back("theorem candidate needs 0 < alpha < 1 < beta < 1/alpha");
      } else {
        const BigReal x = one / (one - BigReal(b, prec) * BigReal(a, prec)) * t_value(params, 0);
        if (!(x < one)) {
          errors.push_back("theorem candidate x = eta*t_0 = " + x.to_string(12) +
                           " is not in (0,1); use a fixed or center candidate");
        }
      }
    } else if (config.candidate_kind == "fixed") {
      try {
        const BigReal x = BigReal::from_string(config.candidate_x, prec);
        if (!(x.sign() > 0 && x < one)) errors.push_back("fixed candidate x = " + config.candidate_x + " not in (0,1)");
      } catch (const ValidationError&) {
        errors.push_back("criterion.candidate.x is not a number: '" + config.candidate_x + "'");
      }
    } else if (!(config.candidate_delta >= 0 && config.candidate_delta < 1)) {
      errors.push_back("center candidate needs 0 <= delta < 1");
    }
  }
  if (config.command == "address") {
    for (const std::string* s : {&config.point_re, &config.point_im}) {
      try {
        BigReal::from_string(*s, config.precision);
      } catch (const ValidationError&) {
        errors.push_back("address coordinate is not a number: '" + *s + "'");
      }
    }
  }
  if (!errors.empty()) throw ValidationError(errors);
  return params;
}

nlohmann::ordered_json JobConfig::to_json() const {
  using json = nlohmann::ordered_json;
  json j;
  j["command"] = command;
  json p;
  p["C"] = C;
  if (generator) {
    json g;
    g["kind"] = to_string(generator->kind);
    g["q0"] = generator->q0;
    g["p"] = generator->p;
    switch (generator->kind) {
      case GeneratorRule::Kind::kAffine:
        g["a"] = generator->a;
        g["b"] = generator->b;
        break;
      case GeneratorRule::Kind::kGeometric:
        g["ratio"] = generator->ratio;
        break;
      case GeneratorRule::Kind::kTower:
        g["base"] = generator->base;
        break;
    }
    p["generator"] = g;
  } else {
    json fr = json::array();
    for (const auto& [a, b] : fractions) fr.push_back(std::to_string(a) + "/" + std::to_string(b));
    p["fractions"] = fr;
  }
  j["params"] = p;
  j["precision"] = static_cast<long>(precision);
  j["precision_mode"] = auto_precision ? "auto" : "fixed";
  j["horizon"] = horizon;
  if (command == "render") {
    j["render"]["window"] = {{"x_min", window.x_min}, {"x_max", window.x_max}, {"y_min", window.y_min},
                             {"y_max", window.y_max}, {"width", window.width}, {"height", window.height}};
    j["render"]["backend"] = backend == Backend::kAuto ? "auto" : (backend == Backend::kFast ? "fast" : "exact");
    if (palette) j["render"]["palette"] = *palette;
  }
  if (command == "criterion") {
    j["criterion"]["candidate"] = {{"kind", candidate_kind}, {"alpha", alpha}, {"beta", beta},
                                   {"x", candidate_x}, {"delta", candidate_delta}};
  }
  if (command == "verify") {
    j["verify"] = {{"alpha", alpha}, {"beta", beta}, {"samples", samples}, {"seed", seed}, {"q", arg_q}};
    if (c_prime) j["verify"]["c_prime"] = *c_prime;
  }
  if (command == "levin") {
    j["levin"] = {{"first", levin_first}, {"delta", levin_delta}};
    if (levin_last) j["levin"]["last"] = *levin_last;
  }
  if (command == "address") j["address"] = {{"re", point_re}, {"im", point_im}};
  return j;
}

}  // namespace satmodel
