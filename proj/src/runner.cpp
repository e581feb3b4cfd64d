#include "dioph/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dioph/checkers.hpp"
#include "dioph/engine.hpp"
#include "dioph/sections.hpp"

namespace dioph {

using nlohmann::json;

Precision default_precision() {
  if (const char* v = std::getenv(kPrecisionEnv)) {
    char* end = nullptr;
    long bits = std::strtol(v, &end, 10);
    if (end && *end == '\0' && bits >= 32 && bits <= static_cast<long>(kMaxPrecision)) return bits;
    fail(ErrorKind::SchemaError, std::string(kPrecisionEnv) + " must be an integer in [32, 16384]");
  }
  return 512;
}

namespace {

// ---------------------------------------------------------------- schema

enum class Kind { String, Integer, Number, Boolean, Range, StringList, Object };

struct Key {
  std::string name;
  Kind kind;
  bool required = false;
  json fallback = nullptr;
};

const std::map<std::string, std::vector<Key>>& schemas() {
  static const json calibration = {{"m", 2}, {"c1", "1"}, {"c2", "1"}, {"d", "1"}};
  static const std::map<std::string, std::vector<Key>> s = {
      {"approx",
       {{"theta", Kind::String, true},
        {"D", Kind::Range, true},
        {"a", Kind::String, false, nullptr},
        {"N", Kind::Integer, false, 1},
        {"calibration", Kind::Object, false, calibration},
        {"weight_step_bits", Kind::Integer, false, 4},
        {"coefficient_box", Kind::Integer, false, nullptr},
        {"precision_cap", Kind::Integer, false, 16384}}},
      {"liouville",
       {{"alpha", Kind::String, true},
        {"betas", Kind::StringList, true},
        {"convention", Kind::String, false, "fubini-study"},
        {"c", Kind::String, false, "0"},
        {"c_prime", Kind::String, false, "0"}}},
      {"bezout-check",
       {{"check", Kind::String, true},
        {"instances", Kind::Object, false, json::array()},
        {"random", Kind::Integer, false, 0},
        {"c", Kind::String, false, "0"},
        {"c_prime", Kind::String, false, "0"},
        {"dbar_prime", Kind::String, false, "0"},
        {"d", Kind::String, false, "0"}}},
      {"hilbert",
       {{"cycle", Kind::String, true},
        {"t", Kind::Integer, true},
        {"D", Kind::Range, true},
        {"arithmetic", Kind::Boolean, false, false},
        {"constants", Kind::Object, false,
         {{"c1", "1"}, {"c2", "1"}, {"c3", "1"}, {"c4", "1"}, {"c5", "1"}, {"m", 2}}}}},
      {"constants",
       {{"t", Kind::Integer, true},
        {"N", Kind::Integer, false, 1},
        {"a", Kind::String, false, nullptr},
        {"calibration", Kind::Object, false, calibration}}},
      {"triple-verify",
       {{"theta", Kind::String, true},
        {"D", Kind::Integer, true},
        {"search", Kind::Boolean, false, true},
        {"y", Kind::String, false, nullptr},
        {"f", Kind::String, false, nullptr},
        {"fbar", Kind::String, false, nullptr},
        {"b", Kind::String, false, nullptr},
        {"a", Kind::String, false, nullptr},
        {"N", Kind::Integer, false, 1},
        {"calibration", Kind::Object, false, calibration}}},
      {"calibrate",
       {{"target", Kind::String, false, "metric-bezout"},
        {"train", Kind::Integer, false, 50},
        {"holdout", Kind::Integer, false, 50},
        {"samples", Kind::Integer, false, 20},
        {"D", Kind::Range, false, json::array({1, 6})}}},
  };
  return s;
}

[[noreturn]] void schema(const std::string& msg) { fail(ErrorKind::SchemaError, msg); }

json normalize_range(const json& v, const std::string& key) {
  // An integer, a list of integers, or {"from": a, "to": b}.
  std::vector<long> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<long>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_integer()) schema(key + " must list integers");
      out.push_back(x.get<long>());
    }
  } else if (v.is_object() && v.contains("from") && v.contains("to") && v.size() == 2 &&
             v["from"].is_number_integer() && v["to"].is_number_integer()) {
    for (long d = v["from"].get<long>(); d <= v["to"].get<long>(); ++d) out.push_back(d);
  } else {
    schema(key + " must be an integer, a list or {\"from\", \"to\"}");
  }
  if (out.empty()) schema(key + " is empty");
  return out;
}

json check_value(const Key& k, const json& v) {
  switch (k.kind) {
    case Kind::String:
      if (v.is_string()) return v;
      if (v.is_number_integer()) return std::to_string(v.get<long>());
      schema(k.name + " must be a string");
    case Kind::Integer:
      if (!v.is_number_integer()) schema(k.name + " must be an integer");
      return v;
    case Kind::Number:
      if (!v.is_number()) schema(k.name + " must be a number");
      return v;
    case Kind::Boolean:
      if (!v.is_boolean()) schema(k.name + " must be a boolean");
      return v;
    case Kind::Range:
      return normalize_range(v, k.name);
    case Kind::StringList:
      if (!v.is_array()) schema(k.name + " must be a list of strings");
      for (const auto& x : v)
        if (!x.is_string()) schema(k.name + " must be a list of strings");
      return v;
    case Kind::Object:
      if (!v.is_object() && !v.is_array()) schema(k.name + " must be an object");
      return v;
  }
  return v;
}

Rational rational_param(const json& v, const std::string& key) {
  try {
    Rational q(v.get<std::string>());
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    schema(key + " must be a rational number such as \"3/2\"");
  }
}

Rational rational_field(const json& obj, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return Rational(fallback);
  const json& v = obj[key];
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) schema(key + " must be a rational given as a string");
  return rational_param(v, key);
}

Calibration calibration_of(const json& j) {
  for (const auto& [k, v] : j.items())
    if (k != "m" && k != "c1" && k != "c2" && k != "d") schema("unknown calibration key " + k);
  Calibration cal;
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) schema("calibration.m must be an integer");
    cal.m = j["m"].get<long>();
  }
  cal.c1 = rational_field(j, "c1", "1");
  cal.c2 = rational_field(j, "c2", "1");
  cal.d = rational_field(j, "d", "1");
  return cal;
}

// ---------------------------------------------------------------- output

std::string num(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string lo(const BallReal& x) { return num(mpfr_get_d(x.lower().get(), MPFR_RNDD)); }
std::string hi(const BallReal& x) { return num(mpfr_get_d(x.upper().get(), MPFR_RNDU)); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
  return out + "\n";
}

std::string iso_now() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Everything a result file needs in its header.
struct Provenance {
  const Manifest* manifest = nullptr;
  Precision precision = 0;
  NamedValues constants;

  json to_json() const {
    json c = json::object();
    for (const auto& [k, v] : constants) c[k] = v;
    return {{"tool", std::string("dioph ") + kToolVersion},
            {"command", manifest->command},
            {"manifest_hash", manifest->hash()},
            {"seed", manifest->seed},
            {"precision", precision},
            {"constants", c},
            {"generated_at", iso_now()}};
  }
  std::string csv_header() const {
    std::string out = "# tool: dioph " + std::string(kToolVersion) + "\n";
    out += "# command: " + manifest->command + "\n";
    out += "# manifest_hash: " + manifest->hash() + "\n";
    out += "# seed: " + std::to_string(manifest->seed) + "\n";
    out += "# precision: " + std::to_string(precision) + "\n";
    for (const auto& [k, v] : constants) out += "# " + k + ": " + v + "\n";
    out += "# generated_at: " + iso_now() + "\n";
    return out;
  }
};

class Writer {
 public:
  Writer(const Manifest& m, RunOutcome& out, Provenance prov) : m_(m), out_(out), prov_(std::move(prov)) {
    std::filesystem::create_directories(m.out_dir);
  }
  void csv(const std::string& name, const std::string& body) {
    write(name, prov_.csv_header() + body);
  }
  void jsonl(const std::string& name, const std::vector<json>& records) {
    std::string text = json{{"provenance", prov_.to_json()}}.dump() + "\n";
    for (const auto& r : records) text += r.dump() + "\n";
    write(name, text);
  }
  void json_file(const std::string& name, json body) {
    body["provenance"] = prov_.to_json();
    write(name, body.dump(2) + "\n");
  }

 private:
  void write(const std::string& name, const std::string& text) {
    const std::string path = (std::filesystem::path(m_.out_dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::DomainError, "cannot write " + path);
    f << text;
    out_.files.push_back(path);
  }
  const Manifest& m_;
  RunOutcome& out_;
  Provenance prov_;
};

void count(RunOutcome& out, Verdict v) {
  switch (v) {
    case Verdict::Holds:
      ++out.holds;
      break;
    case Verdict::Violated:
      ++out.violated;
      break;
    case Verdict::Indeterminate:
      ++out.indeterminate;
      break;
  }
}

NamedValues sigma_rows(int t, const SigmaTable& sigma) {
  NamedValues out;
  for (int s = 0; s <= t; ++s) out.push_back({"sigma_" + std::to_string(s), rational_text(sigma(s))});
  return out;
}

void append(NamedValues& a, const NamedValues& b) { a.insert(a.end(), b.begin(), b.end()); }

// Prefixes module errors with the step that raised them.
template <class Fn>
auto tagged(const std::string& tag, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "[" + tag + "] " + std::string(e.what()).substr(to_string(e.kind()).size() + 2));
  }
}

ConstantTable table_of(const json& p, int t) {
  Calibration cal = calibration_of(p["calibration"]);
  const long N = p["N"].get<long>();
  Rational a = p["a"].is_null() ? default_a(t, cal) : rational_param(p["a"], "a");
  return build_constants(t, N, a, cal);
}

// ---------------------------------------------------------------- commands

void run_constants(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const int t = p["t"].get<int>();
  ConstantTable T = tagged("constants", [&] { return table_of(p, t); });
  Provenance prov{&m, m.precision, T.rows()};
  std::string body = csv_row({"name", "value"});
  for (const auto& [k, v] : T.rows()) body += csv_row({k, v});
  Writer(m, out, prov).csv("constants.csv", body);
  out.log.push_back("constants: " + std::to_string(T.rows().size()) + " rows");
}

void run_approx(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  PointSpec theta = tagged("approx theta", [&] { return PointSpec::parse(p["theta"].get<std::string>()); });
  const int t = theta.dim();
  ConstantTable T = tagged("approx constants", [&] { return table_of(p, t); });
  EngineOptions opts;
  opts.policy = {m.precision, static_cast<Precision>(p["precision_cap"].get<long>())};
  opts.weight_step_bits = p["weight_step_bits"].get<int>();
  if (!p["coefficient_box"].is_null()) opts.coefficient_box = Integer(p["coefficient_box"].get<long>());
  std::vector<int> degrees = p["D"].get<std::vector<int>>();

  NamedValues consts = T.rows();
  ScalingExperiment ex = tagged("approx", [&] { return main_theorem_experiment(theta, degrees, T, opts); });

  std::string body = csv_row({"D", "deg", "h", "log_dist_lo", "log_dist_hi", "fit_residual", "precision",
                              "end_check", "status"});
  std::vector<json> steps;
  size_t chain_index = 0;
  for (const auto& r : ex.rows) {
    if (!r.completed) {
      ++out.errors;
      body += csv_row({std::to_string(r.D), "", "", "", "", "", "", "", "error: " + r.error});
      out.log.push_back("[approx D=" + std::to_string(r.D) + "] " + r.error);
      continue;
    }
    const ApproximationChain& c = ex.chains.at(chain_index++);
    count(out, c.end_check.verdict);
    body += csv_row({std::to_string(r.D), std::to_string(r.degree), num(r.height.mid_double()), lo(r.log_distance),
                     hi(r.log_distance), num(r.fit_residual), std::to_string(r.precision),
                     std::string(to_string(c.end_check.verdict)), "complete"});
    for (size_t i = 0; i < c.steps.size(); ++i) {
      const ChainStep& s = c.steps[i];
      json j = {{"D", c.D},
                {"step", i + 1},
                {"codim", s.codim},
                {"branch", s.branch},
                {"section", to_polynomial_string(s.section)},
                {"cycle", s.cycle.to_string()},
                {"degree", s.degree},
                {"degree_within", s.degree_within},
                {"height", ball_json(s.height)},
                {"a_size", ball_json(s.a_size)},
                {"distance", ball_json(s.distance)},
                {"log_distance", ball_json(s.log_distance)},
                {"size", ball_json(s.size)},
                {"size_decrease", s.size_decrease},
                {"log_norm", ball_json(s.certificate.log_norm)},
                {"log_eval", ball_json(s.certificate.log_eval)},
                {"weight_bits", s.certificate.weight_bits},
                {"search_precision", s.certificate.precision}};
      if (s.certificate.nominal_eval_met) j["nominal_eval_met"] = *s.certificate.nominal_eval_met;
      if (s.certificate.nominal_length_met) j["nominal_length_met"] = *s.certificate.nominal_length_met;
      steps.push_back(std::move(j));
    }
    json end = {{"D", c.D}, {"end", c.end.to_string()}, {"closest", c.closest.to_string()},
                {"verdict", std::string(to_string(c.end_check.verdict))}};
    for (const auto& q : c.end_check.parts)
      end["parts"].push_back({{"label", q.label},
                              {"verdict", std::string(to_string(q.verdict))},
                              {"lhs", ball_json(q.lhs)},
                              {"rhs", ball_json(q.rhs)},
                              {"slack", ball_json(q.slack)}});
    steps.push_back(std::move(end));
  }
  Provenance prov{&m, m.precision, consts};
  Writer w(m, out, prov);
  w.csv("scaling.csv", body);
  w.jsonl("steps.jsonl", steps);
  json summary = {{"exponent", ex.exponent}, {"intercept", ex.intercept}, {"transfer", ex.transfer}};
  w.json_file("summary.json", summary);
  out.log.push_back("approx: fitted exponent " + num(ex.exponent));
}

std::vector<AlgebraicPoint> algebraic_points(const std::string& text, Precision p) {
  // "(a:b)" for a rational point, "roots:<binary form>" for all its roots.
  if (text.rfind("roots:", 0) == 0) return AlgebraicPoint::roots_of(parse_form(text.substr(6), 1), p);
  return {AlgebraicPoint::rational(parse_exact_point(text))};
}

void run_liouville(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const Precision prec = m.precision;
  const std::string conv_text = p["convention"].get<std::string>();
  HeightConvention conv;
  if (conv_text == "fubini-study")
    conv = HeightConvention::FubiniStudy;
  else if (conv_text == "mahler")
    conv = HeightConvention::Mahler;
  else
    schema("convention must be fubini-study or mahler");
  const Rational c = rational_param(p["c"], "c"), cp = rational_param(p["c_prime"], "c_prime");
  auto alphas = tagged("liouville alpha", [&] { return algebraic_points(p["alpha"].get<std::string>(), prec); });
  if (alphas.size() != 1) schema("alpha must be a single point");
  std::vector<AlgebraicPoint> betas;
  std::vector<std::string> labels;
  for (const auto& b : p["betas"]) {
    auto pts = tagged("liouville beta " + b.get<std::string>(),
                      [&] { return algebraic_points(b.get<std::string>(), prec); });
    for (auto& x : pts) {
      betas.push_back(std::move(x));
      labels.push_back(b.get<std::string>());
    }
  }
  LiouvilleResult r = tagged("liouville", [&] { return check_liouville(alphas[0], betas, conv, c, cp, prec); });
  NamedValues consts = {{"convention", conv_text}, {"c", rational_text(c)}, {"c_prime", rational_text(cp)},
                        {"c1", r.c1.to_string(17)}, {"c2", r.c2.to_string(17)}};
  append(consts, sigma_rows(1, SigmaTable{}));
  std::string body = csv_row({"beta", "point", "deg", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "verdict"});
  std::vector<json> recs;
  for (size_t i = 0; i < r.reports.size(); ++i) {
    const auto& rep = r.reports[i];
    count(out, rep.verdict);
    body += csv_row({labels[i], betas[i].point.to_string(), std::to_string(betas[i].degree()), lo(rep.lhs),
                     hi(rep.lhs), lo(rep.rhs), hi(rep.rhs), std::string(to_string(rep.verdict))});
    json j = rep.to_json();
    j["beta"] = labels[i];
    recs.push_back(std::move(j));
  }
  Writer w(m, out, Provenance{&m, prec, consts});
  w.csv("liouville.csv", body);
  w.jsonl("liouville.jsonl", recs);
}

void run_bezout(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const Precision prec = m.precision;
  const std::string check = p["check"].get<std::string>();
  if (check != "bezout1" && check != "metric" && check != "bezmult")
    schema("check must be bezout1, metric or bezmult");
  const Rational c = rational_param(p["c"], "c"), cp = rational_param(p["c_prime"], "c_prime");
  MetricBezoutConstants k;
  k.dbar_prime = rational_param(p["dbar_prime"], "dbar_prime");
  k.d = rational_param(p["d"], "d");

  struct Instance {
    std::string label;
    ProjectivePoint theta;
    EffectiveCycle y;
    std::optional<IntForm> f;
  };
  std::vector<Instance> instances;
  if (!p["instances"].is_array()) schema("instances must be a list");
  for (size_t i = 0; i < p["instances"].size(); ++i) {
    const json& j = p["instances"][i];
    if (!j.is_object() || !j.contains("theta") || !j.contains("cycle") || !j["theta"].is_string() ||
        !j["cycle"].is_string())
      schema("each instance needs string fields theta and cycle");
    for (const auto& [key, v] : j.items())
      if (key != "theta" && key != "cycle" && key != "form") schema("unknown instance key " + key);
    Instance in;
    in.label = "instance " + std::to_string(i);
    tagged(in.label, [&] {
      PointSpec th = PointSpec::parse(j["theta"].get<std::string>());
      in.theta = th.at(prec);
      in.y = parse_cycle(j["cycle"].get<std::string>(), th.dim(), prec);
      if (j.contains("form")) in.f = parse_form(j["form"].get<std::string>(), th.dim());
      return 0;
    });
    if (check != "bezout1" && !in.f) schema(in.label + " needs a form for " + check);
    instances.push_back(std::move(in));
  }
  std::mt19937_64 rng(m.seed);
  for (long i = 0; i < p["random"].get<long>(); ++i) {
    BezoutInstance b = random_bezout_instance(rng);
    Instance in;
    in.label = "random " + std::to_string(i);
    in.theta = b.theta;
    in.y = tagged(in.label, [&] { return divisor_of(b.g, prec); });
    in.f = b.f;
    instances.push_back(std::move(in));
  }
  if (instances.empty()) schema("bezout-check needs instances or random > 0");

  std::string body = csv_row({"instance", "check", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "verdict"});
  std::vector<json> recs;
  for (const auto& in : instances) {
    try {
      DistanceReport r = tagged(in.label, [&] {
        if (check == "bezout1") return check_bezout1(in.theta, in.y, c, cp, prec);
        if (check == "metric") return check_metric_bezout(in.theta, in.y, *in.f, k, prec);
        return check_bezmult(in.theta, in.y, *in.f, k, prec);
      });
      count(out, r.verdict);
      body += csv_row({in.label, r.check, lo(r.lhs), hi(r.lhs), lo(r.rhs), hi(r.rhs),
                       std::string(to_string(r.verdict))});
      json j = r.to_json();
      j["instance"] = in.label;
      recs.push_back(std::move(j));
    } catch (const Error& e) {
      ++out.errors;
      out.log.push_back(e.what());
      body += csv_row({in.label, check, "", "", "", "", std::string("error: ") + e.what()});
    }
  }
  NamedValues consts = {{"c", rational_text(c)},
                        {"c_prime", rational_text(cp)},
                        {"dbar_prime", rational_text(k.dbar_prime)},
                        {"d", rational_text(k.d)}};
  append(consts, sigma_rows(2, k.sigma));
  Writer w(m, out, Provenance{&m, prec, consts});
  w.csv("bezout.csv", body);
  w.jsonl("bezout.jsonl", recs);
}

ArithmeticHilbertConstants hilbert_constants(const json& j) {
  ArithmeticHilbertConstants k;
  for (const auto& [key, v] : j.items())
    if (key != "c1" && key != "c2" && key != "c3" && key != "c4" && key != "c5" && key != "m")
      schema("unknown hilbert constant " + key);
  k.c1 = rational_field(j, "c1", "1");
  k.c2 = rational_field(j, "c2", "1");
  k.c3 = rational_field(j, "c3", "1");
  k.c4 = rational_field(j, "c4", "1");
  k.c5 = rational_field(j, "c5", "1");
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) schema("constants.m must be an integer");
    k.m = j["m"].get<long>();
  }
  return k;
}

void run_hilbert(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const Precision prec = m.precision;
  const int t = p["t"].get<int>();
  EffectiveCycle x = tagged("hilbert cycle", [&] { return parse_cycle(p["cycle"].get<std::string>(), t, prec); });
  const bool arith = p["arithmetic"].get<bool>();
  ArithmeticHilbertConstants k = hilbert_constants(p["constants"]);
  std::vector<std::string> head = {"D", "H", "lower", "upper", "within_bounds"};
  if (arith) head.insert(head.end(), {"arith_lo", "arith_hi", "bounds"});
  std::string body = csv_row(head);
  for (int D : p["D"].get<std::vector<int>>()) {
    const std::string tag = "hilbert D=" + std::to_string(D);
    HilbertReport h = tagged(tag, [&] { return hilbert_function(x, D); });
    count(out, h.within_bounds ? Verdict::Holds : Verdict::Violated);
    std::vector<std::string> row = {std::to_string(D), std::to_string(h.value),
                                    h.lower_bound ? std::to_string(*h.lower_bound) : "",
                                    std::to_string(h.upper_bound), h.within_bounds ? "HOLDS" : "VIOLATED"};
    if (arith) {
      ArithmeticHilbertReport a = tagged(tag, [&] { return arithmetic_hilbert(x, D, k, prec); });
      std::string verdicts;
      for (const auto& q : a.bounds) {
        count(out, q.verdict);
        verdicts += (verdicts.empty() ? "" : "; ") + q.label + " " + std::string(to_string(q.verdict));
      }
      row.insert(row.end(), {lo(a.value), hi(a.value), verdicts});
    }
    body += csv_row(row);
  }
  NamedValues consts = {{"c1", rational_text(k.c1)}, {"c2", rational_text(k.c2)}, {"c3", rational_text(k.c3)},
                        {"c4", rational_text(k.c4)}, {"c5", rational_text(k.c5)}, {"m", std::to_string(k.m)}};
  append(consts, sigma_rows(t, k.sigma));
  Writer(m, out, Provenance{&m, prec, consts}).csv("hilbert.csv", body);
}

void run_triple(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  PointSpec theta = tagged("triple theta", [&] { return PointSpec::parse(p["theta"].get<std::string>()); });
  const int t = theta.dim();
  const int D = p["D"].get<int>();
  ConstantTable T = tagged("triple constants", [&] { return table_of(p, t); });
  Precision prec = m.precision;
  ApproximationTriple tr;
  if (p["search"].get<bool>()) {
    if (!p["y"].is_null() || !p["f"].is_null()) schema("y and f are only used with search = false");
    EngineOptions opts;
    opts.policy.start = prec;
    ApproximationChain c = tagged("triple search", [&] { return search_approximation_chain(theta, D, T, opts); });
    tr = tagged("triple form", [&] { return triple_from_chain(c, theta, T, opts); });
    prec = std::max(prec, c.precision);
  } else {
    if (p["y"].is_null() || p["f"].is_null()) schema("y and f are required with search = false");
    tagged("triple input", [&] {
      tr.y = parse_cycle(p["y"].get<std::string>(), t, prec);
      tr.f = parse_form(p["f"].get<std::string>(), t);
      tr.fbar = p["fbar"].is_null() ? to_ball(tr.f, prec) : parse_ball_form(p["fbar"].get<std::string>(), prec);
      return 0;
    });
    tr.D = D;
  }
  Rational b = p["b"].is_null() ? T.b(t) : rational_param(p["b"], "b");
  TripleReport r = tagged("triple verify", [&] { return verify_triple(tr, theta.at(prec), T, b, prec); });
  std::string body = csv_row({"inequality", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "verdict"});
  for (const auto& q : r.parts) {
    count(out, q.verdict);
    body += csv_row({q.label, lo(q.lhs), hi(q.lhs), lo(q.rhs), hi(q.rhs), std::string(to_string(q.verdict))});
  }
  const auto& q = r.conclusion;
  body += csv_row({"conclusion: " + q.label, lo(q.lhs), hi(q.lhs), lo(q.rhs), hi(q.rhs),
                   std::string(to_string(q.verdict))});
  NamedValues consts = T.rows();
  consts.push_back({"b", rational_text(b)});
  consts.push_back({"Dbar", rational_text(r.dbar)});
  consts.push_back({"f", to_polynomial_string(tr.f)});
  consts.push_back({"Y", tr.y.to_string()});
  Writer(m, out, Provenance{&m, prec, consts}).csv("triple.csv", body);
}

// Fits c2 (c1 fixed), c3 and c5 of the arithmetic Hilbert bounds on random
// 0-cycles of P^1 given by integer forms.
void run_calibrate_hilbert(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const Precision prec = m.precision;
  std::mt19937_64 rng(m.seed);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::uniform_int_distribution<int> degree(1, 3);
  ArithmeticHilbertConstants k;
  std::vector<int> degrees = p["D"].get<std::vector<int>>();
  for (int D : degrees)
    if (D < 1) schema("calibration degrees must be positive");
  std::vector<EffectiveCycle> samples;
  for (long i = 0; i < p["samples"].get<long>(); ++i) {
    IntForm g(1, degree(rng), Integer(0));
    do {
      for (auto& x : g.coeffs()) x = coef(rng);
    } while (g.coeffs().back() == 0 || g.coeffs().front() == 0);
    samples.push_back(tagged("calibrate sample", [&] { return divisor_of(primitive_part(g), prec); }));
  }
  // With s = 0 the binomial is 1 and D^(s+1) = D.
  BallReal need_c2(0L, prec), need_c3(0L, prec), need_c5(0L, prec);
  std::string body = csv_row({"sample", "cycle", "D", "H_lo", "H_hi", "c2_required", "c3_required", "c5_required"});
  for (size_t i = 0; i < samples.size(); ++i) {
    const EffectiveCycle& x = samples[i];
    const BallReal h = cycle_height(x, prec, HeightConvention::Mahler, k.sigma);
    const BallReal degb(static_cast<long>(x.degree()), prec);
    for (int D : degrees) {
      ArithmeticHilbertReport a = tagged("calibrate sample " + std::to_string(i),
                                         [&] { return arithmetic_hilbert(x, D, k, prec); });
      const BallReal dd(static_cast<long>(D), prec);
      BallReal c2 = (h * dd - a.value) / (degb * dd);
      BallReal c3 = (a.value - dd * h - degb * ball_log(degb) * BallReal(Rational(1, 2), prec)) / (degb * dd);
      BallReal c5 = (max(a.value, -a.value) / dd - h) / degb;
      need_c2 = max(need_c2, c2);
      need_c3 = max(need_c3, c3);
      need_c5 = max(need_c5, c5);
      body += csv_row({std::to_string(i), x.to_string(), std::to_string(D), lo(a.value), hi(a.value),
                       num(c2.mid_double()), num(c3.mid_double()), num(c5.mid_double())});
    }
  }
  const Rational floor_value(1, 1 << 20);
  ArithmeticHilbertConstants fitted = k;
  fitted.c2 = std::max(fit_constant(need_c2), floor_value);
  fitted.c3 = std::max(fit_constant(need_c3), floor_value);
  fitted.c5 = std::max(fit_constant(need_c5), floor_value);
  for (const auto& x : samples)
    for (int D : degrees)
      for (const auto& q : arithmetic_hilbert(x, D, fitted, prec).bounds) count(out, q.verdict);
  NamedValues consts = {{"target", "arithmetic-hilbert"},
                        {"c1", rational_text(fitted.c1)},
                        {"c2", rational_text(fitted.c2)},
                        {"c3", rational_text(fitted.c3)},
                        {"c5", rational_text(fitted.c5)},
                        {"m", std::to_string(fitted.m)}};
  append(consts, sigma_rows(1, k.sigma));
  Writer(m, out, Provenance{&m, prec, consts}).csv("calibration.csv", body);
  out.log.push_back("calibrate: c2 = " + rational_text(fitted.c2) + ", c3 = " + rational_text(fitted.c3) +
                    ", c5 = " + rational_text(fitted.c5));
}

void run_calibrate(const Manifest& m, RunOutcome& out) {
  const json& p = m.params;
  const std::string target = p["target"].get<std::string>();
  if (target == "arithmetic-hilbert") return run_calibrate_hilbert(m, out);
  if (target != "metric-bezout") schema("target must be metric-bezout or arithmetic-hilbert");
  const long train = p["train"].get<long>(), holdout = p["holdout"].get<long>();
  if (train < 1 || holdout < 1) schema("train and holdout must be positive");
  PrecisionPolicy policy{m.precision, kMaxPrecision};
  auto [metric, mult] = tagged("calibrate", [&] { return calibrate_metric_bezout(m.seed, train, holdout, policy); });
  std::string body = csv_row({"check", "fitted", "train", "holdout", "holds", "violated", "indeterminate",
                              "resolved_by_precision"});
  std::vector<json> recs;
  for (const auto* s : {&metric, &mult}) {
    out.holds += s->holds;
    out.violated += s->violated;
    out.indeterminate += s->indeterminate;
    body += csv_row({s->check, rational_text(s->fitted), std::to_string(s->train), std::to_string(s->holdout),
                     std::to_string(s->holds), std::to_string(s->violated), std::to_string(s->indeterminate),
                     std::to_string(s->resolved_by_precision)});
    for (const auto& r : s->holdout_reports) recs.push_back(r.to_json());
  }
  NamedValues consts = {{"target", target},
                        {"dbar_prime", rational_text(metric.fitted)},
                        {"d", rational_text(mult.fitted)}};
  append(consts, sigma_rows(2, SigmaTable{}));
  Writer w(m, out, Provenance{&m, m.precision, consts});
  w.csv("calibration.csv", body);
  w.jsonl("holdout.jsonl", recs);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Manifest Manifest::from_json(const json& j) {
  if (!j.is_object()) schema("manifest must be a JSON object");
  static const std::set<std::string> top = {"command", "seed", "precision", "out_dir", "params"};
  for (const auto& [k, v] : j.items())
    if (!top.count(k)) schema("unknown manifest key " + k);
  if (!j.contains("command") || !j["command"].is_string()) schema("command is required");
  Manifest m;
  m.command = j["command"].get<std::string>();
  auto it = schemas().find(m.command);
  if (it == schemas().end()) schema("unknown command " + m.command);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long>() >= 0))
      schema("seed must be a nonnegative integer");
    m.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("precision")) {
    if (!j["precision"].is_number_integer()) schema("precision must be an integer");
    long bits = j["precision"].get<long>();
    if (bits < 32 || bits > static_cast<long>(kMaxPrecision)) schema("precision must lie in [32, 16384]");
    m.precision = bits;
  } else {
    m.precision = default_precision();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) schema("out_dir must be a string");
    m.out_dir = j["out_dir"].get<std::string>();
  }
  json params = j.value("params", json::object());
  if (!params.is_object()) schema("params must be an object");
  std::set<std::string> known;
  for (const Key& k : it->second) {
    known.insert(k.name);
    if (params.contains(k.name) && !params[k.name].is_null()) {
      m.params[k.name] = check_value(k, params[k.name]);
    } else if (k.required) {
      schema(m.command + " requires " + k.name);
    } else {
      m.params[k.name] = k.fallback;
    }
  }
  for (const auto& [k, v] : params.items())
    if (!known.count(k)) schema("unknown " + m.command + " parameter " + k);
  return m;
}

json Manifest::to_json() const {
  return {{"command", command}, {"seed", seed}, {"precision", precision}, {"out_dir", out_dir}, {"params", params}};
}

std::string Manifest::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) schema("cannot read manifest " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    schema(std::string("manifest is not valid JSON: ") + e.what());
  }
  return Manifest::from_json(j);
}

RunOutcome run(const Manifest& m) {
  static const std::map<std::string, std::function<void(const Manifest&, RunOutcome&)>> commands = {
      {"approx", run_approx},       {"liouville", run_liouville},   {"bezout-check", run_bezout},
      {"hilbert", run_hilbert},     {"constants", run_constants},   {"triple-verify", run_triple},
      {"calibrate", run_calibrate},
  };
  RunOutcome out;
  auto it = commands.find(m.command);
  if (it == commands.end()) schema("unknown command " + m.command);
  it->second(m, out);
  if (out.errors > 0)
    out.exit_code = 4;
  else if (out.violated > 0)
    out.exit_code = 2;
  else if (out.indeterminate > 0)
    out.exit_code = 3;
  return out;
}

std::string strip_provenance(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  bool first = true;
  while (std::getline(in, line)) {
    const bool header = (!line.empty() && line[0] == '#') || (first && line.rfind("{\"provenance\"", 0) == 0);
    first = false;
    if (!header) out += line + "\n";
  }
  // JSON documents carry the header as a key.
  if (text.rfind("{\n", 0) == 0) {
    json j = json::parse(text);
    j.erase("provenance");
    return j.dump(2) + "\n";
  }
  return out;
}

}  // namespace dioph
