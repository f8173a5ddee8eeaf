#include "ldp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <fmt/format.h>

#include "ldp/expression.hpp"

namespace ldp::config {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// Sentinel defaults that depend on the model dimensions.
constexpr const char* kZerosD = "zeros(d)";
constexpr const char* kOnesD = "ones(d)";
constexpr const char* kZerosM = "zeros(m)";

KeySpec key(std::string k, Type t, std::string fallback) {
  KeySpec s;
  s.key = std::move(k);
  s.type = t;
  s.fallback = std::move(fallback);
  return s;
}
KeySpec required(std::string k, Type t) {
  KeySpec s = key(std::move(k), t, "");
  s.required = true;
  return s;
}
KeySpec at_least(KeySpec s, double lo) {
  s.lo = lo;
  return s;
}
KeySpec above(KeySpec s, double lo) {
  s.lo = lo;
  s.lo_strict = true;
  return s;
}
KeySpec below(KeySpec s, double hi) {
  s.hi = hi;
  s.hi_strict = true;
  return s;
}
KeySpec one_of(KeySpec s, std::vector<std::string> choices) {
  s.choices = std::move(choices);
  return s;
}

std::string bound_text(double v) { return fmt::format("{}", v); }

[[noreturn]] void fail(const std::string& where, const std::string& section,
                       const std::string& k, const std::string& message) {
  throw ValidationError(where, section.empty() ? k : (k.empty() ? section : section + "." + k),
                        message);
}

double parse_real(const std::string& text, bool& ok) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  ok = ec == std::errc() && p == end && std::isfinite(v);
  return v;
}

long long parse_int(const std::string& text, bool& ok) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  ok = ec == std::errc() && p == end;
  return v;
}

void check_bounds(const KeySpec& spec, double v, const std::string& where,
                  const std::string& section) {
  if (spec.lo_strict ? !(v > spec.lo) : !(v >= spec.lo))
    fail(where, section, spec.key,
         fmt::format("{} must be {} {}", spec.key, spec.lo_strict ? ">" : "≥", bound_text(spec.lo)));
  if (spec.hi_strict ? !(v < spec.hi) : !(v <= spec.hi))
    fail(where, section, spec.key,
         fmt::format("{} must be {} {}", spec.key, spec.hi_strict ? "<" : "≤", bound_text(spec.hi)));
}

Value parse_value(const KeySpec& spec, const std::string& text, const std::string& where,
                  const std::string& section) {
  bool ok = false;
  switch (spec.type) {
    case Type::Int: {
      const long long v = parse_int(text, ok);
      if (!ok) fail(where, section, spec.key, fmt::format("{} must be an integer", spec.key));
      check_bounds(spec, static_cast<double>(v), where, section);
      return v;
    }
    case Type::Seed: {
      std::uint64_t v = 0;
      const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
      const char* begin = text.data() + (hex ? 2 : 0);
      const char* end = text.data() + text.size();
      const auto [p, ec] = std::from_chars(begin, end, v, hex ? 16 : 10);
      if (ec != std::errc() || p != end || begin == end)
        fail(where, section, spec.key, fmt::format("{} must be an unsigned 64-bit integer", spec.key));
      return v;
    }
    case Type::Real: {
      const double v = parse_real(text, ok);
      if (!ok) fail(where, section, spec.key, fmt::format("{} must be a finite number", spec.key));
      check_bounds(spec, v, where, section);
      return v;
    }
    case Type::Bool:
      if (text == "true" || text == "yes" || text == "1") return true;
      if (text == "false" || text == "no" || text == "0") return false;
      fail(where, section, spec.key, fmt::format("{} must be true or false", spec.key));
    case Type::Text:
      if (!spec.choices.empty() &&
          std::find(spec.choices.begin(), spec.choices.end(), text) == spec.choices.end()) {
        std::string list;
        for (const auto& c : spec.choices) list += (list.empty() ? "" : ", ") + c;
        fail(where, section, spec.key, fmt::format("{} must be one of: {}", spec.key, list));
      }
      if (text.empty() && spec.required)
        fail(where, section, spec.key, fmt::format("{} must not be empty", spec.key));
      return text;
    case Type::Reals: {
      std::vector<double> out;
      if (text.empty()) return out;
      for (const auto& item : split(text, ',')) {
        const double v = parse_real(item, ok);
        if (!ok) fail(where, section, spec.key, fmt::format("{} must be a list of numbers", spec.key));
        check_bounds(spec, v, where, section);
        out.push_back(v);
      }
      return out;
    }
    case Type::Ints: {
      std::vector<long long> out;
      if (text.empty()) return out;
      for (const auto& item : split(text, ',')) {
        const long long v = parse_int(item, ok);
        if (!ok) fail(where, section, spec.key, fmt::format("{} must be a list of integers", spec.key));
        check_bounds(spec, static_cast<double>(v), where, section);
        out.push_back(v);
      }
      return out;
    }
    case Type::Points: {
      std::vector<Vec> out;
      if (text.empty()) return out;
      for (const auto& point : split(text, ';')) {
        Vec p;
        for (const auto& item : split(point, ',')) {
          const double v = parse_real(item, ok);
          if (!ok)
            fail(where, section, spec.key,
                 fmt::format("{} must be points separated by ';' with components separated by ','",
                             spec.key));
          p.push_back(v);
        }
        out.push_back(std::move(p));
      }
      return out;
    }
  }
  fail(where, section, spec.key, "unsupported type");
}

std::string raw_text(const RawConfig& raw, const std::string& section, const std::string& k) {
  const auto s = raw.sections.find(section);
  if (s == raw.sections.end()) return {};
  const auto e = s->second.find(k);
  return e == s->second.end() ? std::string() : e->second.value;
}

int model_dim(const Resolved& r) {
  const auto& name = r.text("model", "name");
  if (name == "rotational") return 2;
  if (name == "cubic" || name == "sqrt-drift") return 1;
  return static_cast<int>(r.integer("model", "d"));
}

int model_noise_dim(const Resolved& r) {
  const auto& name = r.text("model", "name");
  if (name == "rotational" || name == "cubic" || name == "sqrt-drift") return 1;
  if (name == "custom") return static_cast<int>(r.integer("model", "m"));
  return static_cast<int>(r.integer("model", "d"));
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"check", "skeleton", "simulate", "rate",
                                                 "ldp",   "lemma1",   "exit"};
  return kinds;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"brownian", "rotational", "ou",
                                                 "cubic",    "sqrt-drift", "custom"};
  return names;
}

std::vector<KeySpec> schema(const std::string& section, const std::string& model_name,
                            const std::string& kind) {
  std::vector<KeySpec> s;
  if (section.empty()) {
    s.push_back(key("seed", Type::Seed, "1"));
    return s;
  }
  if (section == "model") {
    s.push_back(one_of(required("name", Type::Text), model_names()));
    if (model_name == "brownian" || model_name == "ou" || model_name == "custom")
      s.push_back(at_least(key("d", Type::Int, "1"), 1));
    if (model_name == "rotational") s.push_back(above(key("r", Type::Real, "1"), 0));
    if (model_name == "ou") s.push_back(key("a", Type::Real, "-1"));
    if (model_name == "custom") {
      s.push_back(at_least(key("m", Type::Int, "1"), 1));
      s.push_back(required("drift", Type::Text));
      s.push_back(required("diffusion", Type::Text));
    }
    s.push_back(at_least(key("truncate", Type::Real, "0"), 0));
    return s;
  }
  if (section != "experiment") return s;
  s.push_back(one_of(required("kind", Type::Text), experiment_kinds()));
  s.push_back(key("x0", Type::Reals, kZerosD));
  if (kind == "check") {
    s.push_back(one_of(key("condition", Type::Text, "growth"),
                       {"growth", "localized", "localized-weak", "modulus-continuity",
                        "integrability", "bounded-integrability", "osgood"}));
    s.push_back(key("envelope", Type::Text, "1"));
    s.push_back(key("modulus", Type::Text, "u"));
    s.push_back(above(key("K", Type::Real, "1"), 0));
    s.push_back(above(key("R", Type::Real, "1"), 0));
    s.push_back(below(above(key("c0", Type::Real, "0.5"), 0), 1));
    s.push_back(at_least(key("samples", Type::Int, "1000"), 1));
    s.push_back(at_least(key("radius_min", Type::Real, "0"), 0));
    s.push_back(above(key("radius_max", Type::Real, "10"), 0));
    s.push_back(at_least(key("gap_min", Type::Real, "0"), 0));
    s.push_back(above(key("gap_max", Type::Real, "1"), 0));
    s.push_back(one_of(key("radial", Type::Text, "uniform"), {"uniform", "log"}));
    s.push_back(one_of(key("modulus_kind", Type::Text, "near-zero"), {"near-zero", "at-infinity"}));
    s.push_back(above(key("anchor", Type::Real, "1"), 0));
    s.push_back(above(key("cutoff", Type::Real, "1e-12"), 0));
    s.push_back(at_least(key("per_decade", Type::Int, "4"), 1));
    s.push_back(above(key("threshold", Type::Real, "20"), 0));
  } else if (kind == "skeleton") {
    s.push_back(one_of(key("control", Type::Text, "zero"), {"zero", "line"}));
    s.push_back(key("slope", Type::Reals, kZerosM));
    s.push_back(at_least(key("intervals", Type::Int, "100"), 1));
    s.push_back(at_least(key("substeps", Type::Int, "10"), 1));
    s.push_back(at_least(key("n", Type::Ints, "10, 100, 1000"), 1));
    s.push_back(at_least(key("reference_steps", Type::Int, "100000"), 1));
  } else if (kind == "simulate") {
    s.push_back(at_least(key("epsilon", Type::Real, "0.1"), 0));
    s.push_back(at_least(key("n", Type::Int, "1000"), 1));
    s.push_back(at_least(key("replicas", Type::Int, "1000"), 1));
    s.push_back(at_least(key("paths", Type::Int, "1"), 0));
  } else if (kind == "rate") {
    s.push_back(required("targets", Type::Points));
    s.push_back(at_least(key("N", Type::Int, "100"), 1));
    s.push_back(at_least(key("substeps", Type::Int, "10"), 1));
    s.push_back(above(key("tolerance", Type::Real, "1e-5"), 0));
    s.push_back(at_least(key("max_iterations", Type::Int, "5000"), 1));
    s.push_back(above(key("gradient_tolerance", Type::Real, "1e-12"), 0));
    s.push_back(above(key("penalties", Type::Reals, "1, 10, 100, 1000, 10000, 100000, 1000000"), 0));
    s.push_back(at_least(key("starts", Type::Int, "1"), 1));
    s.push_back(at_least(key("gradient_probes", Type::Int, "0"), 0));
  } else if (kind == "ldp") {
    s.push_back(one_of(key("event", Type::Text, "halfspace"), {"halfspace", "ball", "sup-exit", "gap"}));
    s.push_back(key("a", Type::Reals, kOnesD));
    s.push_back(key("c", Type::Real, "1"));
    s.push_back(key("y0", Type::Reals, kZerosD));
    s.push_back(at_least(key("r", Type::Real, "1"), 0));
    s.push_back(above(key("R", Type::Real, "1"), 0));
    s.push_back(above(key("delta0", Type::Real, "0.1"), 0));
    s.push_back(at_least(key("n_fine", Type::Int, "1024"), 1));
    s.push_back(above(required("epsilons", Type::Reals), 0));
    s.push_back(at_least(key("n", Type::Int, "4096"), 1));
    s.push_back(at_least(key("replicas", Type::Int, "100000"), 1));
    s.push_back(key("rate_bound", Type::Text, "none"));
  } else if (kind == "lemma1") {
    s.push_back(at_least(key("epsilon", Type::Real, "0.04"), 0));
    s.push_back(at_least(key("n", Type::Ints, "4, 16, 64"), 1));
    s.push_back(at_least(key("n_fine", Type::Int, "1024"), 1));
    s.push_back(above(key("delta0", Type::Real, "0.3"), 0));
    s.push_back(at_least(key("replicas", Type::Int, "5000"), 1));
  } else if (kind == "exit") {
    s.push_back(at_least(key("epsilon", Type::Real, "0.1"), 0));
    s.push_back(at_least(key("n", Type::Int, "1000"), 1));
    s.push_back(at_least(key("replicas", Type::Int, "5000"), 1));
    s.push_back(above(key("radii", Type::Reals, "2, 3, 4"), 0));
  }
  return s;
}

RawConfig parse_text(std::string_view text, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  raw.sections[""];
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", source, line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ValidationError(where, "", "unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section != "model" && section != "experiment")
        throw ValidationError(where, section, "unknown section (expected [model] or [experiment])");
      if (raw.sections.count(section) && !raw.sections[section].empty())
        throw ValidationError(where, section, "section appears twice");
      raw.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ValidationError(where, "", "expected key = value");
    const std::string k = trim(std::string_view(t).substr(0, eq));
    if (k.empty()) throw ValidationError(where, "", "missing key before '='");
    auto& entries = raw.sections[section];
    if (entries.count(k))
      throw ValidationError(where, (section.empty() ? "" : section + ".") + k, "duplicate key");
    entries[k] = {trim(std::string_view(t).substr(eq + 1)), where};
  }
  return raw;
}

RawConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "", "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

void apply_override(RawConfig& raw, std::string_view assignment) {
  const std::string where = fmt::format("--set {}", assignment);
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ValidationError(where, "", "expected KEY=VALUE");
  std::string k = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  std::string section;
  if (const auto dot = k.find('.'); dot != std::string::npos) {
    section = k.substr(0, dot);
    k = k.substr(dot + 1);
    if (section != "model" && section != "experiment")
      throw ValidationError(where, section, "unknown section");
  } else {
    const std::string name = raw_text(raw, "model", "name");
    const std::string kind = raw_text(raw, "experiment", "kind");
    std::vector<std::string> hits;
    for (const std::string sec : {"", "model", "experiment"})
      for (const auto& spec : schema(sec, name, kind))
        if (spec.key == k) hits.push_back(sec);
    if (hits.empty()) throw ValidationError(where, k, "unknown key");
    section = hits.size() == 1 ? hits.front() : "experiment";
  }
  raw.sections[section][k] = {value, where};
}

const Value& Resolved::get(const std::string& section, const std::string& k) const {
  for (const auto& [name, entries] : sections_)
    if (name == section)
      for (const auto& [kk, v] : entries)
        if (kk == k) return v;
  throw ParameterError(fmt::format("configuration has no {}.{}", section, k));
}

bool Resolved::has(const std::string& section, const std::string& k) const {
  for (const auto& [name, entries] : sections_)
    if (name == section)
      for (const auto& [kk, v] : entries)
        if (kk == k) return true;
  return false;
}

long long Resolved::integer(const std::string& s, const std::string& k) const {
  return std::get<long long>(get(s, k));
}
std::uint64_t Resolved::seed() const { return std::get<std::uint64_t>(get("", "seed")); }
double Resolved::real(const std::string& s, const std::string& k) const {
  return std::get<double>(get(s, k));
}
bool Resolved::flag(const std::string& s, const std::string& k) const {
  return std::get<bool>(get(s, k));
}
const std::string& Resolved::text(const std::string& s, const std::string& k) const {
  return std::get<std::string>(get(s, k));
}
const std::vector<double>& Resolved::reals(const std::string& s, const std::string& k) const {
  return std::get<std::vector<double>>(get(s, k));
}
const std::vector<long long>& Resolved::integers(const std::string& s, const std::string& k) const {
  return std::get<std::vector<long long>>(get(s, k));
}
const std::vector<Vec>& Resolved::points(const std::string& s, const std::string& k) const {
  return std::get<std::vector<Vec>>(get(s, k));
}

void Resolved::set(const std::string& section, const std::string& k, Value v) {
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const auto& s) { return s.first == section; });
  if (it == sections_.end()) {
    sections_.push_back({section, {}});
    it = std::prev(sections_.end());
  }
  for (auto& [kk, old] : it->second)
    if (kk == k) {
      old = std::move(v);
      return;
    }
  it->second.emplace_back(k, std::move(v));
}

std::string format_value(const Value& v) {
  auto real = [](double x) { return fmt::format("{:.17g}", x); };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return real(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string out;
          for (double e : x) out += (out.empty() ? "" : ", ") + real(e);
          return out;
        } else if constexpr (std::is_same_v<T, std::vector<long long>>) {
          std::string out;
          for (long long e : x) out += (out.empty() ? "" : ", ") + std::to_string(e);
          return out;
        } else if constexpr (std::is_same_v<T, std::vector<Vec>>) {
          std::string out;
          for (const Vec& p : x) {
            std::string point;
            for (double e : p) point += (point.empty() ? "" : ", ") + real(e);
            out += (out.empty() ? "" : "; ") + point;
          }
          return out;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::string Resolved::to_text() const {
  std::string out;
  for (const auto& [name, entries] : sections_) {
    if (!name.empty()) out += fmt::format("\n[{}]\n", name);
    for (const auto& [k, v] : entries) out += fmt::format("{} = {}\n", k, format_value(v));
  }
  return out;
}

Resolved resolve(const RawConfig& raw) {
  Resolved r;
  const std::string name = raw_text(raw, "model", "name");
  const std::string kind = raw_text(raw, "experiment", "kind");
  std::map<std::string, std::string> origin;

  auto check_choice = [&](const std::string& section, const std::string& k,
                          const std::vector<std::string>& choices) {
    const auto s = raw.sections.find(section);
    if (s == raw.sections.end()) fail(raw.source, section, "", fmt::format("missing [{}] section", section));
    const auto e = s->second.find(k);
    if (e == s->second.end()) fail(raw.source, section, k, fmt::format("{} is required", k));
    KeySpec spec = one_of(required(k, Type::Text), choices);
    parse_value(spec, e->second.value, e->second.origin, section);
  };
  check_choice("model", "name", model_names());
  check_choice("experiment", "kind", experiment_kinds());

  for (const std::string section : {"", "model", "experiment"}) {
    const auto specs = schema(section, name, kind);
    const auto found = raw.sections.find(section);
    if (found != raw.sections.end())
      for (const auto& [k, entry] : found->second)
        if (std::none_of(specs.begin(), specs.end(), [&](const KeySpec& s) { return s.key == k; }))
          fail(entry.origin, section, k,
               section == "experiment" && !kind.empty()
                   ? fmt::format("unknown key for experiment kind '{}'", kind)
               : section == "model" && !name.empty()
                   ? fmt::format("unknown key for model '{}'", name)
                   : std::string("unknown key"));
    for (const auto& spec : specs) {
      const Entry* entry = nullptr;
      if (found != raw.sections.end())
        if (const auto e = found->second.find(spec.key); e != found->second.end()) entry = &e->second;
      if (!entry && spec.required)
        fail(raw.source, section, spec.key, fmt::format("{} is required", spec.key));
      const std::string text = entry ? entry->value : spec.fallback;
      const std::string where = entry ? entry->origin : "default";
      origin[section + "." + spec.key] = where;
      if (!entry && (text == kZerosD || text == kOnesD || text == kZerosM)) {
        r.set(section, spec.key, std::string(text));  // placeholder, replaced below
        continue;
      }
      r.set(section, spec.key, parse_value(spec, text, where, section));
    }
  }

  const int d = model_dim(r);
  const int m = model_noise_dim(r);
  for (const auto& spec : schema("experiment", name, kind)) {
    const Value& v = r.get("experiment", spec.key);
    if (const auto* s = std::get_if<std::string>(&v); s && spec.type == Type::Reals) {
      const double fill = *s == kOnesD ? 1.0 : 0.0;
      const int size = *s == kZerosM ? m : d;
      r.set("experiment", spec.key, std::vector<double>(static_cast<std::size_t>(size), fill));
    }
  }
  auto where = [&](const std::string& section, const std::string& k) { return origin[section + "." + k]; };
  auto require_dim = [&](const std::string& k, std::size_t size, int expect, const char* what) {
    if (size != static_cast<std::size_t>(expect))
      fail(where("experiment", k), "experiment", k,
           fmt::format("{} must have {} components ({}), got {}", k, expect, what, size));
  };

  if (name == "custom") {
    const auto drift = split(r.text("model", "drift"), ';');
    const auto diffusion = split(r.text("model", "diffusion"), ';');
    try {
      expr::make_expression_field("custom", d, m, drift, diffusion);
    } catch (const ParameterError& e) {
      const bool is_drift = std::string(e.what()).rfind("drift", 0) == 0;
      fail(where("model", is_drift ? "drift" : "diffusion"), "model", is_drift ? "drift" : "diffusion",
           e.what());
    }
  }

  require_dim("x0", r.reals("experiment", "x0").size(), d, "the state dimension");
  if (kind == "check") {
    const expr::Symbols t_only{0, true, false};
    const expr::Symbols u_only{0, false, true};
    try {
      expr::Expression::parse(r.text("experiment", "envelope"), t_only);
    } catch (const ParameterError& e) {
      fail(where("experiment", "envelope"), "experiment", "envelope", e.what());
    }
    try {
      expr::Expression::parse(r.text("experiment", "modulus"), u_only);
    } catch (const ParameterError& e) {
      fail(where("experiment", "modulus"), "experiment", "modulus", e.what());
    }
    if (!(r.real("experiment", "radius_max") > r.real("experiment", "radius_min")))
      fail(where("experiment", "radius_max"), "experiment", "radius_max",
           "radius_max must be > radius_min");
    if (!(r.real("experiment", "gap_max") > r.real("experiment", "gap_min")))
      fail(where("experiment", "gap_max"), "experiment", "gap_max", "gap_max must be > gap_min");
    const auto& condition = r.text("experiment", "condition");
    if (condition == "osgood") {
      const bool near = r.text("experiment", "modulus_kind") == "near-zero";
      const double anchor = r.real("experiment", "anchor");
      const double cutoff = r.real("experiment", "cutoff");
      if (near ? !(cutoff < anchor) : !(cutoff > anchor))
        fail(where("experiment", "cutoff"), "experiment", "cutoff",
             near ? "cutoff must be < anchor for a near-zero modulus"
                  : "cutoff must be > anchor for an at-infinity modulus");
    }
    if (condition == "bounded-integrability" && r.real("model", "truncate") == 0.0)
      fail(where("model", "truncate"), "model", "truncate",
           "bounded-integrability needs a truncated model (truncate > 0)");
  } else if (kind == "skeleton") {
    require_dim("slope", r.reals("experiment", "slope").size(), m, "the noise dimension");
    for (long long n : r.integers("experiment", "n"))
      if (r.integer("experiment", "reference_steps") < 10 * n)
        fail(where("experiment", "reference_steps"), "experiment", "reference_steps",
             "reference_steps must be ≥ 10 n for every n");
  } else if (kind == "rate") {
    const auto& targets = r.points("experiment", "targets");
    if (targets.empty())
      fail(where("experiment", "targets"), "experiment", "targets", "targets must be nonempty");
    for (const auto& y : targets) require_dim("targets", y.size(), d, "the state dimension");
    const auto& mu = r.reals("experiment", "penalties");
    if (mu.empty())
      fail(where("experiment", "penalties"), "experiment", "penalties", "penalties must be nonempty");
    for (std::size_t j = 1; j < mu.size(); ++j)
      if (!(mu[j] > mu[j - 1]))
        fail(where("experiment", "penalties"), "experiment", "penalties",
             "penalties must be strictly increasing");
  } else if (kind == "ldp") {
    const auto& eps = r.reals("experiment", "epsilons");
    if (eps.empty())
      fail(where("experiment", "epsilons"), "experiment", "epsilons", "epsilons must be nonempty");
    for (std::size_t j = 1; j < eps.size(); ++j)
      if (!(eps[j] < eps[j - 1]))
        fail(where("experiment", "epsilons"), "experiment", "epsilons",
             "epsilons must be strictly decreasing");
    require_dim("a", r.reals("experiment", "a").size(), d, "the state dimension");
    require_dim("y0", r.reals("experiment", "y0").size(), d, "the state dimension");
    const auto& event = r.text("experiment", "event");
    if (event == "gap" && r.integer("experiment", "n_fine") % r.integer("experiment", "n") != 0)
      fail(where("experiment", "n_fine"), "experiment", "n_fine", "n_fine must be a multiple of n");
    const auto& bound = r.text("experiment", "rate_bound");
    bool ok = bound == "none" || bound == "solve";
    if (!ok) parse_real(bound, ok);
    if (!ok)
      fail(where("experiment", "rate_bound"), "experiment", "rate_bound",
           "rate_bound must be none, solve, or a number");
    if (bound == "solve" && (event != "halfspace" || d != 1))
      fail(where("experiment", "rate_bound"), "experiment", "rate_bound",
           "rate_bound = solve needs a halfspace event on a one-dimensional model");
  } else if (kind == "lemma1") {
    const auto& ns = r.integers("experiment", "n");
    if (ns.empty()) fail(where("experiment", "n"), "experiment", "n", "n must be nonempty");
    for (long long n : ns)
      if (r.integer("experiment", "n_fine") % n != 0)
        fail(where("experiment", "n"), "experiment", "n", "every n must divide n_fine");
  } else if (kind == "exit") {
    if (r.reals("experiment", "radii").empty())
      fail(where("experiment", "radii"), "experiment", "radii", "radii must be nonempty");
  }
  return r;
}

}  // namespace ldp::config
