#include "sdelab/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

std::string type_name(const TomlValue& v) {
  switch (v.value.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

[[noreturn]] void type_error(const std::string& key, const std::string& want, const TomlValue& got) {
  throw ValidationError("key '" + key + "': expected " + want + ", got " + type_name(got));
}

class TomlReader {
 public:
  explicit TomlReader(const std::string& text) : text_(text) {}

  TomlTable run() {
    TomlTable table;
    std::string section;
    std::istringstream in(text_);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      line_ = line;
      pos_ = 0;
      skip();
      if (at_end() || peek() == '#') continue;
      if (peek() == '[') {
        ++pos_;
        skip();
        section = key();
        skip();
        if (!accept(']')) fail("expected ']'");
        end_of_line();
        continue;
      }
      const std::string k = key();
      skip();
      if (!accept('=')) fail("expected '='");
      TomlValue v = value();
      end_of_line();
      const std::string full = section.empty() ? k : section + "." + k;
      if (!table.emplace(full, std::move(v)).second) fail("duplicate key '" + full + "'");
    }
    return table;
  }

 private:
  const std::string& text_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("config line " + std::to_string(line_no_) + ": " + what);
  }
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void skip() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }
  bool accept(char c) {
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void end_of_line() {
    skip();
    if (!at_end() && peek() != '#') fail("trailing characters");
  }

  std::string key() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) fail("expected a key");
    return line_.substr(start, pos_ - start);
  }

  TomlValue value() {
    skip();
    if (at_end()) fail("missing value");
    const char c = peek();
    if (c == '"' || c == '\'') return TomlValue{string(c)};
    if (c == '[') {
      ++pos_;
      TomlValue::Array items;
      skip();
      if (accept(']')) return TomlValue{std::move(items)};
      for (;;) {
        items.push_back(value());
        skip();
        if (accept(',')) {
          skip();
          if (accept(']')) break;
          continue;
        }
        if (accept(']')) break;
        fail("expected ',' or ']' in array");
      }
      return TomlValue{std::move(items)};
    }
    const std::size_t start = pos_;
    while (!at_end() && peek() != ',' && peek() != ']' && peek() != '#' && peek() != ' ' && peek() != '\t') ++pos_;
    std::string tok = line_.substr(start, pos_ - start);
    if (tok == "true") return TomlValue{true};
    if (tok == "false") return TomlValue{false};
    if (tok == "inf" || tok == "+inf") return TomlValue{std::numeric_limits<double>::infinity()};
    if (tok == "-inf") return TomlValue{-std::numeric_limits<double>::infinity()};
    if (tok == "nan" || tok == "+nan" || tok == "-nan") return TomlValue{std::numeric_limits<double>::quiet_NaN()};
    std::string digits;
    for (char ch : tok)
      if (ch != '_') digits += ch;
    const char* b = digits.data();
    const char* e = b + digits.size();
    if (!digits.empty() && digits[0] == '+') ++b;
    const bool integral = digits.find_first_of(".eE") == std::string::npos;
    if (integral) {
      std::int64_t i = 0;
      const auto [p, ec] = std::from_chars(b, e, i);
      if (ec == std::errc() && p == e) return TomlValue{i};
    } else {
      double d = 0.0;
      const auto [p, ec] = std::from_chars(b, e, d);
      if (ec == std::errc() && p == e) return TomlValue{d};
    }
    fail("cannot parse value '" + tok + "'");
  }

  std::string string(char quote) {
    ++pos_;
    std::string out;
    while (!at_end() && peek() != quote) {
      char c = line_[pos_++];
      if (quote == '"' && c == '\\') {
        if (at_end()) fail("dangling escape");
        const char e = line_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (!accept(quote)) fail("unterminated string");
    return out;
  }
};

const std::vector<std::string> kTopKeys = {
    "experiment", "seed", "paths", "threads", "n", "mn", "p", "q", "alpha", "gamma", "eps",
    "mode", "payoff", "target", "point", "refine", "levels", "base_n", "bv", "bv_constant",
    "override_cfl", "output", "format"};
const std::vector<std::string> kModelKeys = {
    "driver", "preset", "drift", "diffusion", "initial", "mu", "x0", "horizon", "taming", "ell",
    "hurst", "stable_index", "atoms", "drift_bound", "diffusion_bound", "ellipticity",
    "growth_exponent", "linear_growth"};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& k : v) s += (s.empty() ? "" : ", ") + k;
  return s;
}

template <class E>
E enum_from(const std::string& key, const std::string& name, std::initializer_list<E> values) {
  std::vector<std::string> names;
  for (E v : values) {
    if (to_string(v) == name) return v;
    names.push_back(to_string(v));
  }
  throw ValidationError("key '" + key + "': unknown value '" + name + "' (allowed: " + join(names) + ")");
}

std::size_t count(const TomlValue& v, const std::string& key) {
  const auto i = v.as_int(key);
  if (i < 0) throw ValidationError("key '" + key + "': must be nonnegative");
  return static_cast<std::size_t>(i);
}

std::vector<std::pair<double, double>> pairs(const TomlValue& v, const std::string& key) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : v.as_array(key)) {
    const auto& pr = item.as_array(key);
    if (pr.size() != 2) throw ValidationError("key '" + key + "': expected pairs [a, b]");
    out.emplace_back(pr[0].as_double(key), pr[1].as_double(key));
  }
  return out;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string fmt_pairs(const std::vector<std::pair<double, double>>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", [" : "[") + fmt_double(v[i].first) + ", " + fmt_double(v[i].second) + "]";
  return s + "]";
}

}  // namespace

bool TomlValue::is_number() const noexcept { return value.index() == 1 || value.index() == 2; }

double TomlValue::as_double(const std::string& key) const {
  if (auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&value)) return *d;
  type_error(key, "number", *this);
}

std::int64_t TomlValue::as_int(const std::string& key) const {
  if (auto* i = std::get_if<std::int64_t>(&value)) return *i;
  type_error(key, "integer", *this);
}

bool TomlValue::as_bool(const std::string& key) const {
  if (auto* b = std::get_if<bool>(&value)) return *b;
  type_error(key, "boolean", *this);
}

const std::string& TomlValue::as_string(const std::string& key) const {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  type_error(key, "string", *this);
}

const TomlValue::Array& TomlValue::as_array(const std::string& key) const {
  if (auto* a = std::get_if<Array>(&value)) return *a;
  type_error(key, "array", *this);
}

TomlTable parse_toml(const std::string& text) { return TomlReader(text).run(); }

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::strong_rate: return "strong-rate";
    case ExperimentKind::weak_rate: return "weak-rate";
    case ExperimentKind::avikainen_verify: return "avikainen-verify";
    case ExperimentKind::mlmc: return "mlmc";
    case ExperimentKind::she_rate: return "she-rate";
    case ExperimentKind::max_functional: return "max-functional";
    case ExperimentKind::time_avg_bv: return "time-avg-bv";
  }
  return "unknown";
}

std::string to_string(Driver driver) {
  switch (driver) {
    case Driver::bm: return "bm";
    case Driver::stable: return "stable";
    case Driver::fbm: return "fbm";
    case Driver::she: return "she";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text) {
  const TomlTable table = parse_toml(text);
  ExperimentConfig c;
  bool have_kind = false;
  for (const auto& [full, v] : table) {
    const auto dot = full.find('.');
    if (dot != std::string::npos) {
      const std::string section = full.substr(0, dot);
      const std::string k = full.substr(dot + 1);
      if (section != "model") throw ValidationError("unknown section '" + section + "' (allowed: model)");
      auto& m = c.model;
      if (k == "driver") m.driver = enum_from(full, v.as_string(full), {Driver::bm, Driver::stable, Driver::fbm, Driver::she});
      else if (k == "preset") m.preset = v.as_string(full);
      else if (k == "drift") m.drift = v.as_string(full);
      else if (k == "diffusion") m.diffusion = v.as_string(full);
      else if (k == "initial") m.initial = v.as_string(full);
      else if (k == "mu") m.mu = v.as_string(full);
      else if (k == "x0") m.x0 = v.as_double(full);
      else if (k == "horizon") m.horizon = v.as_double(full);
      else if (k == "taming") {
        const auto& s = v.as_string(full);
        if (s != "none" && s != "drift" && s != "full")
          throw ValidationError("key 'model.taming': unknown value '" + s + "' (allowed: none, drift, full)");
        m.taming = s;
      } else if (k == "ell") m.ell = v.as_double(full);
      else if (k == "hurst") m.hurst = v.as_double(full);
      else if (k == "stable_index") m.stable_index = v.as_double(full);
      else if (k == "atoms") m.atoms = pairs(v, full);
      else if (k == "drift_bound") m.drift_bound = v.as_double(full);
      else if (k == "diffusion_bound") m.diffusion_bound = v.as_double(full);
      else if (k == "ellipticity") m.ellipticity = v.as_double(full);
      else if (k == "growth_exponent") m.growth_exponent = v.as_double(full);
      else if (k == "linear_growth") m.linear_growth = v.as_double(full);
      else throw ValidationError("unknown key '" + full + "' (allowed in [model]: " + join(kModelKeys) + ")");
      continue;
    }
    const std::string& k = full;
    if (k == "experiment") {
      c.kind = enum_from(k, v.as_string(k),
                         {ExperimentKind::strong_rate, ExperimentKind::weak_rate, ExperimentKind::avikainen_verify,
                          ExperimentKind::mlmc, ExperimentKind::she_rate, ExperimentKind::max_functional,
                          ExperimentKind::time_avg_bv});
      have_kind = true;
    } else if (k == "seed") {
      const auto s = v.as_int(k);
      if (s < 0) throw ValidationError("key 'seed': must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (k == "paths") c.paths = count(v, k);
    else if (k == "threads") c.threads = count(v, k);
    else if (k == "n") {
      c.n.clear();
      for (const auto& item : v.as_array(k)) c.n.push_back(count(item, k));
    } else if (k == "mn") {
      c.mn.clear();
      for (const auto& item : v.as_array(k)) {
        const auto& pr = item.as_array(k);
        if (pr.size() != 2) throw ValidationError("key 'mn': expected pairs [m, n]");
        c.mn.emplace_back(count(pr[0], k), count(pr[1], k));
      }
    } else if (k == "p") c.p = v.as_double(k);
    else if (k == "q") c.q = v.as_double(k);
    else if (k == "alpha") c.alpha = v.as_double(k);
    else if (k == "gamma") c.gamma = v.as_double(k);
    else if (k == "eps") c.eps = v.as_double(k);
    else if (k == "mode") {
      const auto& s = v.as_string(k);
      if (s != "terminal" && s != "sup")
        throw ValidationError("key 'mode': unknown value '" + s + "' (allowed: terminal, sup)");
      c.mode = s;
    } else if (k == "payoff") c.payoff = v.as_string(k);
    else if (k == "target") c.target = v.as_double(k);
    else if (k == "point") c.point = v.as_double(k);
    else if (k == "refine") c.refine = count(v, k);
    else if (k == "levels") c.levels = count(v, k);
    else if (k == "base_n") c.base_n = count(v, k);
    else if (k == "bv") c.bv = pairs(v, k);
    else if (k == "bv_constant") c.bv_constant = v.as_double(k);
    else if (k == "override_cfl") c.override_cfl = v.as_bool(k);
    else if (k == "output") c.output = v.as_string(k);
    else if (k == "format") {
      const auto& s = v.as_string(k);
      if (s != "csv" && s != "json" && s != "both")
        throw ValidationError("key 'format': unknown value '" + s + "' (allowed: csv, json, both)");
      c.format = s;
    } else {
      throw ValidationError("unknown key '" + k + "' (allowed: " + join(kTopKeys) + ", [model])");
    }
  }
  if (!have_kind) throw ValidationError("missing key 'experiment'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment = " << fmt_string(to_string(c.kind)) << '\n';
  o << "seed = " << c.seed << '\n';
  o << "paths = " << c.paths << '\n';
  if (c.threads) o << "threads = " << *c.threads << '\n';
  if (!c.n.empty()) {
    o << "n = [";
    for (std::size_t i = 0; i < c.n.size(); ++i) o << (i ? ", " : "") << c.n[i];
    o << "]\n";
  }
  if (!c.mn.empty()) {
    o << "mn = [";
    for (std::size_t i = 0; i < c.mn.size(); ++i) o << (i ? ", " : "") << '[' << c.mn[i].first << ", " << c.mn[i].second << ']';
    o << "]\n";
  }
  auto num = [&](const char* key, const std::optional<double>& v) {
    if (v) o << key << " = " << fmt_double(*v) << '\n';
  };
  auto cnt = [&](const char* key, const std::optional<std::size_t>& v) {
    if (v) o << key << " = " << *v << '\n';
  };
  auto str = [&](const char* key, const std::optional<std::string>& v) {
    if (v) o << key << " = " << fmt_string(*v) << '\n';
  };
  num("p", c.p);
  num("q", c.q);
  num("alpha", c.alpha);
  num("gamma", c.gamma);
  num("eps", c.eps);
  str("mode", c.mode);
  str("payoff", c.payoff);
  num("target", c.target);
  num("point", c.point);
  cnt("refine", c.refine);
  cnt("levels", c.levels);
  cnt("base_n", c.base_n);
  if (c.bv) o << "bv = " << fmt_pairs(*c.bv) << '\n';
  num("bv_constant", c.bv_constant);
  if (c.override_cfl) o << "override_cfl = " << (*c.override_cfl ? "true" : "false") << '\n';
  o << "output = " << fmt_string(c.output) << '\n';
  o << "format = " << fmt_string(c.format) << '\n';

  const auto& m = c.model;
  o << "\n[model]\n";
  if (m.driver) o << "driver = " << fmt_string(to_string(*m.driver)) << '\n';
  str("preset", m.preset);
  str("drift", m.drift);
  str("diffusion", m.diffusion);
  str("initial", m.initial);
  str("mu", m.mu);
  num("x0", m.x0);
  num("horizon", m.horizon);
  str("taming", m.taming);
  num("ell", m.ell);
  num("hurst", m.hurst);
  num("stable_index", m.stable_index);
  if (m.atoms) o << "atoms = " << fmt_pairs(*m.atoms) << '\n';
  num("drift_bound", m.drift_bound);
  num("diffusion_bound", m.diffusion_bound);
  num("ellipticity", m.ellipticity);
  num("growth_exponent", m.growth_exponent);
  num("linear_growth", m.linear_growth);
  return o.str();
}

}  // namespace sdelab
