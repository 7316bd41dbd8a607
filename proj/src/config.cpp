#include "mgn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_real(const std::string& text, std::size_t line, const std::string& key) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, key + ": expected a number, got '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& text, std::size_t line, const std::string& key) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, key + ": expected a nonnegative integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, std::size_t line, const std::string& key) {
  const std::string t = lower(text);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ParseError(line, key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, std::size_t line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_real(item, line, key));
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

void set_natural_thetas(ExperimentConfig& c) {
  c.theta1 = 1.0 / 15.0;
  c.theta2 = 1.0 / (15.0 * c.params.delta * c.params.delta);
}

}  // namespace

const char* to_string(ModelKind kind) {
  return kind == ModelKind::SaintVenant ? "sv" : "gn";
}

const char* to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::Rest: return "rest";
    case InitialKind::Mode: return "mode";
    case InitialKind::ShearMode: return "shear_mode";
  }
  return "?";
}

MultiplierSpec ExperimentConfig::multiplier_spec() const {
  if (multiplier == "id") return MultiplierSpec::identity();
  if (multiplier == "imp") return MultiplierSpec::improved();
  if (multiplier == "reg") {
    if (theta_natural) return MultiplierSpec::regularized_natural(params.delta);
    return MultiplierSpec::regularized(theta1, theta2);
  }
  if (multiplier.rfind("custom:", 0) == 0) {
    return MultiplierSpec::custom(load_custom_table(multiplier.substr(7)));
  }
  throw ValidationError("multiplier", "unknown multiplier '" + multiplier +
                                          "' (expected id, reg, imp or custom:<path>)");
}

void ExperimentConfig::validate() const {
  params.validate();
  require(multiplier == "id" || multiplier == "reg" || multiplier == "imp" ||
              (multiplier.rfind("custom:", 0) == 0 && multiplier.size() > 7),
          "multiplier", "expected id, reg, imp or custom:<path>");
  require(std::isfinite(theta1) && theta1 > 0.0, "theta1", "must be positive");
  require(std::isfinite(theta2) && theta2 > 0.0, "theta2", "must be positive");
  require(n >= 8 && (n & (n - 1)) == 0, "n", "must be a power of two >= 8");
  require(std::isfinite(half_length) && half_length > 0.0, "half_length", "must be positive");
  require(std::isfinite(t_end) && t_end > 0.0, "t_end", "must be positive");
  require(std::isfinite(rel_tol) && rel_tol > 0.0, "rel_tol", "must be positive");
  require(std::isfinite(abs_tol) && abs_tol > 0.0, "abs_tol", "must be positive");
  require(std::isfinite(min_dt) && min_dt > 0.0, "min_dt", "must be positive");
  require(std::isfinite(ic_amplitude), "ic_amplitude", "must be finite");
  require(std::isfinite(ic_width) && ic_width > 0.0, "ic_width", "must be positive");
  require(ic_mode >= 1 && ic_mode < n / 2, "ic_mode", "must lie in [1, n/2)");
  require(std::isfinite(ic_shear), "ic_shear", "must be finite");
  for (double s : snapshot_times) {
    require(std::isfinite(s) && s >= 0.0 && s <= t_end, "snapshot_times",
            "every time must lie in [0, t_end]");
  }
  require(diag_stride >= 1, "diag_stride", "must be >= 1");
  require(std::isfinite(cg_tol) && cg_tol > 0.0, "cg_tol", "must be positive");
  require(cg_max_iter >= 1, "cg_max_iter", "must be >= 1");
  require(std::isfinite(k_band) && k_band >= 0.0, "k_band", "must be >= 0");
  require(std::isfinite(k_min) && k_min > 0.0, "k_min", "must be positive");
  require(std::isfinite(k_max) && k_max >= k_min, "k_max", "must be >= k_min");
  require(k_count >= 1, "k_count", "must be >= 1");
  require(std::isfinite(admissibility_k_max) && admissibility_k_max > 0.0,
          "admissibility_k_max", "must be positive");
  require(admissibility_samples >= 100, "admissibility_samples", "must be >= 100");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  bool theta1_set = false;
  bool theta2_set = false;

  using Setter = std::function<void(const std::string&, std::size_t, const std::string&)>;
  auto real = [](double& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t line, const std::string& key) {
      dst = parse_real(v, line, key);
    };
  };
  auto count = [](std::size_t& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t line, const std::string& key) {
      dst = parse_count(v, line, key);
    };
  };
  auto flag = [](bool& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t line, const std::string& key) {
      dst = parse_bool(v, line, key);
    };
  };
  auto theta = [&c](double& dst, bool& set) -> Setter {
    return [&c, &dst, &set](const std::string& v, std::size_t line, const std::string& key) {
      if (lower(v) == "natural") return;
      dst = parse_real(v, line, key);
      set = true;
      c.theta_natural = false;
    };
  };

  const std::map<std::string, Setter> setters = {
      {"gamma", real(c.params.gamma)},
      {"epsilon", real(c.params.epsilon)},
      {"mu", real(c.params.mu)},
      {"delta", real(c.params.delta)},
      {"inv_bond", real(c.params.inv_bond)},
      {"model",
       [&c](const std::string& v, std::size_t line, const std::string&) {
         const std::string t = lower(v);
         if (t == "gn") c.model = ModelKind::GreenNaghdi;
         else if (t == "sv") c.model = ModelKind::SaintVenant;
         else throw ParseError(line, "model: expected gn or sv, got '" + v + "'");
       }},
      {"multiplier", [&c](const std::string& v, std::size_t, const std::string&) { c.multiplier = v; }},
      {"theta1", theta(c.theta1, theta1_set)},
      {"theta2", theta(c.theta2, theta2_set)},
      {"n", count(c.n)},
      {"half_length", real(c.half_length)},
      {"t_end", real(c.t_end)},
      {"rel_tol", real(c.rel_tol)},
      {"abs_tol", real(c.abs_tol)},
      {"min_dt", real(c.min_dt)},
      {"initial",
       [&c](const std::string& v, std::size_t line, const std::string&) {
         const std::string t = lower(v);
         if (t == "gaussian") c.initial = InitialKind::Gaussian;
         else if (t == "rest") c.initial = InitialKind::Rest;
         else if (t == "mode") c.initial = InitialKind::Mode;
         else if (t == "shear_mode") c.initial = InitialKind::ShearMode;
         else
           throw ParseError(line, "initial: expected gaussian, rest, mode or shear_mode, got '" +
                                      v + "'");
       }},
      {"ic_amplitude", real(c.ic_amplitude)},
      {"ic_width", real(c.ic_width)},
      {"ic_mode", count(c.ic_mode)},
      {"ic_shear", real(c.ic_shear)},
      {"snapshot_times",
       [&c](const std::string& v, std::size_t line, const std::string&) {
         c.snapshot_times = parse_list(v, line, "snapshot_times");
       }},
      {"spectra", flag(c.spectra)},
      {"diag_stride", count(c.diag_stride)},
      {"dealias", flag(c.dealias)},
      {"cg_tol", real(c.cg_tol)},
      {"cg_max_iter", count(c.cg_max_iter)},
      {"k_band", real(c.k_band)},
      {"k_min", real(c.k_min)},
      {"k_max", real(c.k_max)},
      {"k_count", count(c.k_count)},
      {"admissibility_k_max", real(c.admissibility_k_max)},
      {"admissibility_samples", count(c.admissibility_samples)},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(line, "duplicate key '" + key + "'");
    if (value.empty() && key != "snapshot_times") {
      throw ParseError(line, key + ": missing value");
    }
    it->second(value, line, key);
  }

  if (c.params.delta > 0.0 && std::isfinite(c.params.delta)) {
    const double t1 = c.theta1, t2 = c.theta2;
    set_natural_thetas(c);
    if (theta1_set) c.theta1 = t1;
    if (theta2_set) c.theta2 = t2;
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "gamma = " << fmt(c.params.gamma) << '\n'
      << "epsilon = " << fmt(c.params.epsilon) << '\n'
      << "mu = " << fmt(c.params.mu) << '\n'
      << "delta = " << fmt(c.params.delta) << '\n'
      << "inv_bond = " << fmt(c.params.inv_bond) << '\n'
      << "model = " << to_string(c.model) << '\n'
      << "multiplier = " << c.multiplier << '\n'
      << "theta1 = " << (c.theta_natural ? std::string("natural") : fmt(c.theta1)) << '\n'
      << "theta2 = " << (c.theta_natural ? std::string("natural") : fmt(c.theta2)) << '\n'
      << "n = " << c.n << '\n'
      << "half_length = " << fmt(c.half_length) << '\n'
      << "t_end = " << fmt(c.t_end) << '\n'
      << "rel_tol = " << fmt(c.rel_tol) << '\n'
      << "abs_tol = " << fmt(c.abs_tol) << '\n'
      << "min_dt = " << fmt(c.min_dt) << '\n'
      << "initial = " << to_string(c.initial) << '\n'
      << "ic_amplitude = " << fmt(c.ic_amplitude) << '\n'
      << "ic_width = " << fmt(c.ic_width) << '\n'
      << "ic_mode = " << c.ic_mode << '\n'
      << "ic_shear = " << fmt(c.ic_shear) << '\n'
      << "snapshot_times =";
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    out << (i == 0 ? " " : ", ") << fmt(c.snapshot_times[i]);
  }
  out << '\n'
      << "spectra = " << (c.spectra ? "true" : "false") << '\n'
      << "diag_stride = " << c.diag_stride << '\n'
      << "dealias = " << (c.dealias ? "true" : "false") << '\n'
      << "cg_tol = " << fmt(c.cg_tol) << '\n'
      << "cg_max_iter = " << c.cg_max_iter << '\n'
      << "k_band = " << fmt(c.k_band) << '\n'
      << "k_min = " << fmt(c.k_min) << '\n'
      << "k_max = " << fmt(c.k_max) << '\n'
      << "k_count = " << c.k_count << '\n'
      << "admissibility_k_max = " << fmt(c.admissibility_k_max) << '\n'
      << "admissibility_samples = " << c.admissibility_samples << '\n';
  return out.str();
}

}  // namespace mgn
