#include "mgn/multipliers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

// F^2(x) = 3 (x coth x - 1) / x^2 = sum_n 3 * 4^n B_2n / (2n)! x^(2n-2).
constexpr std::array<double, 12> kImprovedSeries = {
    1.0,
    -1.0 / 15.0,
    2.0 / 315.0,
    -1.0 / 1575.0,
    2.0 / 31185.0,
    -1382.0 / 212837625.0,
    4.0 / 6081075.0,
    -3617.0 / 54273594375.0,
    87734.0 / 12993098493375.0,
    -349222.0 / 510443155096875.0,
    310732.0 / 4482618980214375.0,
    -472728182.0 / 67306523987918840625.0,
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double table_lookup(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
  if (x >= xs.back()) return fs.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return fs[lo] + t * (fs[hi] - fs[lo]);
}

}  // namespace

double improved_F_squared(double x) {
  x = std::abs(x);
  if (x < kImprovedSeriesSwitch) {
    const double x2 = x * x;
    double sum = 0.0;
    for (auto it = kImprovedSeries.rbegin(); it != kImprovedSeries.rend(); ++it) {
      sum = sum * x2 + *it;
    }
    return sum;
  }
  return 3.0 / (x * std::tanh(x)) - 3.0 / (x * x);
}

double CustomTable::eval(Layer layer, double x) const {
  x = std::abs(x);
  return table_lookup(xi, layer == Layer::Upper ? f1 : f2, x);
}

CustomTable parse_custom_table(const std::string& text, const std::string& source) {
  CustomTable table;
  table.source = source;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      double v = 0.0;
      if (!parse_double(c, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (table.xi.empty() && columns == 0) {
        columns = cells.size();  // header
        continue;
      }
      throw ParseError(line_no, "non-numeric multiplier table row");
    }
    if (row.size() != 2 && row.size() != 3) {
      throw ParseError(line_no, "multiplier table rows need 2 or 3 columns");
    }
    if (table.xi.empty()) {
      columns = row.size();
    } else if (row.size() != columns) {
      throw ParseError(line_no, "inconsistent column count in multiplier table");
    }
    table.xi.push_back(row[0]);
    table.f1.push_back(row[1]);
    table.f2.push_back(row.size() == 3 ? row[2] : row[1]);
  }
  if (table.xi.size() < 2) {
    throw ValidationError("multiplier", "custom table needs at least two rows");
  }
  if (table.xi.front() != 0.0) {
    throw ValidationError("multiplier", "custom table must start at k = 0");
  }
  for (std::size_t i = 1; i < table.xi.size(); ++i) {
    if (!(table.xi[i] > table.xi[i - 1])) {
      throw ValidationError("multiplier", "custom table abscissae must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < table.xi.size(); ++i) {
    if (!(table.f1[i] >= 0.0) || !(table.f2[i] >= 0.0) || !std::isfinite(table.f1[i]) ||
        !std::isfinite(table.f2[i])) {
      throw ValidationError("multiplier", "custom table values must be finite and >= 0");
    }
  }
  if (std::abs(table.f1[0] - 1.0) > 1e-12 || std::abs(table.f2[0] - 1.0) > 1e-12) {
    throw ValidationError("multiplier", "custom table must satisfy F(0) = 1");
  }
  return table;
}

CustomTable load_custom_table(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw IoError("cannot open multiplier table: " + path);
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_custom_table(buffer.str(), path);
}

MultiplierSpec MultiplierSpec::identity() { return MultiplierSpec{}; }

MultiplierSpec MultiplierSpec::regularized(double theta1, double theta2) {
  MultiplierSpec spec;
  spec.kind = MultiplierKind::Regularized;
  spec.theta1 = theta1;
  spec.theta2 = theta2;
  spec.validate();
  return spec;
}

MultiplierSpec MultiplierSpec::regularized_natural(double delta) {
  return regularized(1.0 / 15.0, 1.0 / (15.0 * delta * delta));
}

MultiplierSpec MultiplierSpec::improved() {
  MultiplierSpec spec;
  spec.kind = MultiplierKind::Improved;
  return spec;
}

MultiplierSpec MultiplierSpec::custom(CustomTable table) {
  MultiplierSpec spec;
  spec.kind = MultiplierKind::Custom;
  spec.table = std::make_shared<const CustomTable>(std::move(table));
  return spec;
}

std::string MultiplierSpec::name() const {
  switch (kind) {
    case MultiplierKind::Identity:
      return "id";
    case MultiplierKind::Regularized:
      return "reg";
    case MultiplierKind::Improved:
      return "imp";
    case MultiplierKind::Custom:
      return "custom:" + (table ? table->source : std::string());
  }
  return "?";
}

void MultiplierSpec::validate() const {
  if (kind == MultiplierKind::Regularized) {
    if (!(theta1 > 0.0) || !std::isfinite(theta1)) {
      throw ValidationError("theta1", "must be > 0");
    }
    if (!(theta2 > 0.0) || !std::isfinite(theta2)) {
      throw ValidationError("theta2", "must be > 0");
    }
  }
  if (kind == MultiplierKind::Custom && !table) {
    throw ValidationError("multiplier", "custom multiplier without a table");
  }
}

double eval_F(const MultiplierSpec& spec, Layer layer, double k, double mu, double delta) {
  const double xi = std::sqrt(mu) * std::abs(k);
  switch (spec.kind) {
    case MultiplierKind::Identity:
      return 1.0;
    case MultiplierKind::Regularized: {
      const double theta = layer == Layer::Upper ? spec.theta1 : spec.theta2;
      return 1.0 / std::sqrt(1.0 + theta * xi * xi);
    }
    case MultiplierKind::Improved: {
      const double x = layer == Layer::Upper ? xi : xi / delta;
      return std::sqrt(improved_F_squared(x));
    }
    case MultiplierKind::Custom:
      return spec.table->eval(layer, xi);
  }
  return 1.0;
}

Symbol layer_symbol(const Grid& grid, const MultiplierSpec& spec, Layer layer, double mu,
                    double delta) {
  return Symbol::sample(grid, [&](double k) { return eval_F(spec, layer, k, mu, delta); });
}

AdmissibilityReport check_admissibility(const MultiplierSpec& spec, Layer layer, double mu,
                                        double delta, double k_max, std::size_t samples) {
  if (!(k_max > 0.0)) {
    throw DomainError("check_admissibility: k_max must be positive");
  }
  if (samples < 100) {
    throw DomainError("check_admissibility: at least 100 samples are required");
  }
  AdmissibilityReport report;

  // Sub-additivity of k -> |k| F(sqrt(mu) k) on the sampled lattice.
  const auto G = [&](double k) { return eval_F(spec, layer, k, mu, delta); };
  std::vector<double> ks(samples);
  std::vector<double> gk(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    ks[i] = -k_max + 2.0 * k_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    gk[i] = std::abs(ks[i]) * G(ks[i]);
  }
  report.worst_violation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < samples; ++j) {
      const double s = ks[i] + ks[j];
      const double margin = gk[i] + gk[j] - std::abs(s) * G(s);
      if (margin < report.worst_violation) {
        report.worst_violation = margin;
        report.worst_k = ks[i];
        report.worst_l = ks[j];
      }
    }
  }
  report.pairs_checked = samples * samples;
  report.subadditive_ok = report.worst_violation >= -1e-12;

  // The remaining properties concern F itself (mu = 1 evaluation).
  const auto F = [&](double xi) { return eval_F(spec, layer, xi, 1.0, delta); };
  const double xi_max = mu > 0.0 ? std::sqrt(mu) * k_max : k_max;

  report.f0 = F(0.0);
  report.f0_ok = std::abs(report.f0 - 1.0) <= 1e-12;

  const double h0 = 1e-4;
  report.fprime0 = (F(h0) - F(0.0)) / h0;
  report.fprime0_ok = std::abs(report.fprime0) <= 1e-2;

  const std::size_t dense = 4001;
  const double hd = 1e-3;
  double sup_f2 = 0.0;
  bool monotone = true;
  double prev_f = F(0.0);
  double prev_xf = 0.0;
  for (std::size_t i = 0; i < dense; ++i) {
    const double xi = -xi_max + 2.0 * xi_max * static_cast<double>(i) / (dense - 1);
    const double second = (F(xi + hd) - 2.0 * F(xi) + F(xi - hd)) / (hd * hd);
    sup_f2 = std::max(sup_f2, std::abs(second));
    if (xi > 0.0) {
      const double f = F(xi);
      if (f > prev_f + 1e-14 || xi * f < prev_xf - 1e-14) monotone = false;
      prev_f = f;
      prev_xf = xi * f;
    }
  }
  report.second_derivative_bound = sup_f2;
  report.monotone_ok = monotone;

  // Decay exponent: the largest sigma in {1, 1/2, 0} for which F(xi) xi^sigma
  // has flattened out over the last octave of the window.
  const auto windowed_sup = [&](double sigma) {
    double sup = 0.0;
    for (std::size_t i = 0; i < dense; ++i) {
      const double xi = xi_max * static_cast<double>(i) / (dense - 1);
      const double g = xi == 0.0 ? (sigma == 0.0 ? F(0.0) : 0.0) : F(xi) * std::pow(xi, sigma);
      sup = std::max(sup, g);
    }
    return sup;
  };
  if (spec.kind == MultiplierKind::Custom) {
    // Least-squares slope of log F against log xi over the last decade.
    const std::size_t n_fit = 200;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n_fit; ++i) {
      const double xi = xi_max * std::pow(10.0, -1.0 + static_cast<double>(i) / (n_fit - 1));
      const double f = F(xi);
      if (!(f > 0.0)) continue;
      const double lx = std::log(xi);
      const double ly = std::log(f);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++used;
    }
    double slope = 0.0;
    if (used > 1) {
      const double n = static_cast<double>(used);
      slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    report.sigma = std::clamp(-slope, 0.0, 1.0);
    report.sigma_approximate = true;
  } else {
    report.sigma = 0.0;
    for (double sigma : {1.0, 0.5}) {
      const double g_end = F(xi_max) * std::pow(xi_max, sigma);
      const double g_mid = F(0.5 * xi_max) * std::pow(0.5 * xi_max, sigma);
      const double slope = std::log(g_end / g_mid) / std::log(2.0);
      if (slope <= 0.1) {
        report.sigma = sigma;
        break;
      }
    }
  }
  report.k_F = windowed_sup(report.sigma);
  report.k_sampled = mu > 0.0 ? report.k_F * std::pow(mu, -0.5 * report.sigma) : report.k_F;
  return report;
}

std::string format_report(const AdmissibilityReport& r, const MultiplierSpec& spec, Layer layer) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "multiplier " << spec.name() << ", layer " << static_cast<int>(layer) << "\n";
  out << "  sub-additive:        " << (r.subadditive_ok ? "yes" : "NO") << " (worst margin "
      << r.worst_violation << " at k=" << r.worst_k << ", l=" << r.worst_l << ", "
      << r.pairs_checked << " pairs)\n";
  out << "  F(0) = 1:            " << (r.f0_ok ? "yes" : "NO") << " (F(0)=" << r.f0 << ")\n";
  out << "  F'(0) = 0:           " << (r.fprime0_ok ? "yes" : "NO") << " (" << r.fprime0
      << ")\n";
  out << "  sup |F''| (window):  " << r.second_derivative_bound << "\n";
  out << "  monotone (iii'):     " << (r.monotone_ok ? "yes" : "no") << "\n";
  out << "  decay sigma:         " << r.sigma << (r.sigma_approximate ? " (approximate fit)" : "")
      << "\n";
  out << "  K_F:                 " << r.k_F << "\n";
  out << "  admissible:          " << (r.admissible() ? "yes" : "NO") << "\n";
  return out.str();
}

}  // namespace mgn
