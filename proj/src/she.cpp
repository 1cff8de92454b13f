#include "sdelab/she.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr char kMagic[4] = {'S', 'H', 'E', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("lattice field: truncated binary stream");
  return v;
}

}  // namespace

bool cfl_satisfied(double horizon, std::size_t m, std::size_t n) {
  return static_cast<double>(m) >= 2.0 * horizon * static_cast<double>(n) * static_cast<double>(n);
}

double highest_mode_amplification(double horizon, std::size_t m, std::size_t n) {
  if (n < 2) return 1.0;
  return std::abs(1.0 + lattice_eigen(n - 1, n) * horizon / static_cast<double>(m));
}

void validate(const SheConfig& cfg) {
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
    throw ValidationError("she: horizon must be positive");
  if (cfg.time_steps < 1) throw ValidationError("she: time_steps must be >= 1");
  if (cfg.space_intervals < 2) throw ValidationError("she: space_intervals must be >= 2");
  if (!cfg.drift || !cfg.diffusion || !cfg.initial)
    throw ValidationError("she: coefficients must be set");
  if (std::abs(cfg.initial(0.0)) > 1e-12 || std::abs(cfg.initial(1.0)) > 1e-12)
    throw ValidationError("she: initial data must vanish at x = 0 and x = 1");
  if (!cfg.override_cfl && !cfl_satisfied(cfg.horizon, cfg.time_steps, cfg.space_intervals)) {
    std::ostringstream msg;
    msg << "she: CFL condition violated, m = " << cfg.time_steps << " < 2 T n^2 = "
        << 2.0 * cfg.horizon * double(cfg.space_intervals) * double(cfg.space_intervals)
        << " (amplification " << highest_mode_amplification(cfg.horizon, cfg.time_steps, cfg.space_intervals)
        << "); set override_cfl to run anyway";
    throw ValidationError(msg.str());
  }
}

LatticeField::LatticeField(double horizon, std::size_t m, std::size_t n)
    : horizon_(horizon), m_(m), n_(n), values_((m + 1) * (n + 1), 0.0) {
  if (!(horizon > 0.0) || m < 1 || n < 1) throw DomainError("lattice field: bad dimensions");
}

double LatticeField::interpolate(double t, double x) const {
  if (!(t >= 0.0 && t <= horizon_) || !(x >= 0.0 && x <= 1.0))
    throw DomainError("lattice field: (t, x) outside [0, T] x [0, 1]");
  const double ts = t * static_cast<double>(m_) / horizon_;
  const double xs = x * static_cast<double>(n_);
  const std::size_t i = std::min(static_cast<std::size_t>(ts), m_ - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(xs), n_ - 1);
  const double a = ts - static_cast<double>(i);
  const double c = xs - static_cast<double>(j);
  const double lo = (1.0 - c) * at(i, j) + c * at(i, j + 1);
  const double hi = (1.0 - c) * at(i + 1, j) + c * at(i + 1, j + 1);
  return (1.0 - a) * lo + a * hi;
}

void LatticeField::write_csv(std::ostream& out) const {
  out << "i,j,t,x,value\n";
  out.precision(17);
  for (std::size_t i = 0; i <= m_; ++i) {
    const double t = horizon_ * static_cast<double>(i) / static_cast<double>(m_);
    for (std::size_t j = 0; j <= n_; ++j) {
      out << i << ',' << j << ',' << t << ',' << static_cast<double>(j) / static_cast<double>(n_)
          << ',' << at(i, j) << '\n';
    }
  }
}

void LatticeField::write_binary(std::ostream& out, std::uint64_t seed) const {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, m_);
  put<std::uint64_t>(out, n_);
  put<double>(out, horizon_);
  put<std::uint64_t>(out, seed);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

LatticeField LatticeField::read_binary(std::istream& in, std::uint64_t* seed) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("lattice field: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw ValidationError("lattice field: unsupported version");
  const auto m = get<std::uint64_t>(in);
  const auto n = get<std::uint64_t>(in);
  const auto horizon = get<double>(in);
  const auto s = get<std::uint64_t>(in);
  if (!in || m == 0 || n == 0 || m > (1u << 30) || n > (1u << 30) || (m + 1) * (n + 1) > (std::uint64_t(1) << 32))
    throw ValidationError("lattice field: corrupt header");
  LatticeField field(horizon, m, n);
  in.read(reinterpret_cast<char*>(field.values_.data()),
          static_cast<std::streamsize>(field.values_.size() * sizeof(double)));
  if (!in) throw ValidationError("lattice field: truncated binary stream");
  if (seed) *seed = s;
  return field;
}

double discrete_laplacian(double left, double center, double right, std::size_t n) {
  const double nn = static_cast<double>(n);
  return nn * nn * (right - 2.0 * center + left);
}

double lattice_eigen(std::size_t j, std::size_t n) {
  if (j < 1 || j + 1 > n) throw DomainError("lattice_eigen: need 1 <= j <= n-1");
  const double s = std::sin(static_cast<double>(j) * kPi / (2.0 * static_cast<double>(n)));
  const double nn = static_cast<double>(n);
  return -4.0 * nn * nn * s * s;
}

double sine_mode(std::size_t j, double x) {
  return std::numbers::sqrt2 * std::sin(static_cast<double>(j) * kPi * x);
}

double lattice_mode(std::size_t j, std::size_t n, double x) {
  const double xs = x * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(std::max(xs, 0.0)), n - 1);
  const double c = xs - static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return (1.0 - c) * sine_mode(j, static_cast<double>(k) / nn) +
         c * sine_mode(j, static_cast<double>(k + 1) / nn);
}

std::vector<double> brownian_sheet_row(std::size_t m, std::size_t n, double horizon,
                                       CounterEngine& engine) {
  if (m < 1 || n < 1) throw DomainError("brownian_sheet_row: m, n >= 1");
  const double sd = std::sqrt(horizon / (static_cast<double>(m) * static_cast<double>(n)));
  std::vector<double> row(n);
  for (auto& v : row) v = sd * engine.normal();
  return row;
}

std::vector<double> brownian_sheet_cells(std::size_t m, std::size_t n, double horizon,
                                         CounterEngine& engine) {
  std::vector<double> cells;
  cells.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = brownian_sheet_row(m, n, horizon, engine);
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return cells;
}

std::optional<std::size_t> gyongy_step(std::span<const double> current, std::span<double> next,
                                       const SheConfig& cfg, std::size_t i,
                                       std::span<const double> noise_row) {
  const std::size_t n = cfg.space_intervals;
  const std::size_t m = cfg.time_steps;
  if (current.size() != n + 1 || next.size() != n + 1 || noise_row.size() < n)
    throw DomainError("gyongy_step: row size mismatch");
  const double dt = cfg.horizon / static_cast<double>(m);
  const double t = dt * static_cast<double>(i);
  const double box = static_cast<double>(n) * static_cast<double>(m) / cfg.horizon;
  std::optional<std::size_t> bad;
  next[0] = 0.0;
  next[n] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n);
    const double u = current[j];
    double v = u + dt * discrete_laplacian(current[j - 1], u, current[j + 1], n) +
               dt * cfg.drift(t, x, u);
    const double s = cfg.diffusion(t, x, u);
    if (s != 0.0) v += dt * s * box * noise_row[j];
    next[j] = v;
    if (!bad && !std::isfinite(v)) bad = j;
  }
  return bad;
}

double spectral_kernel_G(std::size_t m, std::size_t n, double horizon, double t, double x, double y) {
  if (!(t >= 0.0 && t <= horizon) || !(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw DomainError("spectral_kernel_G: argument out of range");
  const double power = std::floor(static_cast<double>(m) * t / horizon + 1e-12);
  const double nn = static_cast<double>(n);
  const double ky = std::min(std::floor(y * nn), nn - 1.0) / nn;
  double sum = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double mu = 1.0 + lattice_eigen(j, n) * horizon / static_cast<double>(m);
    sum += std::pow(mu, power) * lattice_mode(j, n, x) * sine_mode(j, ky);
  }
  return sum;
}

double heat_kernel_G(double t, double x, double y, int image_terms) {
  if (!(t > 0.0)) throw DomainError("heat_kernel_G: t must be positive");
  if (image_terms < 1) throw DomainError("heat_kernel_G: image_terms >= 1");
  const double s = 4.0 * t;
  double sum = 0.0;
  for (int k = -image_terms; k <= image_terms; ++k) {
    const double a = x - y + 2.0 * k;
    const double b = x + y + 2.0 * k;
    sum += std::exp(-a * a / s) - std::exp(-b * b / s);
  }
  return sum / std::sqrt(kPi * s);
}

double heat_kernel_spectral(double t, double x, double y) {
  if (!(t > 0.0)) throw DomainError("heat_kernel_spectral: t must be positive");
  double sum = 0.0;
  for (std::size_t j = 1;; ++j) {
    const double decay = std::exp(-double(j * j) * kPi * kPi * t);
    const double term = 2.0 * decay * std::sin(double(j) * kPi * x) * std::sin(double(j) * kPi * y);
    sum += term;
    if (decay < 1e-16 * std::max(std::abs(sum), 1e-300) || decay == 0.0) break;
  }
  return sum;
}

SheRun she_simulate(const SheConfig& cfg, CounterEngine& engine) {
  validate(cfg);
  const std::size_t m = cfg.time_steps;
  const std::size_t n = cfg.space_intervals;
  SheRun run{LatticeField(cfg.horizon, m, n), std::nullopt};
  auto& field = run.field;
  for (std::size_t j = 1; j < n; ++j) field.at(0, j) = cfg.initial(static_cast<double>(j) / double(n));
  std::vector<double> noise(n, 0.0);
  const double sd = std::sqrt(cfg.horizon / (static_cast<double>(m) * static_cast<double>(n)));
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& v : noise) v = sd * engine.normal();
    auto bad = gyongy_step(field.row(i), field.row(i + 1), cfg, i, noise);
    if (bad) {
      run.diverged_at = std::make_pair(i + 1, *bad);
      break;
    }
  }
  return run;
}

double she_additive_variance(double t, double x) {
  if (!(t >= 0.0) || !(x >= 0.0 && x <= 1.0)) throw DomainError("she_additive_variance: bad argument");
  const double base = 0.5 * x * (1.0 - x);
  if (t == 0.0) return 0.0;
  double tail = 0.0;
  for (std::size_t j = 1; j < 100000; ++j) {
    const double jp = static_cast<double>(j) * kPi;
    const double s = std::sin(jp * x);
    const double term = s * s * std::exp(-2.0 * jp * jp * t) / (jp * jp);
    tail += term;
    if (std::exp(-2.0 * jp * jp * t) / (jp * jp) < 1e-10 * std::max(base, 1e-300)) break;
  }
  return base - tail;
}

double she_additive_variance_lattice(double horizon, std::size_t m, std::size_t n, std::size_t i,
                                     std::size_t j) {
  if (j > n || i > m) throw DomainError("she_additive_variance_lattice: index out of range");
  const double dt = horizon / static_cast<double>(m);
  const double x = static_cast<double>(j) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t l = 1; l < n; ++l) {
    const double mu = 1.0 + lattice_eigen(l, n) * dt;
    const double s = std::sin(static_cast<double>(l) * kPi * x);
    const double mu2 = mu * mu;
    const double geom = std::abs(1.0 - mu2) < 1e-300
                            ? static_cast<double>(i)
                            : (1.0 - std::pow(mu2, static_cast<double>(i))) / (1.0 - mu2);
    sum += s * s * geom;
  }
  return 2.0 * dt * sum;
}

double theoretical_rate_Gy(double m, double n) {
  if (!(m >= 1.0) || !(n >= 1.0)) throw DomainError("theoretical_rate_Gy: m, n >= 1");
  return std::pow(m, -0.25) + std::pow(n, -0.5);
}

std::pair<double, double> theoretical_rate_main11(double rho, double gamma, double eps,
                                                  bool holder_drift) {
  if (!(rho > 0.0 && rho <= 1.0) || !(gamma > 0.0 && gamma <= 1.0) || !(eps > 0.0 && eps < 1.0))
    throw DomainError("theoretical_rate_main11: need rho, gamma in (0,1], eps in (0,1)");
  const double c = holder_drift ? gamma : (1.0 - eps) * gamma / 4.0;
  const double r = std::min(rho, c);
  return {0.25 * r, 0.5 * r};
}

}  // namespace sdelab
