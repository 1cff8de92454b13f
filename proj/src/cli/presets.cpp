#include "sdelab/cli/presets.hpp"

#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

std::vector<Preset> make_presets() {
  std::vector<Preset> out;
  {
    Preset p{"le-gall-step", "bm: sigma = 1 + 1_[0,inf)(x) in [1, 2], bounded drift; logarithmic strong rate", {}};
    p.model.driver = Driver::bm;
    p.model.drift = "0.5*sin(x)";
    p.model.diffusion = "1 + indicator(0, inf)";
    p.model.drift_bound = 0.5;
    p.model.diffusion_bound = 2.0;
    p.model.ellipticity = 1.0;
    out.push_back(p);
  }
  {
    Preset p{"skew-bm", "bm: skew Brownian motion, nu = 0.5 delta_0, P(X(1) > 0) = 3/4", {}};
    p.model.driver = Driver::bm;
    p.model.drift = "0";
    p.model.diffusion = "1";
    p.model.atoms = std::vector<std::pair<double, double>>{{0.0, 0.5}};
    p.model.diffusion_bound = 1.0;
    p.model.ellipticity = 1.0;
    out.push_back(p);
  }
  {
    Preset p{"cubic-tamed", "bm: b = -x^3, sigma = 1, x0 = 2, tamed drift", {}};
    p.model.driver = Driver::bm;
    p.model.drift = "-x^3";
    p.model.diffusion = "1";
    p.model.x0 = 2.0;
    p.model.taming = "drift";
    p.model.ell = 2.0;
    p.model.growth_exponent = 2.0;
    p.model.diffusion_bound = 1.0;
    p.model.ellipticity = 1.0;
    out.push_back(p);
  }
  {
    Preset p{"holder-sigma", "bm: sigma = sqrt(min(|x|, 1)) + 0.5, 1/2-Hoelder diffusion", {}};
    p.model.driver = Driver::bm;
    p.model.drift = "0";
    p.model.diffusion = "sqrt(min(abs(x), 1)) + 0.5";
    p.model.drift_bound = 0.0;
    p.model.diffusion_bound = 1.5;
    p.model.ellipticity = 0.25;
    out.push_back(p);
  }
  {
    Preset p{"step-drift-fbm", "fbm: H = 0.35, drift 1 - 2*1_[0,inf)(x), additive noise", {}};
    p.model.driver = Driver::fbm;
    p.model.drift = "1 - 2*indicator(0, inf)";
    p.model.hurst = 0.35;
    p.model.drift_bound = 1.0;
    out.push_back(p);
  }
  {
    Preset p{"gyongy-she", "she: T = 0.25, b(u) = 1_[0,inf)(u), sigma = 1, u0 = sin(pi x)", {}};
    p.model.driver = Driver::she;
    p.model.drift = "indicator(0, inf, u)";
    p.model.diffusion = "1";
    p.model.initial = "sin(pi*x)";
    p.model.horizon = 0.25;
    out.push_back(p);
  }
  {
    Preset p{"asian-pair", "bm: X = B, Y = int_0^t X ds (observed component Y)", {}};
    p.model.driver = Driver::bm;
    p.model.drift = "0";
    p.model.diffusion = "1";
    p.model.mu = "x";
    p.model.drift_bound = 0.0;
    p.model.diffusion_bound = 1.0;
    p.model.ellipticity = 1.0;
    out.push_back(p);
  }
  return out;
}

template <class T>
void fill(std::optional<T>& target, const std::optional<T>& fallback) {
  if (!target) target = fallback;
}

}  // namespace

const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : builtin_presets())
    if (p.name == name) return &p;
  return nullptr;
}

std::string list_presets() {
  std::ostringstream o;
  for (const auto& p : builtin_presets()) {
    o << p.name;
    for (std::size_t i = p.name.size(); i < 16; ++i) o << ' ';
    o << p.description << '\n';
  }
  return o.str();
}

ModelBlock resolve_model(const ModelBlock& model) {
  ModelBlock m = model;
  if (!m.preset) return m;
  const Preset* p = find_preset(*m.preset);
  if (!p) {
    std::string names;
    for (const auto& q : builtin_presets()) names += (names.empty() ? "" : ", ") + q.name;
    throw ValidationError("unknown preset '" + *m.preset + "' (allowed: " + names + ")");
  }
  const auto& d = p->model;
  fill(m.driver, d.driver);
  fill(m.drift, d.drift);
  fill(m.diffusion, d.diffusion);
  fill(m.initial, d.initial);
  fill(m.mu, d.mu);
  fill(m.x0, d.x0);
  fill(m.horizon, d.horizon);
  fill(m.taming, d.taming);
  fill(m.ell, d.ell);
  fill(m.hurst, d.hurst);
  fill(m.stable_index, d.stable_index);
  fill(m.atoms, d.atoms);
  fill(m.drift_bound, d.drift_bound);
  fill(m.diffusion_bound, d.diffusion_bound);
  fill(m.ellipticity, d.ellipticity);
  fill(m.growth_exponent, d.growth_exponent);
  fill(m.linear_growth, d.linear_growth);
  return m;
}

}  // namespace sdelab
