#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sdelab/avikainen.hpp"
#include "sdelab/cli/config.hpp"
#include "sdelab/cli/expression.hpp"
#include "sdelab/cli/presets.hpp"
#include "sdelab/cli/runner.hpp"
#include "sdelab/errors.hpp"
#include "sdelab/fbm.hpp"
#include "sdelab/harness/harness.hpp"
#include "sdelab/schemes_bm.hpp"
#include "sdelab/she.hpp"
#include "sdelab/stable.hpp"

namespace py = pybind11;
using namespace sdelab;

namespace {

Coefficient1D coefficient(const std::string& source) {
  const Expression e = Expression::parse(source);
  return Coefficient1D([e](double t, double x) { return e(x, t); });
}

SignedAtomMeasure atoms(const std::vector<std::pair<double, double>>& list) {
  std::vector<SignedAtomMeasure::Atom> a;
  for (const auto& [loc, w] : list) a.push_back({loc, w});
  return SignedAtomMeasure(std::move(a));
}

py::dict path_dict(const Path& p) {
  py::dict d;
  d["values"] = p.values;
  d["diverged_at"] = p.diverged_at;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sdelab, m) {
  m.doc() = "Euler-type schemes for SDEs with irregular coefficients";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  auto failure = py::register_exception<RunFailure>(m, "RunFailure", PyExc_RuntimeError);
  py::register_exception<FactorizationError>(m, "FactorizationError", failure.ptr());

  m.def("evaluate", [](const std::string& source, double x, double t, double u, double y) {
    return Expression::parse(source)(x, t, u, y);
  }, py::arg("expression"), py::arg("x") = 0.0, py::arg("t") = 0.0, py::arg("u") = 0.0,
     py::arg("y") = 0.0);

  // avikainen
  m.def("avikainen_rhs", &avikainen_rhs, py::arg("holder_const"), py::arg("alpha"),
        py::arg("total_mass"), py::arg("total_variation"), py::arg("p"), py::arg("q"),
        py::arg("lp_moment"));
  m.def("key2_rhs", &key2_rhs, py::arg("holder_const"), py::arg("alpha"), py::arg("p"),
        py::arg("lp_moment"));
  m.def("indicator_diff_moment", [](const std::vector<double>& x, const std::vector<double>& xhat,
                                     double level, double q) {
    return indicator_diff_moment(x, xhat, level, q);
  }, py::arg("x"), py::arg("xhat"), py::arg("level"), py::arg("q"));
  m.def("skorokhod_inverse", [](std::vector<double> samples, double s) {
    return skorokhod_inverse(EmpiricalCDF(std::move(samples)), s);
  }, py::arg("samples"), py::arg("s"));
  m.def("holder_constant", [](std::vector<double> samples, double alpha) {
    const EmpiricalCDF F(std::move(samples));
    const double h = default_holder_scale(F);
    return holder_estimate(F, alpha, h, 1.0, 64).constant;
  }, py::arg("samples"), py::arg("alpha") = 1.0);

  // schemes_bm
  m.def("brownian_increments", [](double horizon, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    CounterEngine e{RngStream(seed, stream)};
    return brownian_increments(TimeGrid(horizon, n), e);
  }, py::arg("horizon"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def("em_path", [](const std::string& drift, const std::string& diffusion, double x0,
                      double horizon, const std::vector<double>& increments, double ell) {
    EMConfig cfg{coefficient(drift), coefficient(diffusion), x0, TimeGrid(horizon, increments.size()),
                 ell > 0.0 ? Taming::drift_and_diffusion : Taming::none, ell};
    return path_dict(ell > 0.0 ? tamed_em_path(cfg, increments) : em_path(cfg, increments));
  }, py::arg("drift"), py::arg("diffusion"), py::arg("x0"), py::arg("horizon"),
     py::arg("increments"), py::arg("ell") = 0.0);
  m.def("theoretical_rate_main4", &theoretical_rate_main4, py::arg("p"), py::arg("p0"),
        py::arg("p1"), py::arg("ell"), py::arg("gamma"));
  m.def("theoretical_rate_main42", &theoretical_rate_main42, py::arg("alpha"), py::arg("gamma"),
        py::arg("rho"), py::arg("p"));
  m.def("F_nu", [](const std::vector<std::pair<double, double>>& nu, double x) {
    return F_nu(atoms(nu), x);
  }, py::arg("atoms"), py::arg("x"));
  m.def("F_nu_inverse", [](const std::vector<std::pair<double, double>>& nu, double y) {
    return F_nu_inverse(atoms(nu), y);
  }, py::arg("atoms"), py::arg("y"));
  m.def("singular_path", [](const std::vector<std::pair<double, double>>& nu, const std::string& diffusion,
                            double x0, double horizon, const std::vector<double>& increments) {
    const auto s = singular_sde_scheme(coefficient(diffusion), AtomTransform(atoms(nu)), x0,
                                       TimeGrid(horizon, increments.size()), increments);
    return path_dict(s.x);
  }, py::arg("atoms"), py::arg("diffusion"), py::arg("x0"), py::arg("horizon"), py::arg("increments"));

  // stable
  m.def("stable_increments", [](double alpha, double horizon, std::size_t n, std::uint64_t seed) {
    CounterEngine e{RngStream(seed)};
    return stable_increments(alpha, TimeGrid(horizon, n), e);
  }, py::arg("alpha"), py::arg("horizon"), py::arg("n"), py::arg("seed"));
  m.def("theoretical_rate_main5", [](double alpha) {
    const auto r = theoretical_rate_main5(alpha);
    return py::make_tuple(r.model, r.exponent, r.moment_order);
  }, py::arg("alpha"));

  // fbm
  m.def("fbm_covariance", &fbm_covariance, py::arg("hurst"), py::arg("t"), py::arg("s"));
  m.def("hyp2f1", &hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
  m.def("kernel_K_H", &kernel_K_H, py::arg("hurst"), py::arg("t"), py::arg("s"));
  m.def("fbm_path", [](double hurst, double horizon, std::size_t n, std::uint64_t seed, bool circulant) {
    const FbmSampler s(hurst, TimeGrid(horizon, n),
                       circulant ? FbmSampler::Method::circulant : FbmSampler::Method::cholesky);
    CounterEngine e{RngStream(seed)};
    return s.sample(e).path;
  }, py::arg("hurst"), py::arg("horizon"), py::arg("n"), py::arg("seed"), py::arg("circulant") = false);
  m.def("theoretical_rate_main7", &theoretical_rate_main7, py::arg("hurst"), py::arg("gamma"),
        py::arg("p"), py::arg("eps"));

  // she
  m.def("cfl_satisfied", &cfl_satisfied, py::arg("horizon"), py::arg("m"), py::arg("n"));
  m.def("heat_kernel_G", &heat_kernel_G, py::arg("t"), py::arg("x"), py::arg("y"),
        py::arg("image_terms") = 8);
  m.def("she_additive_variance", &she_additive_variance, py::arg("t"), py::arg("x"));
  m.def("she_simulate", [](double horizon, std::size_t m, std::size_t n, const std::string& drift,
                           const std::string& diffusion, const std::string& initial, std::uint64_t seed,
                           bool override_cfl) {
    const Expression b = Expression::parse(drift), s = Expression::parse(diffusion),
                     u0 = Expression::parse(initial);
    SheConfig cfg;
    cfg.horizon = horizon;
    cfg.time_steps = m;
    cfg.space_intervals = n;
    cfg.drift = [b](double t, double x, double u) { return b(x, t, u); };
    cfg.diffusion = [s](double t, double x, double u) { return s(x, t, u); };
    cfg.initial = [u0](double x) { return u0(x); };
    cfg.override_cfl = override_cfl;
    CounterEngine e{RngStream(seed)};
    const auto run = she_simulate(cfg, e);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i <= m; ++i) {
      const auto r = run.field.row(i);
      rows.emplace_back(r.begin(), r.end());
    }
    return rows;
  }, py::arg("horizon"), py::arg("m"), py::arg("n"), py::arg("drift") = "0",
     py::arg("diffusion") = "1", py::arg("initial") = "0", py::arg("seed") = 0,
     py::arg("override_cfl") = false);

  // harness
  m.def("fit_rate", [](const std::vector<double>& ns, const std::vector<double>& errors,
                       const std::string& model) {
    const RateModel rm = model == "power" ? RateModel::power
                         : model == "log" ? RateModel::log
                         : model == "auto" ? RateModel::automatic
                                           : throw DomainError("fit_rate: model must be power, log or auto");
    const auto f = fit_rate(ns, errors, rm);
    return py::make_tuple(to_string(f.model), f.constant, f.exponent);
  }, py::arg("ns"), py::arg("errors"), py::arg("model") = "power");

  // cli
  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : builtin_presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  m.def("validate_config", [](const std::string& text) {
    validate_config(parse_config(text));
  }, py::arg("text"));
  m.def("run_config", [](const std::string& text, std::optional<std::uint64_t> seed,
                         std::optional<std::size_t> threads, std::optional<std::string> out,
                         std::optional<std::string> format) {
    RunFlags flags;
    flags.seed = seed;
    flags.threads = threads;
    flags.out = out;
    flags.format = format;
    RunOutcome r;
    {
      py::gil_scoped_release release;
      r = run_experiment(parse_config(text), flags);
    }
    py::dict d;
    d["exit_code"] = r.exit_code;
    d["summary"] = r.summary;
    d["files"] = r.files;
    return d;
  }, py::arg("text"), py::arg("seed") = py::none(), py::arg("threads") = py::none(),
     py::arg("out") = py::none(), py::arg("format") = py::none());
}
