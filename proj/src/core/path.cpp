#include "sdelab/core/path.hpp"

#include "sdelab/errors.hpp"

namespace sdelab {

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t paths)
    : grid_(grid),
      paths_(paths),
      values_(paths * (grid.steps() + 1), 0.0),
      increments_(paths * grid.steps(), 0.0) {
  if (paths == 0) throw DomainError("PathEnsemble: needs at least one path");
}

std::span<double> PathEnsemble::values(std::size_t path) {
  return {values_.data() + path * nodes(), nodes()};
}
std::span<const double> PathEnsemble::values(std::size_t path) const {
  return {values_.data() + path * nodes(), nodes()};
}
std::span<double> PathEnsemble::increments(std::size_t path) {
  return {increments_.data() + path * grid_.steps(), grid_.steps()};
}
std::span<const double> PathEnsemble::increments(std::size_t path) const {
  return {increments_.data() + path * grid_.steps(), grid_.steps()};
}

std::vector<double> coarsen_increments(std::span<const double> fine, std::size_t factor) {
  if (factor == 0 || fine.size() % factor != 0) {
    throw DomainError("coarsen_increments: factor must divide the number of fine increments");
  }
  std::vector<double> coarse(fine.size() / factor, 0.0);
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    double s = 0.0;
    for (std::size_t j = 0; j < factor; ++j) s += fine[c * factor + j];
    coarse[c] = s;
  }
  return coarse;
}

std::vector<double> cumulate(double x0, std::span<const double> increments) {
  std::vector<double> out(increments.size() + 1);
  out[0] = x0;
  for (std::size_t k = 0; k < increments.size(); ++k) out[k + 1] = out[k] + increments[k];
  return out;
}

}  // namespace sdelab
