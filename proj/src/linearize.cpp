#include "qapprox/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qapprox/error.hpp"

namespace qapprox {

std::size_t auxiliary_index(const ModelClass& model) { return model.free_coefficient_count(); }

namespace {

// Position of denominator entry k among the LP variables, or npos if fixed.
constexpr std::size_t kFixedSlot = static_cast<std::size_t>(-1);

std::size_t denominator_slot(const ModelClass& model, std::size_t k) {
  if (model.fixed && k == model.fixed->index) return kFixedSlot;
  const std::size_t shift = (model.fixed && k > model.fixed->index) ? 1 : 0;
  return model.numerator_size() + k - shift;
}

}  // namespace

LinearProgram build_feasibility_lp(const TabulatedModel& tab, const SampledFunction& f, double z,
                                   LevelLpOptions options) {
  const ModelClass& model = tab.model();
  if (!(z >= 0.0) || !std::isfinite(z)) throw ConfigError("feasibility LP: level must be finite and >= 0");
  if (f.size() != tab.size()) throw ConfigError("feasibility LP: sample count mismatch");

  const std::size_t n_num = model.numerator_size();
  const std::size_t n_den = model.denominator_size();
  const std::size_t aux = auxiliary_index(model);
  const std::size_t width = aux + 1;

  LinearProgram lp(width);
  for (std::size_t j = 0; j < n_num; ++j) lp.names[j] = "a" + std::to_string(j + 1);
  for (std::size_t k = 0; k < n_den; ++k) {
    const std::size_t slot = denominator_slot(model, k);
    if (slot != kFixedSlot) lp.names[slot] = "b" + std::to_string(k + 1);
  }
  lp.names[aux] = "u";
  std::vector<double> objective(width, 0.0);
  objective[aux] = 1.0;
  lp.set_objective(std::move(objective));

  std::vector<double> row(width);
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double lo = model.outer.inverse(f.values[p] - z);
    const double hi = model.outer.inverse(f.values[p] + z);
    const auto g = tab.numerator().row(p);

    // scale * B^T H(x) contributes to `row`; its fixed part is returned.
    auto add_denominator = [&](double scale) {
      if (!model.rational()) return scale;
      const auto h = tab.denominator().row(p);
      double constant = 0.0;
      for (std::size_t k = 0; k < n_den; ++k) {
        const std::size_t slot = denominator_slot(model, k);
        if (slot == kFixedSlot) {
          constant += scale * model.fixed->value * h[k];
        } else {
          row[slot] += scale * h[k];
        }
      }
      return constant;
    };

    // lo * B^T H - A^T G - u <= 0
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n_num; ++j) row[j] = -g[j];
    double constant = add_denominator(lo);
    row[aux] = -1.0;
    lp.add_row(row, -constant);

    // A^T G - hi * B^T H - u <= 0
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n_num; ++j) row[j] = g[j];
    constant = add_denominator(-hi);
    row[aux] = -1.0;
    lp.add_row(row, -constant);

    if (model.rational()) {
      // -B^T H <= -delta
      std::fill(row.begin(), row.end(), 0.0);
      constant = add_denominator(-1.0);
      if (options.relax_positivity) row[aux] = -1.0;
      lp.add_row(row, -model.delta - constant);
    }
  }

  for (const auto& c : model.constraints) {
    std::fill(row.begin(), row.end(), 0.0);
    double rhs = c.rhs;
    for (std::size_t j = 0; j < n_num; ++j) row[j] = c.coefficients[j];
    for (std::size_t k = 0; k < n_den; ++k) {
      const std::size_t slot = denominator_slot(model, k);
      const double a = c.coefficients[n_num + k];
      if (slot == kFixedSlot) {
        rhs -= a * model.fixed->value;
      } else {
        row[slot] = a;
      }
    }
    lp.add_row(row, rhs);
  }
  return lp;
}

LinearProgram build_feasibility_lp(const ModelClass& model, const SampledFunction& f, double z,
                                   LevelLpOptions options) {
  TabulatedModel tab(model, f.points);
  return build_feasibility_lp(tab, f, z, options);
}

Coefficients coefficients_from_solution(const ModelClass& model, std::span<const double> solution) {
  if (solution.size() != model.free_coefficient_count() + 1) {
    throw ConfigError("LP solution length does not match the model");
  }
  Coefficients c;
  c.numerator.assign(solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(model.numerator_size()));
  c.denominator.resize(model.denominator_size());
  for (std::size_t k = 0; k < c.denominator.size(); ++k) {
    const std::size_t slot = denominator_slot(model, k);
    c.denominator[k] = slot == kFixedSlot ? model.fixed->value : solution[slot];
  }
  return c;
}

}  // namespace qapprox
