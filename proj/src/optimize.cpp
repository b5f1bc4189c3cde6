#include "harmony/optimize.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace harmony {

namespace {

struct Callback {
  const std::function<double(const Vector&)>* objective;
  Vector scratch;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* cb = static_cast<Callback*>(params);
  for (Eigen::Index i = 0; i < cb->scratch.size(); ++i) cb->scratch[i] = gsl_vector_get(v, i);
  const double f = (*cb->objective)(cb->scratch);
  return std::isfinite(f) ? f : std::numeric_limits<double>::max();
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

Minimum nelder_mead(const std::function<double(const Vector&)>& objective, const Vector& x0, const Vector& step,
                    const NelderMeadOptions& options) {
  const auto n = static_cast<std::size_t>(x0.size());
  if (n == 0) return {x0, objective(x0), 0};
  gsl_set_error_handler_off();

  Callback cb{&objective, Vector(x0.size())};
  gsl_multimin_function fn{&trampoline, n, &cb};

  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(start.get(), i, x0[static_cast<Eigen::Index>(i)]);
    gsl_vector_set(steps.get(), i, step[static_cast<Eigen::Index>(i)]);
  }
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(solver.get(), &fn, start.get(), steps.get());

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(solver.get());
    if (gsl_multimin_test_size(size, options.size_tolerance) == GSL_SUCCESS) break;
  }
  Vector best(x0.size());
  const gsl_vector* xm = gsl_multimin_fminimizer_x(solver.get());
  for (std::size_t i = 0; i < n; ++i) best[static_cast<Eigen::Index>(i)] = gsl_vector_get(xm, i);
  return {best, gsl_multimin_fminimizer_minimum(solver.get()), it};
}

}  // namespace harmony
