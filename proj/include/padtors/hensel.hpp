#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "padtors/padic.hpp"

namespace padtors {

using PadicFunction = std::function<PadicNumber(const PadicNumber&)>;

/// One Newton iteration: residual valuation at x_k and valuation of the step taken from x_k.
/// The step is absent on the final entry.
struct NewtonStep {
  int iteration = 0;
  int val_residual = 0;
  std::optional<int> val_step;
};

/// Find x with F(x) = 0 near seed. deriv may be left empty, in which case a symmetric
/// finite difference with step p^fd_step is used (fd_step <= 0 picks target_prec / 2 + 1).
struct NewtonProblem {
  PadicFunction eval;
  PadicFunction deriv;
  PadicNumber seed;
  int target_prec = kDefaultPrecision;
  int max_iterations = 64;
  int fd_step = 0;
};

struct NewtonResult {
  /// Carries absolute precision val(F(root)) - val(F'(seed)), capped at the working precision.
  PadicNumber root;
  int val_residual = 0;
  int val_deriv = 0;
  std::vector<NewtonStep> transcript;
};

/// Newton iteration in the rescaled variable x = a + r*u with r = F'(a).
/// Requires val(F(a)) > 2 val(F'(a)); asserts val(F(x_{k+1})) >= 2 val(F(x_k)) - 2 val(F'(a))
/// on every step.
NewtonResult newton_solve(const NewtonProblem& prob);

/// Transcript as a JSON array of [iteration, val_residual, val_step|null].
std::string transcript_json(const std::vector<NewtonStep>& transcript);

/// Dense polynomial, coefficient of x^i at index i.
using Polynomial = std::vector<PadicNumber>;

PadicNumber poly_eval(const Polynomial& f, const PadicNumber& x);
Polynomial poly_derivative(const Polynomial& f);
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);
Polynomial poly_add(const Polynomial& f, const Polynomial& g);
Polynomial poly_scale(const Polynomial& f, const PadicNumber& c);

struct IsolatedRoot {
  PadicNumber root;
  /// Depth (digits past the disk radius) at which the class was isolated.
  int depth = 0;
  std::vector<NewtonStep> transcript;
};

/// A residue class p^v (center + p^depth Z_p) that still holds two or more roots, or whose
/// root count could not be decided from the available precision.
struct UnresolvedClass {
  PadicNumber center;
  int depth = 0;
  /// Strassmann bound on the number of roots, or -1 when undecidable.
  int root_bound = 0;
};

struct RootIsolation {
  std::vector<IsolatedRoot> roots;
  std::vector<UnresolvedClass> unresolved;
};

struct RootScanOptions {
  int scan_depth = 3;
  int depth_cap = 24;
};

/// Simple roots of f in the disk p^disk_val Z_p, sorted by residue. Classes are pruned with
/// Strassmann's bound on the Taylor expansion at each center; isolated classes are lifted
/// with newton_solve to max_prec digits.
RootIsolation poly_roots_in_disk(const Polynomial& f, int disk_val, int max_prec,
                                 const RootScanOptions& opts = {});

}  // namespace padtors
