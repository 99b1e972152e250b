#include "padtors/hensel.hpp"

#include <algorithm>
#include <sstream>

namespace padtors {

namespace {

int residual_val(const PadicNumber& r) {
  return r.is_exact_zero() ? PadicNumber::kInfinitePrecision : r.valuation();
}

}  // namespace

std::string transcript_json(const std::vector<NewtonStep>& transcript) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& s = transcript[i];
    if (i) out << ',';
    out << '[' << s.iteration << ',';
    if (s.val_residual == PadicNumber::kInfinitePrecision) {
      out << "null";
    } else {
      out << s.val_residual;
    }
    out << ',';
    if (s.val_step) {
      out << *s.val_step;
    } else {
      out << "null";
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

NewtonResult newton_solve(const NewtonProblem& prob) {
  if (!prob.eval) throw DomainError("newton_solve needs an evaluator");
  const PadicNumber& a = prob.seed;
  const std::uint32_t p = a.prime();
  check_prime(p);

  const int fd_m = prob.fd_step > 0 ? prob.fd_step : prob.target_prec / 2 + 1;
  auto derivative = [&](const PadicNumber& x) {
    if (prob.deriv) return prob.deriv(x);
    const auto h = PadicNumber::from_scaled(p, fd_m, 1, std::max(x.abs_prec(), fd_m + 1));
    const auto diff = prob.eval(x + h) - prob.eval(x - h);
    // symmetric quotient; truncation error is O(h^2)
    return diff.div_int(2).shifted(-fd_m).with_prec(2 * fd_m);
  };

  NewtonResult res;
  const auto fa = prob.eval(a);
  const auto r = derivative(a);
  if (!r.is_nonzero()) {
    throw ConvergenceError("Hensel hypothesis fails: derivative at seed is not certified nonzero");
  }
  const int v = r.valuation();
  res.val_deriv = v;
  const int val_fa = residual_val(fa);
  if (val_fa <= 2 * v) {
    res.transcript.push_back({0, val_fa, std::nullopt});
    std::ostringstream msg;
    msg << "Hensel hypothesis fails: val(F(a)) = " << val_fa << " <= 2 val(F'(a)) = " << 2 * v;
    throw ConvergenceError(msg.str(), transcript_json(res.transcript));
  }

  const int goal = prob.target_prec + std::max(v, 0);
  const int work = std::max(prob.target_prec + 2 * std::max(v, 0) + 4 + (prob.deriv ? 0 : fd_m),
                            a.valuation() < 0 ? 0 : 1);
  // The scale only has to be fixed, so its representative is taken as exact.
  const auto rs = r.lifted(work + std::max(v, 0));
  const auto r2 = rs * rs;

  // x = a + r u, G(u) = F(x) / r^2, G'(u) = F'(x) / r
  auto x_of = [&](const PadicNumber& u) { return (a.lifted(work) + rs * u).lifted(work); };
  PadicNumber u = PadicNumber::zero(p);
  PadicNumber x = a.lifted(work);
  PadicNumber fx = fa;
  int val_res = val_fa;
  for (int it = 0;; ++it) {
    const bool exhausted = !fx.is_nonzero();
    if (exhausted || val_res >= goal) {
      res.transcript.push_back({it, val_res, std::nullopt});
      break;
    }
    if (it >= prob.max_iterations) {
      res.transcript.push_back({it, val_res, std::nullopt});
      throw ConvergenceError("Newton iteration limit reached", transcript_json(res.transcript));
    }
    const auto dx = derivative(x);
    if (!dx.is_nonzero() || dx.valuation() != v) {
      res.transcript.push_back({it, val_res, std::nullopt});
      throw ConvergenceError("derivative left the Hensel disk", transcript_json(res.transcript));
    }
    const auto g = fx / r2;
    const auto gd = dx / rs;
    const auto du = (g / gd).lifted(work);
    u = (u - du).lifted(work);
    res.transcript.push_back({it, val_res, du.is_nonzero() ? std::optional<int>(du.valuation() + v) : std::nullopt});

    const auto x_next = x_of(u);
    const auto f_next = prob.eval(x_next);
    const int val_next = residual_val(f_next);
    if (f_next.is_nonzero()) {
      const int quadratic = 2 * val_res - 2 * v;
      const long long noise =
          std::min<long long>(fx.abs_prec(), static_cast<long long>(val_res) + dx.abs_prec() - 2 * v);
      if (val_next < std::min<long long>(quadratic, noise) || val_next <= val_res) {
        res.transcript.push_back({it + 1, val_next, std::nullopt});
        throw ConvergenceError("Newton iteration stalled", transcript_json(res.transcript));
      }
    }
    x = x_next;
    fx = f_next;
    val_res = val_next;
  }

  if (val_res < prob.target_prec) {
    std::ostringstream msg;
    msg << "precision exhausted: residual known only to " << val_res << " digits, need " << prob.target_prec;
    throw PrecisionError(msg.str());
  }
  const int root_prec = val_res == PadicNumber::kInfinitePrecision ? work : std::min(work, val_res - v);
  res.root = x.with_prec(root_prec);
  res.val_residual = val_res;
  if (res.root.agreement(a) < std::min(val_fa - v, root_prec)) {
    throw ConvergenceError("root left the Hensel disk of the seed", transcript_json(res.transcript));
  }
  return res;
}

PadicNumber poly_eval(const Polynomial& f, const PadicNumber& x) {
  PadicNumber acc;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial poly_derivative(const Polynomial& f) {
  Polynomial d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i].mul_int(static_cast<long>(i)));
  return d;
}

Polynomial poly_mul(const Polynomial& f, const Polynomial& g) {
  if (f.empty() || g.empty()) return {};
  Polynomial h(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = h[i + j] + f[i] * g[j];
  }
  return h;
}

Polynomial poly_add(const Polynomial& f, const Polynomial& g) {
  Polynomial h(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i < f.size()) h[i] = h[i] + f[i];
    if (i < g.size()) h[i] = h[i] + g[i];
  }
  return h;
}

Polynomial poly_scale(const Polynomial& f, const PadicNumber& c) {
  Polynomial h;
  for (const auto& x : f) h.push_back(x * c);
  return h;
}

namespace {

struct Scanner {
  std::uint32_t p;
  int disk_val;
  int max_prec;
  RootScanOptions opts;
  Polynomial g;  // f(p^disk_val y)
  Polynomial dg;
  int coeff_prec;
  RootIsolation out;

  // Coefficients of g(a + p^k w) in w.
  std::vector<PadicNumber> taylor(const mpz_class& a, int k) const {
    std::vector<PadicNumber> c = g;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = n - 1; j > i; --j) c[j - 1] = c[j - 1] + c[j].mul_int(a);
    }
    for (std::size_t j = 0; j < n; ++j) c[j] = c[j].shifted(k * static_cast<int>(j));
    return c;
  }

  // Strassmann bound; -1 when precision cannot decide it.
  static int strassmann(const std::vector<PadicNumber>& b) {
    int m = PadicNumber::kInfinitePrecision;
    int count = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_nonzero()) continue;
      if (b[j].valuation() <= m) {
        m = b[j].valuation();
        count = static_cast<int>(j);
      }
    }
    if (count < 0) return -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_nonzero() || b[j].is_exact_zero()) continue;
      const int need = static_cast<int>(j) > count ? m + 1 : m;
      if (b[j].abs_prec() < need) return -1;
    }
    return count;
  }

  PadicNumber center(const mpz_class& a) const { return PadicNumber::from_integer(a, p, max_prec - disk_val + 4); }

  void visit(const mpz_class& a, int k) {
    const auto b = taylor(a, k);
    const int bound = strassmann(b);
    if (bound == 0) return;
    if (bound == 1 && k >= opts.scan_depth && try_lift(a, k)) return;
    if (k >= opts.depth_cap) {
      out.unresolved.push_back({center(a).shifted(disk_val), k, bound});
      return;
    }
    const mpz_class step = pow_p(p, k);
    for (std::uint32_t c = 0; c < p; ++c) visit(a + step * c, k + 1);
  }

  bool try_lift(const mpz_class& a, int k) {
    const auto ya = center(a);
    const auto ga = poly_eval(g, ya);
    const auto da = poly_eval(dg, ya);
    if (!da.is_nonzero()) return false;
    const int vd = da.valuation();
    if (ga.is_nonzero() && ga.valuation() <= 2 * vd) return false;
    NewtonProblem prob;
    prob.eval = [this](const PadicNumber& y) { return poly_eval(g, y); };
    prob.deriv = [this](const PadicNumber& y) { return poly_eval(dg, y); };
    prob.seed = ya;
    prob.target_prec = std::min(max_prec - disk_val, coeff_prec - std::max(vd, 0));
    if (prob.target_prec <= 0) return false;
    NewtonResult res;
    try {
      res = newton_solve(prob);
    } catch (const ConvergenceError&) {
      return false;
    } catch (const PrecisionError&) {
      return false;
    }
    out.roots.push_back({res.root.shifted(disk_val), k, res.transcript});
    return true;
  }
};

}  // namespace

RootIsolation poly_roots_in_disk(const Polynomial& f, int disk_val, int max_prec, const RootScanOptions& opts) {
  std::uint32_t p = 0;
  for (const auto& c : f) p = std::max(p, c.prime());
  check_prime(p);
  Scanner s{p, disk_val, max_prec, opts, {}, {}, PadicNumber::kInfinitePrecision, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.g.push_back(f[i].is_exact_zero() ? PadicNumber::zero(p) : f[i].shifted(disk_val * static_cast<int>(i)));
    s.coeff_prec = std::min(s.coeff_prec, s.g.back().abs_prec());
  }
  while (!s.g.empty() && s.g.back().is_exact_zero()) s.g.pop_back();
  if (s.g.empty() || std::none_of(s.g.begin(), s.g.end(), [](const PadicNumber& c) { return c.is_nonzero(); })) {
    throw PrecisionError("polynomial is indistinguishable from zero at working precision");
  }
  if (s.coeff_prec == PadicNumber::kInfinitePrecision) s.coeff_prec = max_prec - disk_val;
  s.dg = poly_derivative(s.g);
  s.visit(0, 0);
  return std::move(s.out);
}

}  // namespace padtors
