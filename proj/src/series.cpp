#include "padtors/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace padtors {

namespace {

std::uint32_t common_prime(std::uint32_t a, std::uint32_t b) {
  if (a == b || b == 0) return a;
  if (a == 0) return b;
  throw DomainError("series over different primes");
}

int saturating_mul(int a, int b) {
  const long long r = static_cast<long long>(a) * b;
  return r >= PadicSeries::kPolynomial ? PadicSeries::kPolynomial : static_cast<int>(r);
}

// Product of coefficient vectors (both starting at x^0), keeping indices < limit.
std::vector<PadicNumber> mul_coeffs(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b,
                                    std::size_t limit, std::uint32_t p) {
  const std::size_t full = a.empty() || b.empty() ? 0 : a.size() + b.size() - 1;
  const std::size_t n = std::min(full, limit);
  std::vector<PadicNumber> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ProductSum s(p);
    const std::size_t lo = k + 1 > b.size() ? k + 1 - b.size() : 0;
    for (std::size_t i = lo; i < a.size() && i <= k; ++i) s.add(a[i], b[k - i]);
    out.push_back(s.result());
  }
  return out;
}

}  // namespace

PadicSeries::PadicSeries(std::uint32_t p, std::vector<PadicNumber> coeffs, int trunc, int lead_offset)
    : p_(p), offset_(lead_offset), trunc_(trunc), coeffs_(std::move(coeffs)) {
  if (trunc_ <= offset_) throw DomainError("series truncation must exceed its leading offset");
  for (const auto& c : coeffs_) common_prime(p_, c.prime());
  if (is_polynomial()) {
    while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
  } else {
    const auto n = static_cast<std::size_t>(trunc_ - offset_);
    if (coeffs_.size() > n) coeffs_.resize(n);
    while (coeffs_.size() < n) coeffs_.push_back(PadicNumber::zero(p_));
  }
}

PadicSeries PadicSeries::polynomial(std::uint32_t p, std::vector<PadicNumber> coeffs, int lead_offset) {
  return PadicSeries(p, std::move(coeffs), kPolynomial, lead_offset);
}

PadicSeries PadicSeries::from_rationals(std::uint32_t p, int prec, const std::vector<mpq_class>& coeffs,
                                        int trunc) {
  std::vector<PadicNumber> cs;
  cs.reserve(coeffs.size());
  for (const auto& q : coeffs) cs.push_back(PadicNumber::from_rational(q.get_num(), q.get_den(), p, prec));
  return PadicSeries(p, std::move(cs), trunc, 0);
}

PadicSeries PadicSeries::variable(std::uint32_t p, int prec) {
  return polynomial(p, {PadicNumber::zero(p), PadicNumber::from_integer(1, p, prec)});
}

PadicNumber PadicSeries::coeff(int k) const {
  if (k >= trunc_) throw DomainError("coefficient beyond the series truncation");
  if (k < offset_ || k >= end_index()) return PadicNumber::zero(p_);
  return coeffs_[static_cast<std::size_t>(k - offset_)];
}

int PadicSeries::min_abs_prec() const {
  int m = PadicNumber::kInfinitePrecision;
  for (const auto& c : coeffs_) m = std::min(m, c.abs_prec());
  return m;
}

int PadicSeries::min_valuation() const {
  int m = PadicNumber::kInfinitePrecision;
  for (const auto& c : coeffs_) {
    if (!c.is_exact_zero()) m = std::min(m, c.valuation());
  }
  return m == PadicNumber::kInfinitePrecision ? 0 : m;
}

bool PadicSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const PadicNumber& c) { return c.is_integral(); });
}

PadicSeries PadicSeries::truncated(int trunc) const {
  if (trunc >= trunc_) return *this;
  std::vector<PadicNumber> cs(coeffs_.begin(),
                              coeffs_.begin() + std::clamp(trunc - offset_, 0, static_cast<int>(coeffs_.size())));
  return PadicSeries(p_, std::move(cs), trunc, offset_);
}

PadicSeries PadicSeries::with_prec(int prec) const {
  PadicSeries r = *this;
  for (auto& c : r.coeffs_) c = c.with_prec(prec);
  return r;
}

PadicSeries PadicSeries::operator-() const {
  PadicSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

PadicSeries operator+(const PadicSeries& f, const PadicSeries& g) {
  const std::uint32_t p = common_prime(f.p_, g.p_);
  const int offset = std::min(f.offset_, g.offset_);
  const int trunc = std::min(f.trunc_, g.trunc_);
  const int end = std::min(std::max(f.end_index(), g.end_index()), trunc);
  std::vector<PadicNumber> cs;
  for (int k = offset; k < end; ++k) cs.push_back(f.coeff(k) + g.coeff(k));
  return PadicSeries(p, std::move(cs), trunc, offset);
}

PadicSeries operator-(const PadicSeries& f, const PadicSeries& g) { return f + (-g); }

namespace {

// Index of the first coefficient that is not an exact zero.
int known_order(const PadicSeries& f) {
  const auto& cs = f.coeffs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!cs[i].is_exact_zero()) return f.lead_offset() + static_cast<int>(i);
  }
  return f.end_index();
}

}  // namespace

PadicSeries operator*(const PadicSeries& f, const PadicSeries& g) {
  const std::uint32_t p = common_prime(f.p_, g.p_);
  const int offset = f.offset_ + g.offset_;
  int trunc = PadicSeries::kPolynomial;
  if (!f.is_polynomial()) trunc = std::min(trunc, f.trunc_ + std::min(known_order(g), g.trunc_));
  if (!g.is_polynomial()) trunc = std::min(trunc, g.trunc_ + std::min(known_order(f), f.trunc_));
  const std::size_t limit =
      trunc == PadicSeries::kPolynomial ? f.coeffs_.size() + g.coeffs_.size() : static_cast<std::size_t>(trunc - offset);
  return PadicSeries(p, mul_coeffs(f.coeffs_, g.coeffs_, limit, p), trunc, offset);
}

PadicSeries PadicSeries::scaled(const PadicNumber& c) const {
  PadicSeries r = *this;
  r.p_ = common_prime(p_, c.prime());
  for (auto& x : r.coeffs_) x = x * c;
  return r;
}

PadicSeries PadicSeries::pow(unsigned e) const {
  if (e == 0) {
    const int prec = std::clamp(min_abs_prec(), 1, PadicNumber::kInfinitePrecision - 1);
    return polynomial(p_, {PadicNumber::from_integer(1, p_, prec)});
  }
  PadicSeries acc = *this;
  for (unsigned i = 1; i < e; ++i) acc = acc * *this;
  return acc;
}

PadicSeries PadicSeries::compose(const PadicSeries& g) const {
  const std::uint32_t p = common_prime(p_, g.p_);
  if (offset_ < 0) throw DomainError("composition of a Laurent series with a principal part");
  if (g.offset_ < 0) throw DomainError("composition into a Laurent series");

  // x-adic order of g
  int v = 0;
  const PadicNumber g0 = g.coeff(0);
  if (g0.is_exact_zero()) {
    v = 1;
    while (v < g.end_index() && g.coeff(v).is_exact_zero()) ++v;
  }

  int trunc;
  std::vector<int> caps;
  if (v >= 1) {
    trunc = is_polynomial() ? g.trunc_ : std::min({trunc_, g.trunc_, saturating_mul(trunc_, v)});
  } else if (is_polynomial()) {
    trunc = g.trunc_;
  } else {
    // The unknown tail sum_{i >= T_f} f_i g^i contributes to x^j with valuation at least
    // min_valuation(f) + (T_f - j) * val(g(0)) when g has integral higher coefficients.
    const int w = g0.valuation();
    if (w < 1) throw DomainError("divergent composition: g(0) is a unit");
    for (int k = 1; k < g.end_index(); ++k) {
      if (!g.coeff(k).is_integral()) throw DomainError("composition needs integral higher coefficients in g");
    }
    const int mv = min_valuation();
    trunc = std::min(trunc_, g.trunc_);
    for (int j = 0; j < trunc; ++j) {
      const int cap = mv + (trunc_ - j) * w;
      if (cap <= 0) {
        trunc = j;
        break;
      }
      caps.push_back(cap);
    }
    if (trunc <= 0) throw PrecisionError("composition leaves no certified coefficient");
  }

  std::vector<PadicNumber> gc;
  for (int k = 0; k < g.end_index() && k < trunc; ++k) gc.push_back(g.coeff(k));
  const std::size_t limit = trunc == kPolynomial ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(trunc);

  std::vector<PadicNumber> acc;
  for (int i = end_index() - 1; i >= 0; --i) {
    acc = mul_coeffs(acc, gc, limit, p);
    const PadicNumber fi = coeff(i);
    if (acc.empty()) {
      acc.push_back(fi);
    } else {
      acc[0] = acc[0] + fi;
    }
  }
  if (acc.empty()) acc.push_back(PadicNumber::zero(p));
  for (std::size_t j = 0; j < caps.size() && j < acc.size(); ++j) acc[j] = acc[j].with_prec(caps[j]);
  return PadicSeries(p, std::move(acc), trunc, 0);
}

PadicSeries PadicSeries::reciprocal() const {
  int lead = offset_;
  while (lead < end_index() && coeff(lead).is_exact_zero()) ++lead;
  if (lead >= end_index()) throw PrecisionError("reciprocal of a zero series");
  const PadicNumber c0 = coeff(lead);
  if (c0.is_indistinguishable_from_zero()) {
    throw PrecisionError("reciprocal: leading coefficient indistinguishable from zero");
  }
  if (!c0.is_unit()) throw DomainError("reciprocal: leading coefficient is not a unit");
  const int n = is_polynomial() ? kDefaultSeriesOrder : trunc_ - lead;
  if (n <= 0) throw PrecisionError("reciprocal: no terms left after normalization");
  const PadicNumber inv0 = c0.inverse();
  std::vector<PadicNumber> h;
  h.reserve(n);
  h.push_back(inv0);
  for (int k = 1; k < n; ++k) {
    PadicNumber s = PadicNumber::zero(p_);
    for (int i = 1; i <= k; ++i) {
      const PadicNumber ci = (lead + i < end_index()) ? coeff(lead + i) : PadicNumber::zero(p_);
      if (ci.is_exact_zero()) continue;
      s = s + ci * h[k - i];
    }
    h.push_back(-(s * inv0));
  }
  return PadicSeries(p_, std::move(h), -lead + n, -lead);
}

PadicSeries PadicSeries::sqrt() const {
  if (offset_ != 0) throw DomainError("sqrt: series must start at x^0");
  const PadicNumber c0 = coeff(0);
  const PadicNumber diff = c0 - PadicNumber::from_integer(1, p_, std::max(c0.abs_prec(), 1));
  if (diff.is_nonzero()) throw DomainError("sqrt: constant term must be 1");
  const int n = is_polynomial() ? kDefaultSeriesOrder : trunc_;
  std::vector<PadicNumber> s;
  s.reserve(n);
  s.push_back(c0);
  for (int k = 1; k < n; ++k) {
    PadicNumber acc = PadicNumber::zero(p_);
    for (int i = 1; i < k; ++i) acc = acc + s[i] * s[k - i];
    const PadicNumber ck = k < end_index() ? coeff(k) : PadicNumber::zero(p_);
    s.push_back((ck - acc).div_int(2));
  }
  return PadicSeries(p_, std::move(s), n, 0);
}

PadicSeries PadicSeries::comp_inverse() const {
  if (offset_ < 0) throw DomainError("compositional inverse of a Laurent series");
  const PadicNumber f0 = coeff(0);
  if (f0.is_nonzero()) throw DomainError("compositional inverse needs f(0) = 0");
  const PadicNumber f1 = coeff(1);
  if (!f1.is_unit()) {
    throw DomainError("linear coefficient is not a unit; use scaled inversion (hensel module)");
  }
  if (!is_integral()) throw DomainError("compositional inverse needs integral coefficients");
  const int T = is_polynomial() ? kDefaultSeriesOrder : trunc_;

  std::vector<PadicNumber> fc;
  fc.reserve(T);
  fc.push_back(PadicNumber::zero(p_));
  for (int k = 1; k < T; ++k) fc.push_back(k < end_index() ? coeff(k) : PadicNumber::zero(p_));
  const PadicSeries f(p_, fc, T, 0);
  const PadicSeries df = f.derive();
  const PadicNumber one = PadicNumber::from_integer(1, p_, f1.abs_prec());

  // Successive approximation by Newton steps, doubling the number of correct terms.
  std::vector<PadicNumber> g{PadicNumber::zero(p_), f1.inverse()};
  for (int n = 2; n < T;) {
    n = std::min(2 * n, T);
    g.resize(n, PadicNumber::zero(p_));
    const PadicSeries gn(p_, g, n, 0);
    PadicSeries e = f.truncated(n).compose(gn);
    std::vector<PadicNumber> ec(e.coeffs().begin(), e.coeffs().end());
    ec.resize(n, PadicNumber::zero(p_));
    ec[1] = ec[1] - one;
    const PadicSeries d = df.truncated(n).compose(gn.truncated(n));
    std::vector<PadicNumber> dc(d.coeffs().begin(), d.coeffs().end());
    dc.resize(n, PadicNumber::zero(p_));
    const PadicSeries dinv = PadicSeries(p_, dc, n, 0).reciprocal();
    const auto corr = mul_coeffs(ec, dinv.coeffs(), n, p_);
    for (int k = 0; k < n; ++k) g[k] = g[k] - corr[k];
  }
  g[0] = PadicNumber::zero(p_);
  PadicSeries inv(p_, std::move(g), T, 0);

  if (!inv.is_integral()) throw CertificationError("compositional inverse is not integral");
  const PadicSeries x = variable(p_, f1.abs_prec());
  for (const PadicSeries& id : {f.compose(inv), inv.compose(f)}) {
    const PadicSeries r = id - x;
    for (const auto& c : r.coeffs()) {
      if (c.is_nonzero()) throw CertificationError("compositional inverse failed the two-sided check");
    }
  }
  return inv;
}

PadicSeries PadicSeries::integrate() const {
  if (offset_ < 0) {
    for (int k = offset_; k < 0 && k < end_index(); ++k) {
      if (!coeff(k).is_exact_zero()) throw DomainError("integration of a series with negative powers");
    }
  }
  const int start = std::max(offset_, 0);
  std::vector<PadicNumber> cs;
  for (int k = start; k < end_index(); ++k) {
    const PadicNumber c = coeff(k);
    if (!c.is_exact_zero() && valuation_of(k + 1, p_) >= c.abs_prec()) {
      throw PrecisionError("integration exhausts the precision of coefficient " + std::to_string(k));
    }
    cs.push_back(c.div_int(k + 1));
  }
  const int trunc = is_polynomial() ? kPolynomial : trunc_ + 1;
  return PadicSeries(p_, std::move(cs), trunc, start + 1);
}

PadicSeries PadicSeries::derive() const {
  std::vector<PadicNumber> cs;
  int new_offset = offset_ - 1;
  for (int k = offset_; k < end_index(); ++k) {
    if (k == 0) {
      if (offset_ == 0) new_offset = 0;
      else cs.push_back(PadicNumber::zero(p_));
      continue;
    }
    cs.push_back(coeff(k).mul_int(k));
  }
  const int trunc = is_polynomial() ? kPolynomial : trunc_ - 1;
  if (!is_polynomial() && trunc <= new_offset) throw PrecisionError("derivative leaves no terms");
  return PadicSeries(p_, std::move(cs), trunc, new_offset);
}

PadicNumber PadicSeries::eval(const PadicNumber& t) const {
  common_prime(p_, t.prime());
  if (offset_ < 0) throw DomainError("evaluation of a Laurent series with a principal part");
  if (t.is_exact_zero()) return coeff(0);
  if (!is_polynomial() && t.valuation() < 1) throw DomainError("series evaluation needs val(t) >= 1");
  PadicNumber acc = PadicNumber::zero(p_);
  for (int k = end_index() - 1; k >= 0; --k) acc = acc * t + coeff(k);
  if (is_polynomial()) return acc;
  const long long tail = static_cast<long long>(trunc_) * t.valuation() + min_valuation();
  if (tail < 1) throw PrecisionError("series tail bound leaves no certified digit");
  return acc.with_prec(static_cast<int>(std::min<long long>(tail, PadicNumber::kInfinitePrecision - 1)));
}

int series_agreement(const PadicSeries& f, const PadicSeries& g, int upto) {
  int m = PadicNumber::kInfinitePrecision;
  for (int k = std::min(f.lead_offset(), g.lead_offset()); k < upto; ++k) {
    m = std::min(m, f.coeff(k).agreement(g.coeff(k)));
  }
  return m;
}

}  // namespace padtors
