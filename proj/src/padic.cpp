#include "padtors/padic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <regex>
#include <sstream>

namespace padtors {

namespace {

std::uint32_t common_prime(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() == b.prime()) return a.prime();
  if (a.prime() == 0) return b.prime();
  if (b.prime() == 0) return a.prime();
  throw DomainError("p-adic operands over different primes");
}

mpz_class mod_pow_p(const mpz_class& x, std::uint32_t p, int k) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), pow_p(p, k).get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& u, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DomainError("inverse of a non-unit");
  }
  return r;
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Tonelli-Shanks; a must be a nonzero quadratic residue mod p.
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
  a %= p;
  std::uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod64(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod64(z, q, p);
  std::uint64_t t = powmod64(a, q, p);
  std::uint64_t r = powmod64(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

bool is_qr_mod_p(const mpz_class& unit, std::uint32_t p) {
  const std::uint64_t u = mpz_fdiv_ui(unit.get_mpz_t(), p);
  return powmod64(u, (p - 1) / 2, p) == 1;
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void check_prime(std::uint32_t p) {
  if (p == 2 || p == 3) throw DomainError("p must differ from 2 and 3");
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
}

const mpz_class& pow_p(std::uint32_t p, int k) {
  // Per-thread tables: no locking on the hot path.
  thread_local std::uint32_t last_p = 0;
  thread_local std::vector<std::unique_ptr<mpz_class>>* last = nullptr;
  thread_local std::map<std::uint32_t, std::vector<std::unique_ptr<mpz_class>>> cache;
  if (k < 0) throw std::logic_error("pow_p: negative exponent");
  if (p != last_p || !last) {
    last = &cache[p];
    last_p = p;
  }
  auto& table = *last;
  if (table.empty()) table.push_back(std::make_unique<mpz_class>(1));
  while (static_cast<int>(table.size()) <= k) {
    table.push_back(std::make_unique<mpz_class>(*table.back() * p));
  }
  return *table[k];
}

int valuation_of(const mpz_class& n, std::uint32_t p) {
  if (n == 0) throw std::logic_error("valuation of zero");
  mpz_class rest;
  mpz_class prime = p;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

PadicNumber PadicNumber::zero(std::uint32_t p) {
  PadicNumber z;
  z.p_ = p;
  return z;
}

PadicNumber PadicNumber::zero_to_precision(std::uint32_t p, int prec) {
  if (prec <= 0) throw PrecisionError("precision exhausted: result known only modulo p^" + std::to_string(prec));
  PadicNumber z;
  z.p_ = p;
  z.exact_zero_ = false;
  z.val_ = prec;
  z.prec_ = prec;
  return z;
}

PadicNumber PadicNumber::normalized(std::uint32_t p, int val, mpz_class raw, int prec) {
  if (raw == 0) return zero_to_precision(p, prec);
  mpz_class prime = p;
  val += static_cast<int>(mpz_remove(raw.get_mpz_t(), raw.get_mpz_t(), prime.get_mpz_t()));
  if (val >= prec) return zero_to_precision(p, prec);
  PadicNumber r;
  r.p_ = p;
  r.exact_zero_ = false;
  r.val_ = val;
  r.prec_ = prec;
  r.unit_ = mod_pow_p(raw, p, prec - val);
  return r;
}

PadicNumber PadicNumber::from_scaled(std::uint32_t p, int val, const mpz_class& raw, int prec) {
  check_prime(p);
  return normalized(p, val, raw, prec);
}

PadicNumber PadicNumber::from_rational(const mpz_class& num, const mpz_class& den, std::uint32_t p,
                                       int prec) {
  if (den == 0) throw DomainError("rational with zero denominator");
  check_prime(p);
  if (prec <= 0) throw DomainError("precision must be positive");
  if (num == 0) return zero(p);
  mpz_class prime = p, n = num, d = den;
  const int vn = static_cast<int>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
  const int vd = static_cast<int>(mpz_remove(d.get_mpz_t(), d.get_mpz_t(), prime.get_mpz_t()));
  const int val = vn - vd;
  if (val >= prec) return zero_to_precision(p, prec);
  const mpz_class& m = pow_p(p, prec - val);
  return normalized(p, val, n * inverse_mod(d, m), prec);
}

PadicNumber PadicNumber::from_integer(const mpz_class& n, std::uint32_t p, int prec) {
  return from_rational(n, 1, p, prec);
}

PadicNumber PadicNumber::from_digits(std::uint32_t p, int val, const std::vector<std::uint32_t>& digits,
                                     int prec) {
  check_prime(p);
  mpz_class raw = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p) throw DomainError("digit out of range");
    raw = raw * p + digits[i];
  }
  return normalized(p, val, raw, prec);
}

bool PadicNumber::is_zero() const {
  if (exact_zero_) return true;
  if (unit_ != 0) return false;
  throw PrecisionError("value is zero only to precision " + std::to_string(prec_) +
                       "; equality with zero is undecidable");
}

int PadicNumber::rel_prec() const noexcept { return is_nonzero() ? prec_ - val_ : 0; }

std::vector<std::uint32_t> PadicNumber::digits() const {
  std::vector<std::uint32_t> out;
  if (!is_nonzero()) return out;
  mpz_class u = unit_;
  const int n = rel_prec();
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(static_cast<std::uint32_t>(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_)));
  }
  return out;
}

std::uint32_t PadicNumber::leading_digit() const {
  if (!is_nonzero()) throw PrecisionError("leading digit of zero");
  return static_cast<std::uint32_t>(mpz_fdiv_ui(unit_.get_mpz_t(), p_));
}

mpz_class PadicNumber::representative() const {
  if (exact_zero_) return 0;
  if (val_ < 0) throw DomainError("representative of a non-integral p-adic number");
  return unit_ * pow_p(p_, val_);
}

mpq_class PadicNumber::to_rational() const {
  if (!is_nonzero()) return 0;
  if (val_ >= 0) return mpq_class(unit_ * pow_p(p_, val_));
  mpq_class r(unit_, pow_p(p_, -val_));
  r.canonicalize();
  return r;
}

PadicNumber PadicNumber::operator-() const {
  if (!is_nonzero()) return *this;
  PadicNumber r = *this;
  r.unit_ = mod_pow_p(-unit_, p_, prec_ - val_);
  return r;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  const std::uint32_t p = common_prime(a, b);
  if (a.exact_zero_) {
    PadicNumber r = b;
    r.p_ = p;
    return r;
  }
  if (b.exact_zero_) return a;
  const int prec = std::min(a.prec_, b.prec_);
  const int m = std::min(a.val_, b.val_);
  if (m >= prec) return PadicNumber::zero_to_precision(p, prec);
  mpz_class raw = 0;
  if (a.unit_ != 0) raw += a.unit_ * pow_p(p, a.val_ - m);
  if (b.unit_ != 0) raw += b.unit_ * pow_p(p, b.val_ - m);
  return PadicNumber::normalized(p, m, std::move(raw), prec);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  const std::uint32_t p = common_prime(a, b);
  if (a.exact_zero_ || b.exact_zero_) return PadicNumber::zero(p);
  const int prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
  if (a.unit_ == 0 || b.unit_ == 0) return PadicNumber::zero_to_precision(p, prec);
  return PadicNumber::normalized(p, a.val_ + b.val_, a.unit_ * b.unit_, prec);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  const std::uint32_t p = common_prime(a, b);
  if (b.exact_zero_) throw PrecisionError("division by exact zero");
  if (b.unit_ == 0) {
    throw PrecisionError("division by a value indistinguishable from zero (O(p^" +
                         std::to_string(b.prec_) + "))");
  }
  if (a.exact_zero_) return PadicNumber::zero(p);
  const int vb = b.val_;
  const int rb = b.prec_ - vb;
  const int prec = std::min(a.prec_, a.val_ + rb) - vb;
  if (a.unit_ == 0) return PadicNumber::zero_to_precision(p, prec);
  const int val = a.val_ - vb;
  if (val >= prec) return PadicNumber::zero_to_precision(p, prec);
  const mpz_class& m = pow_p(p, prec - val);
  return PadicNumber::normalized(p, val, a.unit_ * inverse_mod(b.unit_, m), prec);
}

PadicNumber PadicNumber::mul_int(const mpz_class& k) const {
  if (k == 0 || exact_zero_) return zero(p_);
  const int vk = valuation_of(k, p_);
  if (unit_ == 0) return zero_to_precision(p_, prec_ + vk);
  return normalized(p_, val_, unit_ * k, prec_ + vk);
}

PadicNumber PadicNumber::div_int(const mpz_class& k) const {
  if (k == 0) throw PrecisionError("division by exact zero");
  if (exact_zero_) return *this;
  mpz_class prime = p_, rest = k;
  const int vk = static_cast<int>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t()));
  const int prec = prec_ - vk;
  if (unit_ == 0) return zero_to_precision(p_, prec);
  const int val = val_ - vk;
  const mpz_class& m = pow_p(p_, prec - val);
  return normalized(p_, val, unit_ * inverse_mod(rest, m), prec);
}

PadicNumber PadicNumber::inverse() const {
  if (exact_zero_) throw PrecisionError("inverse of exact zero");
  if (unit_ == 0) throw PrecisionError("inverse of a value indistinguishable from zero");
  const int r = prec_ - val_;
  const mpz_class& m = pow_p(p_, r);
  return normalized(p_, -val_, inverse_mod(unit_, m), r - val_);
}

PadicNumber PadicNumber::pow(unsigned e) const {
  if (e == 0) {
    if (exact_zero_) throw DomainError("0^0");
    return from_integer(1, p_, std::max(prec_ - std::min(val_, 0), 1));
  }
  PadicNumber base = *this;
  PadicNumber acc;
  bool have = false;
  while (e) {
    if (e & 1) {
      acc = have ? acc * base : base;
      have = true;
    }
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

PadicNumber PadicNumber::shifted(int k) const {
  if (exact_zero_) return *this;
  PadicNumber r = *this;
  r.val_ += k;
  r.prec_ += k;
  if (r.unit_ == 0 && r.prec_ <= 0) return zero_to_precision(p_, r.prec_);
  return r;
}

PadicNumber PadicNumber::with_prec(int prec) const {
  if (exact_zero_ || prec >= prec_) return *this;
  if (val_ >= prec) return zero_to_precision(p_, prec);
  return normalized(p_, val_, unit_, prec);
}

PadicNumber PadicNumber::lifted(int prec) const {
  if (exact_zero_ || prec <= prec_) return with_prec(prec);
  if (unit_ == 0) return zero_to_precision(p_, prec);
  PadicNumber r = *this;
  r.prec_ = prec;
  return r;
}

bool PadicNumber::is_square() const {
  if (!is_nonzero()) return true;
  if (val_ % 2 != 0) return false;
  return is_qr_mod_p(unit_, p_);
}

PadicNumber PadicNumber::sqrt() const {
  if (exact_zero_) return *this;
  if (unit_ == 0) return zero_to_precision(p_, (prec_ + 1) / 2);
  if (val_ % 2 != 0) throw DomainError("square root of a value with odd valuation");
  if (!is_qr_mod_p(unit_, p_)) throw DomainError("square root of a non-square unit");
  const int r = prec_ - val_;
  const mpz_class& m = pow_p(p_, r);
  std::uint64_t w0 = sqrt_mod_prime(mpz_fdiv_ui(unit_.get_mpz_t(), p_), p_);
  if (w0 > (p_ - 1) / 2) w0 = p_ - w0;
  mpz_class w = static_cast<unsigned long>(w0);
  const mpz_class inv2 = inverse_mod(2, m);
  // Newton on w^2 = u; the number of correct digits doubles each step.
  for (int correct = 1; correct < r; correct *= 2) {
    w = (w + unit_ * inverse_mod(w, m)) * inv2;
    mpz_mod(w.get_mpz_t(), w.get_mpz_t(), m.get_mpz_t());
  }
  return normalized(p_, val_ / 2, w, val_ / 2 + r);
}

int PadicNumber::agreement(const PadicNumber& other) const {
  const PadicNumber d = *this - other;
  return d.valuation();
}

bool PadicNumber::agrees_with(const PadicNumber& other, int digits) const {
  const PadicNumber d = *this - other;
  if (d.exact_zero_) return true;
  if (d.unit_ != 0) return d.val_ >= digits;
  if (d.prec_ >= digits) return true;
  throw PrecisionError("cannot certify agreement to " + std::to_string(digits) +
                       " digits: difference known only modulo p^" + std::to_string(d.prec_));
}

bool PadicNumber::equals(const PadicNumber& other) const { return (*this - other).is_zero(); }

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  return a.p_ == b.p_ && a.exact_zero_ == b.exact_zero_ && a.val_ == b.val_ &&
         a.prec_ == b.prec_ && a.unit_ == b.unit_;
}

std::string PadicNumber::to_string() const {
  if (exact_zero_) return "0";
  std::ostringstream out;
  if (unit_ == 0) {
    out << "O(" << p_ << "^" << prec_ << ")";
    return out.str();
  }
  out << p_ << "^" << val_ << " * (";
  const auto ds = digits();
  bool first = true;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i] == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << ds[i];
    if (i == 1) out << "*" << p_;
    if (i > 1) out << "*" << p_ << "^" << i;
  }
  out << ") + O(" << p_ << "^" << prec_ << ")";
  return out.str();
}

PadicNumber PadicNumber::parse(const std::string& text) {
  static const std::regex zero_re(R"(^\s*O\((\d+)\^(-?\d+)\)\s*$)");
  static const std::regex full_re(R"(^\s*(\d+)\^(-?\d+)\s*\*\s*\((.*)\)\s*\+\s*O\((\d+)\^(-?\d+)\)\s*$)");
  static const std::regex term_re(R"(^\s*(\d+)(?:\s*\*\s*(\d+)(?:\^(\d+))?)?\s*$)");
  static const std::regex exact_re(R"(^\s*0\s*$)");
  std::smatch m;
  if (std::regex_match(text, exact_re)) return PadicNumber();
  if (std::regex_match(text, m, zero_re)) {
    const auto p = static_cast<std::uint32_t>(std::stoul(m[1]));
    check_prime(p);
    return zero_to_precision(p, std::stoi(m[2]));
  }
  if (!std::regex_match(text, m, full_re)) throw DomainError("malformed p-adic literal: " + text);
  const auto p = static_cast<std::uint32_t>(std::stoul(m[1]));
  if (std::stoul(m[4]) != p) throw DomainError("mismatched primes in p-adic literal");
  check_prime(p);
  const int val = std::stoi(m[2]);
  const int prec = std::stoi(m[5]);
  const std::string body = m[3];
  mpz_class raw = 0;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('+', start);
    if (end == std::string::npos) end = body.size();
    const std::string term = body.substr(start, end - start);
    std::smatch tm;
    if (!std::regex_match(term, tm, term_re)) throw DomainError("malformed digit term: " + term);
    const mpz_class d(tm[1].str());
    if (d >= p) throw DomainError("digit out of range: " + term);
    int k = 0;
    if (tm[2].matched) {
      if (std::stoul(tm[2]) != p) throw DomainError("digit term over wrong prime: " + term);
      k = tm[3].matched ? std::stoi(tm[3]) : 1;
    }
    raw += d * pow_p(p, k);
    start = end + 1;
  }
  if (raw % p == 0) throw DomainError("leading digit must be nonzero: " + text);
  return normalized(p, val, raw, prec);
}

void ProductSum::add(const PadicNumber& a, const PadicNumber& b) {
  if (a.exact_zero_ || b.exact_zero_) return;
  any_ = true;
  prec_ = std::min({prec_, a.prec_ + b.val_, b.prec_ + a.val_});
  if (a.unit_ == 0 || b.unit_ == 0) return;
  const int v = a.val_ + b.val_;
  if (v >= prec_) return;
  if (raw_ == 0) {
    val_ = v;
    raw_ = a.unit_ * b.unit_;
  } else if (v >= val_) {
    raw_ += a.unit_ * b.unit_ * pow_p(p_, v - val_);
  } else {
    raw_ = raw_ * pow_p(p_, val_ - v) + a.unit_ * b.unit_;
    val_ = v;
  }
}

PadicNumber ProductSum::result() const {
  if (!any_) return PadicNumber::zero(p_);
  if (raw_ == 0 || val_ >= prec_) return PadicNumber::zero_to_precision(p_, prec_);
  return PadicNumber::normalized(p_, val_, raw_, prec_);
}

mpq_class parse_rational(const std::string& text) {
  static const std::regex rat_re(R"(^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, rat_re)) throw DomainError("malformed rational: " + text);
  const mpz_class num(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str());
  mpz_class den = 1;
  if (m[2].matched) den = mpz_class(m[2].str()[0] == '+' ? m[2].str().substr(1) : m[2].str());
  if (den == 0) throw DomainError("rational with zero denominator: " + text);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace padtors
