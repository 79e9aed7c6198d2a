#include "theta_atlas/mp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace theta_atlas {

namespace {

thread_local int tl_digits = 50;

mpfr_prec_t cur_bits() { return digits_to_bits(tl_digits); }

}  // namespace

int current_digits() { return tl_digits; }

mpfr_prec_t digits_to_bits(int digits) {
  if (digits < 5) digits = 5;
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

PrecisionScope::PrecisionScope(int digits) : saved_(tl_digits) { tl_digits = digits; }
PrecisionScope::~PrecisionScope() { tl_digits = saved_; }

Real::Real() {
  mpfr_init2(value_, cur_bits());
  mpfr_set_zero(value_, 1);
}

Real::Real(double v) {
  mpfr_init2(value_, cur_bits());
  mpfr_set_d(value_, v, MPFR_RNDN);
}

Real::Real(int v) {
  mpfr_init2(value_, cur_bits());
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(long v) {
  mpfr_init2(value_, cur_bits());
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(std::string_view decimal) {
  mpfr_init2(value_, cur_bits());
  std::string s(decimal);
  if (mpfr_set_str(value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(value_);
    throw std::invalid_argument("not a decimal number: " + s);
  }
}

Real::Real(const Real& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d == nullptr) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
  } else if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
  }
  mpfr_set(value_, other.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  std::swap(value_[0], other.value_[0]);
  return *this;
}

Real::~Real() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

long Real::exponent2() const {
  if (mpfr_zero_p(value_)) return -(1L << 40);
  return mpfr_get_exp(value_);
}

bool Real::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool Real::is_finite() const { return mpfr_number_p(value_) != 0; }
int Real::sign() const { return mpfr_sgn(value_); }

std::string Real::sci(int digits) const {
  if (digits < 1) digits = 1;
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, value_);
  return std::string(buf.data());
}

std::string Real::fixed(int decimals) const {
  if (decimals < 0) decimals = 0;
  long e10 = 0;
  if (!is_zero()) e10 = static_cast<long>(std::abs(exponent2()) * 0.30103) + 4;
  std::vector<char> buf(static_cast<size_t>(decimals + e10) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", decimals, value_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& b) {
  mpfr_add(value_, value_, b.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& b) {
  mpfr_sub(value_, value_, b.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& b) {
  mpfr_mul(value_, value_, b.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& b) {
  mpfr_div(value_, value_, b.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(double b) {
  mpfr_mul_d(value_, value_, b, MPFR_RNDN);
  return *this;
}

Real operator-(const Real& a) {
  Real r;
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

#define THETA_ATLAS_BINOP(op, fn)                  \
  Real operator op(const Real& a, const Real& b) { \
    Real r;                                        \
    fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);      \
    return r;                                      \
  }
THETA_ATLAS_BINOP(+, mpfr_add)
THETA_ATLAS_BINOP(-, mpfr_sub)
THETA_ATLAS_BINOP(*, mpfr_mul)
THETA_ATLAS_BINOP(/, mpfr_div)
#undef THETA_ATLAS_BINOP

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
bool operator!=(const Real& a, const Real& b) { return !(a == b); }

#define THETA_ATLAS_UNARY(name, fn)   \
  Real name(const Real& a) {          \
    Real r;                           \
    fn(r.raw(), a.raw(), MPFR_RNDN);  \
    return r;                         \
  }
THETA_ATLAS_UNARY(abs, mpfr_abs)
THETA_ATLAS_UNARY(sqrt, mpfr_sqrt)
THETA_ATLAS_UNARY(exp, mpfr_exp)
THETA_ATLAS_UNARY(log, mpfr_log)
THETA_ATLAS_UNARY(log1p, mpfr_log1p)
THETA_ATLAS_UNARY(sin, mpfr_sin)
THETA_ATLAS_UNARY(cos, mpfr_cos)
#undef THETA_ATLAS_UNARY

Real pow(const Real& a, const Real& b) {
  Real r;
  mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& a, long n) {
  Real r;
  mpfr_pow_si(r.raw(), a.raw(), n, MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real hypot(const Real& a, const Real& b) {
  Real r;
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& a, long e) {
  Real r;
  mpfr_mul_2si(r.raw(), a.raw(), e, MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return a < b ? a : b; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

void mul_to(Real& out, const Real& a, const Real& b) { mpfr_mul(out.raw(), a.raw(), b.raw(), MPFR_RNDN); }
void add_to(Real& out, const Real& a, const Real& b) { mpfr_add(out.raw(), a.raw(), b.raw(), MPFR_RNDN); }
void sub_to(Real& out, const Real& a, const Real& b) { mpfr_sub(out.raw(), a.raw(), b.raw(), MPFR_RNDN); }

Complex& Complex::operator+=(const Complex& b) {
  re += b.re;
  im += b.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& b) {
  re -= b.re;
  im -= b.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& b) {
  *this = *this * b;
  return *this;
}

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }

Complex operator/(const Complex& a, const Complex& b) {
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (abs(b.re) >= abs(b.im)) {
    Real r = b.im / b.re;
    Real d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  Real r = b.re / b.im;
  Real d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }

Real abs(const Complex& a) { return hypot(a.re, a.im); }
Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
Complex conj(const Complex& a) {
  Complex out(a.re, a.im);
  mpfr_neg(out.im.raw(), out.im.raw(), MPFR_RNDN);
  return out;
}
Real arg(const Complex& a) { return atan2(a.im, a.re); }

ComplexMac::ComplexMac() = default;

void ComplexMac::horner_step(Complex& acc, const Complex& z, const Complex& c) {
  mul_to(t1_, acc.re, z.re);
  mul_to(t2_, acc.im, z.im);
  sub_to(t1_, t1_, t2_);
  add_to(t1_, t1_, c.re);
  mul_to(t2_, acc.re, z.im);
  mul_to(t3_, acc.im, z.re);
  add_to(acc.im, t2_, t3_);
  acc.im += c.im;
  std::swap(acc.re, t1_);
}

void ComplexMac::horner_step(Complex& acc, const Complex& z, const Real& c) {
  mul_to(t1_, acc.re, z.re);
  mul_to(t2_, acc.im, z.im);
  sub_to(t1_, t1_, t2_);
  add_to(t1_, t1_, c);
  mul_to(t2_, acc.re, z.im);
  mul_to(t3_, acc.im, z.re);
  add_to(acc.im, t2_, t3_);
  std::swap(acc.re, t1_);
}

void ComplexMac::mul(Complex& out, const Complex& a, const Complex& b) {
  mul_to(t1_, a.re, b.re);
  mul_to(t2_, a.im, b.im);
  sub_to(out.re, t1_, t2_);
  mul_to(t1_, a.re, b.im);
  mul_to(t2_, a.im, b.re);
  add_to(out.im, t1_, t2_);
}

}  // namespace theta_atlas
