#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every Real carries its own precision. Values produced by arithmetic
// operators are rounded to the calling thread's current precision, which is
// set with PrecisionScope. In-place operators (+=, *=, ...) keep the
// precision of the left operand.

#include <mpfr.h>

#include <complex>
#include <string>
#include <string_view>

namespace theta_atlas {

/// Decimal digits used for new values on this thread.
int current_digits();

/// Bits corresponding to `digits` decimal digits (with a few guard bits).
mpfr_prec_t digits_to_bits(int digits);

/// Raises (or lowers) the calling thread's working precision for the
/// lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class Real {
 public:
  Real();
  Real(double v);  // NOLINT(google-explicit-constructor)
  Real(int v);     // NOLINT(google-explicit-constructor)
  Real(long v);    // NOLINT(google-explicit-constructor)
  explicit Real(std::string_view decimal);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  double to_double() const;
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent2() const;
  bool is_zero() const;
  bool is_finite() const;
  int sign() const;

  /// Scientific notation with `digits` significant digits.
  std::string sci(int digits) const;
  /// Fixed notation with `decimals` digits after the point.
  std::string fixed(int decimals) const;

  Real& operator+=(const Real& b);
  Real& operator-=(const Real& b);
  Real& operator*=(const Real& b);
  Real& operator/=(const Real& b);
  Real& operator*=(double b);

 private:
  mpfr_t value_;
};

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);

Real abs(const Real& a);
Real sqrt(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real log1p(const Real& a);
Real pow(const Real& a, const Real& b);
Real pow(const Real& a, long n);
Real sin(const Real& a);
Real cos(const Real& a);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& a, const Real& b);
Real ldexp(const Real& a, long e);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real pi();

// Allocation-free kernels for hot loops: out = a op b at out's precision.
void mul_to(Real& out, const Real& a, const Real& b);
void add_to(Real& out, const Real& a, const Real& b);
void sub_to(Real& out, const Real& a, const Real& b);

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i) : re(r), im(i) {}
  explicit Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_cd() const { return {re.to_double(), im.to_double()}; }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  Complex& operator+=(const Complex& b);
  Complex& operator-=(const Complex& b);
  Complex& operator*=(const Complex& b);
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Real abs(const Complex& a);
Real norm(const Complex& a);
Complex conj(const Complex& a);
Real arg(const Complex& a);

/// Workspace for repeated complex multiply-accumulate without allocation.
class ComplexMac {
 public:
  ComplexMac();
  /// acc = acc * z + c
  void horner_step(Complex& acc, const Complex& z, const Complex& c);
  void horner_step(Complex& acc, const Complex& z, const Real& c);
  /// out = a * b
  void mul(Complex& out, const Complex& a, const Complex& b);

 private:
  Real t1_, t2_, t3_;
};

}  // namespace theta_atlas
