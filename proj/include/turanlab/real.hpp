#pragma once

// Extended-precision real numbers backed by MPFR.
//
// Every new value is created at the calling thread's working precision,
// which is set with a PrecisionScope. Copies keep the precision of their
// source, so values computed under a wider scope stay wide.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace turanlab {

/// Working precision in bits for values created on this thread.
long working_precision() noexcept;

/// Sets the working precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real();
  Real(double value);         // NOLINT(google-explicit-constructor)
  Real(int value);            // NOLINT(google-explicit-constructor)
  Real(long value);           // NOLINT(google-explicit-constructor)
  Real(long long value);      // NOLINT(google-explicit-constructor)
  Real(unsigned value);       // NOLINT(google-explicit-constructor)
  Real(unsigned long value);  // NOLINT(google-explicit-constructor)
  explicit Real(std::string_view decimal);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Scientific notation. digits == 0 picks enough digits to round-trip.
  std::string to_string(int digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(double rhs);
  Real& operator-=(double rhs);
  Real& operator*=(double rhs);
  Real& operator/=(double rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);
  Real& operator*=(int rhs) { return *this *= static_cast<long>(rhs); }
  Real& operator/=(int rhs) { return *this /= static_cast<long>(rhs); }

  Real operator-() const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator+(const Real& a, double b);
  friend Real operator-(const Real& a, double b);
  friend Real operator*(const Real& a, double b);
  friend Real operator/(const Real& a, double b);
  friend Real operator+(double a, const Real& b) { return b + a; }
  friend Real operator-(double a, const Real& b);
  friend Real operator*(double a, const Real& b) { return b * a; }
  friend Real operator/(double a, const Real& b);
  friend Real operator*(const Real& a, long b);
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(const Real& a, long b);
  friend Real operator*(const Real& a, int b) { return a * static_cast<long>(b); }
  friend Real operator*(int a, const Real& b) { return b * static_cast<long>(a); }
  friend Real operator/(const Real& a, int b) { return a / static_cast<long>(b); }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.value_, b) == 0 && a.is_finite(); }
  friend std::partial_ordering operator<=>(const Real& a, double b);

 private:
  struct Uninitialized {};
  explicit Real(Uninitialized);
  void ensure_init(long bits);

  mpfr_t value_;

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real pow(const Real& x, long e);
  friend Real pow(const Real& x, const Real& e);
  friend Real exp(const Real& x);
  friend Real log(const Real& x);
  friend Real cos(const Real& x);
  friend Real sin(const Real& x);
  friend Real acos(const Real& x);
  friend Real atan2(const Real& y, const Real& x);
  friend Real ldexp(const Real& x, long e);
  friend Real pi();
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real pow(const Real& x, long e);
Real pow(const Real& x, const Real& e);
Real exp(const Real& x);
Real log(const Real& x);
Real cos(const Real& x);
Real sin(const Real& x);
Real acos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real ldexp(const Real& x, long e);
/// pi at the working precision.
Real pi();

inline const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
inline const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x);

}  // namespace turanlab
