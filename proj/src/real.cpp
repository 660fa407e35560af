#include "turanlab/real.hpp"

#include <cstdlib>
#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace turanlab {

namespace {

thread_local long tls_precision = 256;

}  // namespace

long working_precision() noexcept { return tls_precision; }

PrecisionScope::PrecisionScope(long bits) : saved_(tls_precision) {
  if (bits < MPFR_PREC_MIN || bits > 1L << 20) {
    throw std::invalid_argument("precision out of range: " + std::to_string(bits));
  }
  tls_precision = bits;
}

PrecisionScope::~PrecisionScope() { tls_precision = saved_; }

Real::Real(Uninitialized) { mpfr_init2(value_, working_precision()); }

Real::Real() : Real(Uninitialized{}) { mpfr_set_zero(value_, 1); }
Real::Real(double value) : Real(Uninitialized{}) { mpfr_set_d(value_, value, MPFR_RNDN); }
Real::Real(int value) : Real(Uninitialized{}) { mpfr_set_si(value_, value, MPFR_RNDN); }
Real::Real(long value) : Real(Uninitialized{}) { mpfr_set_si(value_, value, MPFR_RNDN); }
Real::Real(long long value) : Real(Uninitialized{}) {
  mpfr_set_si(value_, static_cast<long>(value), MPFR_RNDN);
}
Real::Real(unsigned value) : Real(Uninitialized{}) { mpfr_set_ui(value_, value, MPFR_RNDN); }
Real::Real(unsigned long value) : Real(Uninitialized{}) { mpfr_set_ui(value_, value, MPFR_RNDN); }

Real::Real(std::string_view decimal) : Real(Uninitialized{}) {
  std::string text(decimal);
  char* end = nullptr;
  mpfr_strtofr(value_, text.c_str(), &end, 10, MPFR_RNDN);
  if (end == text.c_str() || *end != '\0') {
    mpfr_clear(value_);
    throw std::invalid_argument("not a decimal number: " + text);
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

void Real::ensure_init(long bits) {
  if (value_[0]._mpfr_d == nullptr) {
    mpfr_init2(value_, bits);
  } else if (mpfr_get_prec(value_) != bits) {
    mpfr_set_prec(value_, bits);
  }
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    ensure_init(static_cast<long>(mpfr_get_prec(other.value_)));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
    value_[0] = other.value_[0];
    other.value_[0]._mpfr_d = nullptr;
  }
  return *this;
}

Real::~Real() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) < 0 ? "-inf" : "inf";
  if (digits <= 0) {
    digits = static_cast<int>(mpfr_get_str_ndigits(10, mpfr_get_prec(value_)));
  }
  // "%.*Re" renders d.ddd...e+XX at the requested digit count.
  char* buffer = nullptr;
  if (mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator+=(double rhs) {
  mpfr_add_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(double rhs) {
  mpfr_sub_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(double rhs) {
  mpfr_mul_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(double rhs) {
  mpfr_div_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(Uninitialized{});
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

#define TURANLAB_BINARY(op, fn)                   \
  Real operator op(const Real& a, const Real& b) { \
    Real r(Real::Uninitialized{});                 \
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);   \
    return r;                                      \
  }
TURANLAB_BINARY(+, mpfr_add)
TURANLAB_BINARY(-, mpfr_sub)
TURANLAB_BINARY(*, mpfr_mul)
TURANLAB_BINARY(/, mpfr_div)
#undef TURANLAB_BINARY

#define TURANLAB_BINARY_D(op, fn)            \
  Real operator op(const Real& a, double b) { \
    Real r(Real::Uninitialized{});            \
    fn(r.value_, a.value_, b, MPFR_RNDN);     \
    return r;                                 \
  }
TURANLAB_BINARY_D(+, mpfr_add_d)
TURANLAB_BINARY_D(-, mpfr_sub_d)
TURANLAB_BINARY_D(*, mpfr_mul_d)
TURANLAB_BINARY_D(/, mpfr_div_d)
#undef TURANLAB_BINARY_D

Real operator-(double a, const Real& b) {
  Real r(Real::Uninitialized{});
  mpfr_d_sub(r.value_, a, b.value_, MPFR_RNDN);
  return r;
}

Real operator/(double a, const Real& b) {
  Real r(Real::Uninitialized{});
  mpfr_d_div(r.value_, a, b.value_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, long b) {
  Real r(Real::Uninitialized{});
  mpfr_mul_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, long b) {
  Real r(Real::Uninitialized{});
  mpfr_div_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, double b) {
  if (mpfr_nan_p(a.value_) || std::isnan(b)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define TURANLAB_UNARY(name, fn)        \
  Real name(const Real& x) {            \
    Real r(Real::Uninitialized{});      \
    fn(r.value_, x.value_, MPFR_RNDN);  \
    return r;                           \
  }
TURANLAB_UNARY(abs, mpfr_abs)
TURANLAB_UNARY(sqrt, mpfr_sqrt)
TURANLAB_UNARY(exp, mpfr_exp)
TURANLAB_UNARY(log, mpfr_log)
TURANLAB_UNARY(cos, mpfr_cos)
TURANLAB_UNARY(sin, mpfr_sin)
TURANLAB_UNARY(acos, mpfr_acos)
#undef TURANLAB_UNARY

Real pow(const Real& x, long e) {
  Real r(Real::Uninitialized{});
  mpfr_pow_si(r.value_, x.value_, e, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& e) {
  Real r(Real::Uninitialized{});
  mpfr_pow(r.value_, x.value_, e.value_, MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(Real::Uninitialized{});
  mpfr_atan2(r.value_, y.value_, x.value_, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(Real::Uninitialized{});
  mpfr_mul_2si(r.value_, x.value_, e, MPFR_RNDN);
  return r;
}

Real pi() {
  Real r(Real::Uninitialized{});
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(20); }

}  // namespace turanlab
