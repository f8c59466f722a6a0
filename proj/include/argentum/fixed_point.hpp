#pragma once

// Decimal fixed-point quantities and exact rational intermediates.
//
// Every monetary and supply quantity in the engine is an integer count of
// 10^-d units. Products and quotients go through `Exact` (a 512-bit
// rational) and are rounded exactly once, half-to-even, into the result
// type, so conservation checks hold to the last unit.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace argentum {

__extension__ typedef __int128 int128;

/// Simulation day index (day 0 is the base day).
using Day = std::int64_t;

using Wide = boost::multiprecision::checked_int512_t;

namespace detail {

template <typename Rep>
constexpr Rep pow10(int n) {
  Rep r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

inline Wide to_wide(std::int64_t v) { return Wide(v); }

inline Wide to_wide(int128 v) {
  const bool neg = v < 0;
  // Two halves keep this independent of Boost's __int128 support.
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1u
                              : static_cast<unsigned __int128>(v);
  Wide hi = Wide(static_cast<std::uint64_t>(mag >> 64));
  Wide lo = Wide(static_cast<std::uint64_t>(mag));
  Wide w = (hi << 64) | lo;
  return neg ? Wide(-w) : w;
}

template <typename Rep>
Rep narrow(const Wide& w) {
  if constexpr (std::is_same_v<Rep, std::int64_t>) {
    if (w > Wide(INT64_MAX) || w < Wide(INT64_MIN)) {
      throw std::overflow_error("fixed-point overflow");
    }
    return static_cast<std::int64_t>(w);
  } else {
    static const Wide limit = (Wide(1) << 126);
    if (w >= limit || w <= -limit) throw std::overflow_error("fixed-point overflow");
    const bool neg = w < 0;
    Wide mag = neg ? Wide(-w) : w;
    const auto hi = static_cast<std::uint64_t>(mag >> 64);
    const auto lo = static_cast<std::uint64_t>(mag & Wide(UINT64_MAX));
    auto v = static_cast<int128>((static_cast<unsigned __int128>(hi) << 64) | lo);
    return neg ? -v : v;
  }
}

/// num / den rounded half-to-even; den must be positive.
inline Wide round_half_even(const Wide& num, const Wide& den) {
  const bool neg = num < 0;
  Wide mag = neg ? Wide(-num) : num;
  Wide q = mag / den;
  Wide r = mag % den;
  Wide twice = r * 2;
  if (twice > den || (twice == den && (q & 1) != 0)) q += 1;
  return neg ? Wide(-q) : q;
}

inline Wide floor_div(const Wide& num, const Wide& den) {
  Wide q = num / den;
  if ((num % den) != 0 && num < 0) q -= 1;
  return q;
}

std::string digits_to_decimal(const Wide& raw, int decimals);
Wide parse_decimal(std::string_view text, int decimals, bool exact);

}  // namespace detail

template <int Decimals, typename Tag, typename Rep = std::int64_t>
class Fixed {
 public:
  using rep = Rep;
  static constexpr int decimals = Decimals;
  static constexpr Rep scale = detail::pow10<Rep>(Decimals);

  constexpr Fixed() = default;

  static constexpr Fixed from_raw(Rep raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static constexpr Fixed units(std::int64_t whole) { return from_raw(static_cast<Rep>(whole) * scale); }

  /// Accepts `[-]digits[.digits]`; extra fractional digits round half-even.
  static Fixed parse(std::string_view text) {
    return from_raw(detail::narrow<Rep>(detail::parse_decimal(text, Decimals, false)));
  }
  /// Accepts only the canonical rendering produced by to_string().
  static Fixed parse_canonical(std::string_view text) {
    return from_raw(detail::narrow<Rep>(detail::parse_decimal(text, Decimals, true)));
  }

  constexpr Rep raw() const { return raw_; }
  Wide wide() const { return detail::to_wide(raw_); }
  std::string to_string() const { return detail::digits_to_decimal(wide(), Decimals); }
  double to_double() const { return static_cast<double>(raw_) / static_cast<double>(scale); }

  constexpr bool is_zero() const { return raw_ == 0; }
  constexpr bool is_positive() const { return raw_ > 0; }
  constexpr bool is_negative() const { return raw_ < 0; }

  constexpr auto operator<=>(const Fixed&) const = default;

  constexpr Fixed& operator+=(Fixed o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Fixed& operator-=(Fixed o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Fixed operator+(Fixed a, Fixed b) { return a += b; }
  friend constexpr Fixed operator-(Fixed a, Fixed b) { return a -= b; }
  friend constexpr Fixed operator-(Fixed a) { return from_raw(-a.raw_); }

 private:
  Rep raw_{0};
};

struct TokenTag;
struct PesoTag;
struct PriceTag;
struct RateTag;
struct ValueTag;
struct SeriesTag;
struct RatioTag;

using Tokens = Fixed<8, TokenTag>;                 // token amounts
using Pesos = Fixed<2, PesoTag>;                   // AR$ cash balances
using Price = Fixed<8, PriceTag>;                  // AR$ per token
using Rate = Fixed<9, RateTag>;                    // dimensionless rates and ratios
using Value = Fixed<15, ValueTag, int128>;         // treasury valuations (AR$)
using SeriesValue = Fixed<8, SeriesTag>;           // CSV series points
using Deviation = Fixed<12, RatioTag>;             // relative peg deviation

template <typename F>
constexpr F min_of(F a, F b) {
  return b < a ? b : a;
}
template <typename F>
constexpr F max_of(F a, F b) {
  return a < b ? b : a;
}

/// Exact rational over 512-bit checked integers. Denominator is kept positive.
class Exact {
 public:
  Exact(Wide num = 0, Wide den = 1) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw std::domain_error("Exact: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    // Chained ratios grow quickly; reduce once either side gets large.
    if (boost::multiprecision::msb(den_) > 160 || (num_ != 0 && boost::multiprecision::msb(abs(num_)) > 160)) {
      const Wide g = gcd(num_, den_);
      if (g > 1) {
        num_ /= g;
        den_ /= g;
      }
    }
  }
  template <int D, typename T, typename R>
  static Exact of(Fixed<D, T, R> x) {
    return Exact(x.wide(), Wide(detail::to_wide(Fixed<D, T, R>::scale)));
  }
  static Exact integer(std::int64_t v) { return Exact(Wide(v)); }

  const Wide& num() const { return num_; }
  const Wide& den() const { return den_; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Exact operator*(const Exact& a, const Exact& b) { return Exact(a.num_ * b.num_, a.den_ * b.den_); }
  friend Exact operator/(const Exact& a, const Exact& b) { return Exact(a.num_ * b.den_, a.den_ * b.num_); }
  friend Exact operator+(const Exact& a, const Exact& b) {
    if (a.den_ == b.den_) return Exact(a.num_ + b.num_, a.den_);
    return Exact(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Exact operator-(const Exact& a, const Exact& b) {
    if (a.den_ == b.den_) return Exact(a.num_ - b.num_, a.den_);
    return Exact(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend bool operator==(const Exact& a, const Exact& b) { return a.num_ * b.den_ == b.num_ * a.den_; }
  friend bool operator<(const Exact& a, const Exact& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
  friend bool operator<=(const Exact& a, const Exact& b) { return !(b < a); }
  friend bool operator>(const Exact& a, const Exact& b) { return b < a; }
  friend bool operator>=(const Exact& a, const Exact& b) { return !(a < b); }

 private:
  Wide num_;
  Wide den_;
};

/// Rounds an exact quantity half-to-even into the target fixed-point type.
template <typename Out>
Out round_to(const Exact& x) {
  const Wide scaled = x.num() * detail::to_wide(Out::scale);
  return Out::from_raw(detail::narrow<typename Out::rep>(detail::round_half_even(scaled, x.den())));
}

/// Rounds toward negative infinity into the target type.
template <typename Out>
Out floor_to(const Exact& x) {
  const Wide scaled = x.num() * detail::to_wide(Out::scale);
  return Out::from_raw(detail::narrow<typename Out::rep>(detail::floor_div(scaled, x.den())));
}

/// Lossless widening between types whose scales nest (e.g. Pesos -> Value).
template <typename Out, int D, typename T, typename R>
Out widen(Fixed<D, T, R> x) {
  static_assert(Out::decimals >= D, "widen() only increases precision");
  return Out::from_raw(static_cast<typename Out::rep>(x.raw()) *
                       detail::pow10<typename Out::rep>(Out::decimals - D));
}

}  // namespace argentum
