#include "layerscope/rational.hpp"

#include <cctype>

namespace layerscope {

namespace {

BigInt pow10(unsigned long n) {
  return boost::multiprecision::pow(BigInt(10), n);
}

// Floor division for possibly negative numerators.
BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (num % den != 0 && (num < 0) != (den < 0)) --q;
  return q;
}

}  // namespace

const Rational& quantum() {
  static const Rational q(BigInt(1), pow10(12));
  return q;
}

std::optional<Rational> parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  long frac_digits = 0;
  bool any_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    mantissa = mantissa * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      ++frac_digits;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit) return std::nullopt;
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    bool exp_digit = false;
    long exp_value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (exp_value < 1000000) exp_value = exp_value * 10 + (text[pos] - '0');
      exp_digit = true;
      ++pos;
    }
    if (!exp_digit) return std::nullopt;
    exponent = exp_negative ? -exp_value : exp_value;
  }
  if (pos != text.size()) return std::nullopt;
  exponent -= frac_digits;
  Rational value(mantissa);
  if (exponent > 0) {
    value *= Rational(pow10(static_cast<unsigned long>(exponent)));
  } else if (exponent < 0) {
    value /= Rational(pow10(static_cast<unsigned long>(-exponent)));
  }
  if (negative) value = -value;
  return value;
}

std::string format_exact(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt rest = den;
  unsigned long twos = 0;
  unsigned long fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();
  unsigned long digits = std::max(twos, fives);
  BigInt scaled = boost::multiprecision::abs(num) * pow10(digits) / den;
  std::string body = scaled.str();
  std::string out;
  if (num < 0) out += '-';
  if (digits == 0) return out + body;
  if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
  out += body.substr(0, body.size() - digits);
  std::string frac = body.substr(body.size() - digits);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) {
    out += '.';
    out += frac;
  }
  return out;
}

Rational quantize(double value) {
  // Doubles are dyadic rationals, so this conversion is exact; the rounding
  // below is then decided with integer arithmetic only.
  Rational exact(value);
  Rational scaled = exact / quantum();
  BigInt num = boost::multiprecision::numerator(scaled);
  BigInt den = boost::multiprecision::denominator(scaled);
  BigInt ticks;
  if (num >= 0) {
    ticks = floor_div(2 * num + den, 2 * den);
  } else {
    ticks = -floor_div(-2 * num + den, 2 * den);
  }
  return Rational(ticks) * quantum();
}

Rational floor_rational(const Rational& value) {
  return Rational(floor_div(boost::multiprecision::numerator(value),
                            boost::multiprecision::denominator(value)));
}

Rational ceil_rational(const Rational& value) {
  return -floor_rational(-value);
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace layerscope
