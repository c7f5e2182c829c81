#include "polyproj/fixed_point.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace polyproj {
namespace {

__extension__ typedef __int128 Wide;

Wide shift_left(Wide m, int bits) { return m * (static_cast<Wide>(1) << bits); }

std::int64_t saturate(Wide m, const FixedPointFormat& fmt) {
  const Wide hi = fmt.max_mantissa();
  const Wide lo = fmt.min_mantissa();
  return static_cast<std::int64_t>(std::clamp(m, lo, hi));
}

// Floor division by 2^bits (arithmetic shift on two's complement).
Wide shift_right_floor(Wide m, int bits) {
  if (bits == 0) return m;
  const Wide d = static_cast<Wide>(1) << bits;
  Wide q = m / d;
  if (m % d != 0 && m < 0) --q;
  return q;
}

FixedPointFormat checked(FixedPointFormat fmt, const char* what) {
  if (!fmt.valid()) {
    throw std::invalid_argument(std::string(what) + ": result format " + fmt.to_string() +
                                " exceeds " + std::to_string(kMaxFixedWidth) + " bits");
  }
  return fmt;
}

void require_same_fraction(const FixedValue& a, const FixedValue& b, const char* what) {
  if (a.format().fraction_bits != b.format().fraction_bits) {
    throw std::invalid_argument(std::string(what) + ": fraction bits differ (" +
                                a.format().to_string() + " vs " + b.format().to_string() + ")");
  }
}

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("malformed fixed-point format '" + std::string(whole) +
                                "', expected sI.F");
  }
  return value;
}

}  // namespace

std::int64_t FixedPointFormat::max_mantissa() const {
  validate(*this);
  const int bits = width() - 1;
  return bits == 63 ? INT64_MAX : (std::int64_t{1} << bits) - 1;
}

std::int64_t FixedPointFormat::min_mantissa() const {
  validate(*this);
  const int bits = width() - 1;
  return bits == 63 ? INT64_MIN : -(std::int64_t{1} << bits);
}

double FixedPointFormat::max_value() const {
  return std::ldexp(static_cast<double>(max_mantissa()), -fraction_bits);
}

double FixedPointFormat::min_value() const { return std::ldexp(-1.0, integer_bits); }

double FixedPointFormat::ulp() const { return std::ldexp(1.0, -fraction_bits); }

std::string FixedPointFormat::to_string() const {
  return "s" + std::to_string(integer_bits) + "." + std::to_string(fraction_bits);
}

FixedPointFormat FixedPointFormat::parse(std::string_view text) {
  const auto dot = text.find('.');
  if (text.size() < 4 || text.front() != 's' || dot == std::string_view::npos) {
    throw std::invalid_argument("malformed fixed-point format '" + std::string(text) +
                                "', expected sI.F");
  }
  FixedPointFormat fmt{parse_int(text.substr(1, dot - 1), text),
                       parse_int(text.substr(dot + 1), text)};
  validate(fmt);
  return fmt;
}

void validate(const FixedPointFormat& fmt) {
  if (!fmt.valid()) {
    throw std::invalid_argument("invalid fixed-point format s" + std::to_string(fmt.integer_bits) +
                                "." + std::to_string(fmt.fraction_bits) +
                                " (width must be within [2, 64])");
  }
}

FixedValue::FixedValue(std::int64_t mantissa, FixedPointFormat format)
    : mantissa_(mantissa), format_(format) {
  validate(format_);
  if (mantissa < format_.min_mantissa() || mantissa > format_.max_mantissa()) {
    throw std::invalid_argument("mantissa " + std::to_string(mantissa) + " does not fit " +
                                format_.to_string());
  }
}

double FixedValue::to_double() const {
  return std::ldexp(static_cast<double>(mantissa_), -format_.fraction_bits);
}

std::strong_ordering operator<=>(const FixedValue& a, const FixedValue& b) {
  const int f = std::max(a.format_.fraction_bits, b.format_.fraction_bits);
  const Wide ma = shift_left(a.mantissa_, f - a.format_.fraction_bits);
  const Wide mb = shift_left(b.mantissa_, f - b.format_.fraction_bits);
  return ma <=> mb;
}

bool operator==(const FixedValue& a, const FixedValue& b) { return (a <=> b) == 0; }

FixedValue quantize(double x, const FixedPointFormat& fmt, QuantizeMode mode) {
  validate(fmt);
  if (std::isnan(x)) throw std::invalid_argument("quantize: NaN input");
  const double scaled = std::ldexp(x, fmt.fraction_bits);
  const double limit = std::ldexp(1.0, fmt.width() - 1);
  if (scaled >= limit) return {fmt.max_mantissa(), fmt};
  if (scaled < -limit) return {fmt.min_mantissa(), fmt};
  // nearbyint honours the default rounding mode, round-half-to-even.
  const double r = mode == QuantizeMode::round_nearest_even ? std::nearbyint(scaled)
                                                            : std::floor(scaled);
  if (r >= limit) return {fmt.max_mantissa(), fmt};
  return {saturate(static_cast<Wide>(static_cast<std::int64_t>(r)), fmt), fmt};
}

FixedVector quantize(std::span<const double> xs, const FixedPointFormat& fmt, QuantizeMode mode) {
  FixedVector out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(quantize(x, fmt, mode));
  return out;
}

std::vector<double> to_doubles(std::span<const FixedValue> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.to_double());
  return out;
}

FixedValue fixed_add(const FixedValue& a, const FixedValue& b) {
  require_same_fraction(a, b, "fixed_add");
  const FixedPointFormat fmt = checked(
      {std::max(a.format().integer_bits, b.format().integer_bits) + 1, a.format().fraction_bits},
      "fixed_add");
  return {a.mantissa() + b.mantissa(), fmt};
}

FixedValue fixed_sub(const FixedValue& a, const FixedValue& b) {
  require_same_fraction(a, b, "fixed_sub");
  const FixedPointFormat fmt = checked(
      {std::max(a.format().integer_bits, b.format().integer_bits) + 1, a.format().fraction_bits},
      "fixed_sub");
  return {a.mantissa() - b.mantissa(), fmt};
}

FixedValue fixed_neg(const FixedValue& a) {
  const FixedPointFormat fmt =
      checked({a.format().integer_bits + 1, a.format().fraction_bits}, "fixed_neg");
  return {-a.mantissa(), fmt};
}

FixedValue fixed_mul_const(const FixedValue& a, const FixedValue& c) {
  const FixedPointFormat fmt =
      checked({a.format().integer_bits + c.format().integer_bits,
               a.format().fraction_bits + c.format().fraction_bits},
              "fixed_mul_const");
  const Wide product = static_cast<Wide>(a.mantissa()) * static_cast<Wide>(c.mantissa());
  return {saturate(product, fmt), fmt};
}

FixedValue truncate_to(const FixedValue& a, const FixedPointFormat& fmt) {
  validate(fmt);
  const int shift = a.format().fraction_bits - fmt.fraction_bits;
  const Wide m = shift >= 0 ? shift_right_floor(a.mantissa(), shift)
                            : shift_left(a.mantissa(), -shift);
  return {saturate(m, fmt), fmt};
}

FixedValue extend_to(const FixedValue& a, const FixedPointFormat& fmt) {
  validate(fmt);
  if (fmt.integer_bits < a.format().integer_bits || fmt.fraction_bits < a.format().fraction_bits) {
    throw std::invalid_argument("extend_to: " + fmt.to_string() + " is narrower than " +
                                a.format().to_string());
  }
  return truncate_to(a, fmt);
}

FixedPointFormat common_format(const FixedPointFormat& a, const FixedPointFormat& b) {
  return checked({std::max(a.integer_bits, b.integer_bits),
                  std::max(a.fraction_bits, b.fraction_bits)},
                 "common_format");
}

}  // namespace polyproj
