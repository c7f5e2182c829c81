#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Bit-exact two's-complement fixed-point values.
//
// A format sI.F has one sign bit, I integer bits and F fraction bits, so a
// value is mantissa * 2^-F with mantissa in [-2^(I+F), 2^(I+F) - 1]. Arithmetic
// never rounds: sums grow one integer bit, products keep every fraction bit.
// Precision is only dropped explicitly through truncate_to(), and every
// narrowing conversion saturates at the format range instead of wrapping.

namespace polyproj {

inline constexpr int kMaxFixedWidth = 64;

struct FixedPointFormat {
  int integer_bits = 0;
  int fraction_bits = 0;

  [[nodiscard]] constexpr int width() const noexcept { return 1 + integer_bits + fraction_bits; }
  [[nodiscard]] constexpr bool valid() const noexcept {
    return integer_bits >= 0 && fraction_bits >= 0 && width() >= 2 && width() <= kMaxFixedWidth;
  }

  [[nodiscard]] std::int64_t max_mantissa() const;
  [[nodiscard]] std::int64_t min_mantissa() const;
  [[nodiscard]] double max_value() const;
  [[nodiscard]] double min_value() const;
  /// Weight of the least significant bit, 2^-F.
  [[nodiscard]] double ulp() const;

  /// Descriptor string "sI.F", e.g. "s1.6".
  [[nodiscard]] std::string to_string() const;
  /// Parses "sI.F". Throws std::invalid_argument on malformed or invalid formats.
  static FixedPointFormat parse(std::string_view text);

  friend constexpr bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;
};

/// Throws std::invalid_argument unless fmt.valid().
void validate(const FixedPointFormat& fmt);

enum class QuantizeMode { round_nearest_even, truncate };

class FixedValue {
 public:
  /// Zero in the narrowest valid format, s0.1.
  FixedValue() = default;
  /// Throws std::invalid_argument if the format is invalid or the mantissa does not fit.
  FixedValue(std::int64_t mantissa, FixedPointFormat format);

  [[nodiscard]] std::int64_t mantissa() const noexcept { return mantissa_; }
  [[nodiscard]] const FixedPointFormat& format() const noexcept { return format_; }
  [[nodiscard]] double to_double() const;

  // Ordering and equality compare represented values, independent of format.
  friend std::strong_ordering operator<=>(const FixedValue& a, const FixedValue& b);
  friend bool operator==(const FixedValue& a, const FixedValue& b);

 private:
  std::int64_t mantissa_ = 0;
  FixedPointFormat format_{0, 1};
};

using FixedVector = std::vector<FixedValue>;

/// Nearest representable value under `mode`, saturating at the range endpoints.
/// `truncate` rounds toward minus infinity. Throws std::invalid_argument on NaN.
FixedValue quantize(double x, const FixedPointFormat& fmt,
                    QuantizeMode mode = QuantizeMode::round_nearest_even);
FixedVector quantize(std::span<const double> xs, const FixedPointFormat& fmt,
                     QuantizeMode mode = QuantizeMode::round_nearest_even);

std::vector<double> to_doubles(std::span<const FixedValue> xs);

/// Exact sum. Operands must share fraction bits; the result carries
/// max(I_a, I_b) + 1 integer bits.
FixedValue fixed_add(const FixedValue& a, const FixedValue& b);
/// Exact difference, same format rule as fixed_add.
FixedValue fixed_sub(const FixedValue& a, const FixedValue& b);
/// Exact negation; grows one integer bit so that -min is representable.
FixedValue fixed_neg(const FixedValue& a);

/// Exact product with I_a + I_c integer bits and F_a + F_c fraction bits.
/// Throws std::invalid_argument when that width exceeds 64 bits. The single
/// out-of-range product (-2^I_a) * (-2^I_c) saturates to the format maximum.
FixedValue fixed_mul_const(const FixedValue& a, const FixedValue& c);

/// Re-expresses `a` in `fmt`: low fraction bits are dropped (floor on the
/// mantissa) and the result saturates to the range of `fmt`.
FixedValue truncate_to(const FixedValue& a, const FixedPointFormat& fmt);

/// Exact widening into a format with at least as many integer and fraction
/// bits. Throws std::invalid_argument if `fmt` is narrower in either field.
FixedValue extend_to(const FixedValue& a, const FixedPointFormat& fmt);

/// Smallest format holding both operands exactly.
FixedPointFormat common_format(const FixedPointFormat& a, const FixedPointFormat& b);

}  // namespace polyproj
