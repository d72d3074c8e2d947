#pragma once

#include <compare>
#include <string>

namespace apfree {

// A positive number held as its base-2 logarithm, so bound formulas with
// towers of exponents can be evaluated and compared without overflow.
//
// log2() may be +inf or -inf when even the exponent leaves double range; such
// values still order correctly against finite ones.
class LogValue {
public:
    static constexpr double kConvertibleLimit = 1000.0;

    constexpr LogValue() = default;

    static constexpr LogValue from_log2(double log2_magnitude) noexcept { return LogValue(log2_magnitude); }
    // Throws DomainError unless value > 0.
    static LogValue from_value(double value);
    static LogValue one() noexcept { return LogValue(0.0); }

    constexpr double log2() const noexcept { return log2_; }
    double ln() const noexcept;

    // Plain conversion is only allowed while |log2| < 1000.
    bool convertible() const noexcept;
    // Throws DomainError when not convertible.
    double to_double() const;

    LogValue pow(double exponent) const;

    friend LogValue operator*(LogValue a, LogValue b);
    friend LogValue operator/(LogValue a, LogValue b);
    LogValue& operator*=(LogValue other) { return *this = *this * other; }
    LogValue& operator/=(LogValue other) { return *this = *this / other; }

    friend constexpr std::partial_ordering operator<=>(LogValue a, LogValue b) noexcept { return a.log2_ <=> b.log2_; }
    friend constexpr bool operator==(LogValue a, LogValue b) noexcept { return a.log2_ == b.log2_; }

    // Plain value when convertible, "2^<log2>" when finite but too large or
    // small, otherwise "+inf" / "0(underflow)".
    std::string to_string() const;

private:
    constexpr explicit LogValue(double l) noexcept : log2_(l) {}

    double log2_ = 0.0;
};

}  // namespace apfree
