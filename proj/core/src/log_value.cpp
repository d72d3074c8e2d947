#include "apfree/log_value.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

LogValue checked(double log2) {
    if (std::isnan(log2)) throw DomainError("log-space arithmetic produced NaN (inf - inf)");
    return LogValue::from_log2(log2);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

LogValue LogValue::from_value(double value) {
    if (!(value > 0.0) || std::isinf(value)) {
        throw DomainError("LogValue needs a finite positive value, got " + format_double(value));
    }
    return LogValue(std::log2(value));
}

double LogValue::ln() const noexcept { return log2_ * std::numbers::ln2; }

bool LogValue::convertible() const noexcept { return std::fabs(log2_) < kConvertibleLimit; }

double LogValue::to_double() const {
    if (!convertible()) throw DomainError("value 2^" + format_double(log2_) + " is outside plain double range");
    return std::exp2(log2_);
}

LogValue LogValue::pow(double exponent) const {
    if (exponent == 0.0) return one();
    return checked(log2_ * exponent);
}

LogValue operator*(LogValue a, LogValue b) { return checked(a.log2_ + b.log2_); }
LogValue operator/(LogValue a, LogValue b) { return checked(a.log2_ - b.log2_); }

std::string LogValue::to_string() const {
    if (std::isinf(log2_)) return log2_ > 0 ? "+inf" : "0(underflow)";
    if (convertible()) return format_double(to_double());
    return "2^" + format_double(log2_);
}

}  // namespace apfree
