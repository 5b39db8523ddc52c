#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace grw {

// Minimal JSON-shaped value for report assembly. Objects use std::map so key
// order is always sorted, and doubles are printed with a fixed 17
// significant-digit format; together these make serialization
// byte-deterministic for identical inputs.
class ReportValue {
 public:
  using Object = std::map<std::string, ReportValue>;
  using Array = std::vector<ReportValue>;

  ReportValue() : v_(nullptr) {}
  ReportValue(std::nullptr_t) : v_(nullptr) {}
  ReportValue(bool b) : v_(b) {}
  ReportValue(double d) : v_(d) {}
  ReportValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(std::int64_t i) : v_(i) {}
  ReportValue(std::uint64_t i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(const char* s) : v_(std::string(s)) {}
  ReportValue(std::string s) : v_(std::move(s)) {}
  ReportValue(Object o) : v_(std::move(o)) {}
  ReportValue(Array a) : v_(std::move(a)) {}

  bool is_object() const { return std::holds_alternative<Object>(v_); }
  Object& object() { return std::get<Object>(v_); }
  const Object& object() const { return std::get<Object>(v_); }
  Array& array() { return std::get<Array>(v_); }
  const Array& array() const { return std::get<Array>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  double as_double() const {
    if (std::holds_alternative<std::int64_t>(v_))
      return static_cast<double>(std::get<std::int64_t>(v_));
    return std::get<double>(v_);
  }
  bool as_bool() const { return std::get<bool>(v_); }

  std::string to_json() const;  // pretty-printed, 2-space indent, sorted keys

 private:
  void emit(std::string& out, int indent) const;
  std::variant<std::nullptr_t, bool, double, std::int64_t, std::string, Object, Array> v_;
};

// Fixed float formatting used everywhere in reports: %.17g.
std::string format_double(double v);

}  // namespace grw
