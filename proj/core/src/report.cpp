#include "grw/report.hpp"

#include <cmath>
#include <cstdio>

namespace grw {

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void emit_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void pad(std::string& out, int indent) { out.append(static_cast<std::size_t>(indent), ' '); }

}  // namespace

void ReportValue::emit(std::string& out, int indent) const {
  switch (v_.index()) {
    case 0:
      out += "null";
      break;
    case 1:
      out += std::get<bool>(v_) ? "true" : "false";
      break;
    case 2:
      out += format_double(std::get<double>(v_));
      break;
    case 3:
      out += std::to_string(std::get<std::int64_t>(v_));
      break;
    case 4:
      emit_string(out, std::get<std::string>(v_));
      break;
    case 5: {
      const Object& o = std::get<Object>(v_);
      if (o.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [k, v] : o) {
        pad(out, indent + 2);
        emit_string(out, k);
        out += ": ";
        v.emit(out, indent + 2);
        if (++i < o.size()) out += ',';
        out += '\n';
      }
      pad(out, indent);
      out += '}';
      break;
    }
    case 6: {
      const Array& a = std::get<Array>(v_);
      if (a.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < a.size(); ++i) {
        pad(out, indent + 2);
        a[i].emit(out, indent + 2);
        if (i + 1 < a.size()) out += ',';
        out += '\n';
      }
      pad(out, indent);
      out += ']';
      break;
    }
  }
}

std::string ReportValue::to_json() const {
  std::string out;
  emit(out, 0);
  out += '\n';
  return out;
}

}  // namespace grw
