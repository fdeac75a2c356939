#include <cmath>
#include <cstdio>
#include <string>

#include "hypjac/cli.hpp"

namespace hypjac::cli {

namespace {

void write_value(const nlohmann::ordered_json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case nlohmann::ordered_json::value_t::number_float: {
      const double d = v.get<double>() + 0.0;
      if (!std::isfinite(d)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out += buf;
      }
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_value(item, out, indent + 2);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        write_value(it.value(), out, indent + 2);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& doc) {
  std::string out;
  write_value(doc, out, 0);
  out += "\n";
  return out;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  v += 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hypjac::cli
