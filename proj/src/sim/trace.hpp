#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

namespace agnav {

/// printf-style formatting into a std::string.
inline std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[512];
  const int n = vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  if (n < 0) return "";
  return std::string(buf, std::min(size_t(n), sizeof(buf) - 1));
}

/// Append-only mission event log. One event per line:
///   <t>\t<EVENT> key=value key=value...
/// Times and coordinates are printed with three decimals so a rerun under the
/// same seed reproduces the log byte for byte.
class TraceLog {
 public:
  void event(double t, const std::string& body) {
    text_ += strf("%.3f\t", t);
    text_ += body;
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

}  // namespace agnav
