// Streaming JSON writer for reports. Numbers are printed with 17 significant
// digits so values round-trip bit-faithfully; infinities come out as the
// literal string "inf" (the d_1 singular-covariance convention). Output is a
// pure function of the calls made, which is what the byte-identical report
// contract relies on.
#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace wchaos {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class JsonWriter {
 public:
  JsonWriter& begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back('}');
    first_.push_back(true);
    return *this;
  }

  JsonWriter& end_object() { return close('}'); }

  JsonWriter& begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back(']');
    first_.push_back(true);
    return *this;
  }

  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    prefix();
    write_string(k);
    out_ += ": ";
    after_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    prefix();
    if (std::isinf(v)) write_string(v > 0 ? "inf" : "-inf");
    else out_ += format_double(v);
    return *this;
  }

  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }

  JsonWriter& value(long long v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
  }

  JsonWriter& value(unsigned long long v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
  }

  JsonWriter& value(bool v) {
    prefix();
    out_ += v ? "true" : "false";
    return *this;
  }

  JsonWriter& value(const std::string& v) {
    prefix();
    write_string(v);
    return *this;
  }

  JsonWriter& value(const char* v) { return value(std::string(v)); }

  const std::string& str() const { return out_; }

 private:
  JsonWriter& close(char c) {
    out_ += '\n';
    out_.append(2 * (stack_.size() - 1), ' ');
    out_ += c;
    stack_.pop_back();
    first_.pop_back();
    return *this;
  }

  void prefix() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (stack_.empty()) return;
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    out_ += '\n';
    out_.append(2 * stack_.size(), ' ');
  }

  void write_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<char> stack_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

}  // namespace wchaos
