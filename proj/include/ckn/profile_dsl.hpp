#pragma once

// Text form of the builtin families, e.g. "gauss(0.5)", "polygauss(1; 1,0,1)".

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "ckn/error.hpp"
#include "ckn/profiles.hpp"

namespace ckn {

namespace detail {

class DslParser {
 public:
  explicit DslParser(std::string_view s) : s_(s) {}

  struct Parsed {
    std::string name;
    std::vector<double> args;
    std::size_t semicolon_at = 0;  // number of args before ';' (0 when absent)
    bool has_semicolon = false;
  };

  Parsed parse() {
    Parsed p;
    skip_ws();
    const std::size_t name_start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == name_start) fail("expected a family name");
    p.name = std::string(s_.substr(name_start, pos_ - name_start));
    skip_ws();
    expect('(');
    skip_ws();
    if (peek() != ')') {
      while (true) {
        skip_ws();
        p.args.push_back(number());
        skip_ws();
        const char c = peek();
        if (c == ',') {
          ++pos_;
        } else if (c == ';') {
          if (p.has_semicolon) fail("only one ';' is allowed");
          p.has_semicolon = true;
          p.semicolon_at = p.args.size();
          ++pos_;
        } else {
          break;
        }
      }
    }
    skip_ws();
    expect(')');
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return p;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, msg + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  double number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (pos_ < s_.size() && s_[pos_] == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("expected a decimal literal");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RadialProfile make_family(std::string_view spec) {
  detail::DslParser parser(spec);
  const auto p = parser.parse();
  const auto& a = p.args;
  auto arity = [&](std::size_t k) {
    if (a.size() != k || p.has_semicolon) {
      throw Error(ErrorKind::ParseError, p.name + " takes " + std::to_string(k) + " comma-separated arguments in \"" +
                                             std::string(spec) + "\"");
    }
  };
  auto as_int = [&](double x) {
    if (x != std::floor(x)) throw Error(ErrorKind::ParseError, "expected an integer degree in \"" + std::string(spec) + "\"");
    return static_cast<int>(x);
  };
  if (p.name == "gauss") {
    arity(1);
    return make_gauss(a[0]);
  }
  if (p.name == "polygauss") {
    if (!p.has_semicolon || p.semicolon_at != 1 || a.size() < 2) {
      throw Error(ErrorKind::ParseError, "polygauss expects (a; c0,...,cm) in \"" + std::string(spec) + "\"");
    }
    return make_polygauss(a[0], std::vector<double>(a.begin() + 1, a.end()));
  }
  if (p.name == "bump") {
    arity(2);
    return make_bump(a[0], a[1]);
  }
  if (p.name == "u0") {
    arity(1);
    return make_u0(a[0]);
  }
  if (p.name == "u1") {
    arity(2);
    return make_u1(a[0], a[1]);
  }
  if (p.name == "u2") {
    arity(3);
    return make_u2(a[0], a[1], a[2]);
  }
  if (p.name == "hermmod") {
    arity(3);
    return make_hermmod(a[0], as_int(a[1]), a[2]);
  }
  throw Error(ErrorKind::ParseError, "unknown family '" + p.name + "' at position 0 in \"" + std::string(spec) + "\"");
}

}  // namespace ckn
