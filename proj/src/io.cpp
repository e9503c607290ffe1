#include "jclass/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "jclass/errors.hpp"

namespace jclass {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt17(std::complex<double> z) {
  std::string out = fmt17(z.real());
  const double im = z.imag();
  if (!std::signbit(im)) out += '+';
  out += fmt17(im);
  out += 'i';
  return out;
}

namespace {

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int paren = 0;
  for (char c : text) {
    if (c == '(') ++paren;
    if (c == ')') --paren;
    if (c == ',' && paren == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string t = s.substr(a, b - a);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  return t;
}

double parse_one_double(const std::string& s) {
  const std::string t = strip(s);
  if (t.empty()) throw InvalidArgument("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw InvalidArgument("could not parse number: '" + t + "'");
  return v;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_top_level(text)) out.push_back(parse_one_double(part));
  return out;
}

std::complex<double> parse_complex(const std::string& text) {
  std::string t = strip(text);
  if (t.empty()) throw InvalidArgument("empty complex field");
  if (t.back() != 'i' && t.back() != 'I') return {parse_one_double(t), 0.0};
  t.pop_back();  // drop the i; what remains is "re+im", "re-im", or "im"
  // Find the sign that separates real and imaginary parts: the last +/- not
  // part of an exponent and not leading.
  std::size_t cut = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  if (cut == std::string::npos) {
    std::string im = t;
    if (im.empty() || im == "+") im = "1";
    else if (im == "-") im = "-1";
    return {0.0, parse_one_double(im)};
  }
  std::string im = t.substr(cut);
  if (im == "+") im = "1";
  else if (im == "-") im = "-1";
  return {parse_one_double(t.substr(0, cut)), parse_one_double(im)};
}

std::vector<std::complex<double>> parse_complex_list(const std::string& text) {
  std::vector<std::complex<double>> out;
  for (const auto& part : split_top_level(text)) out.push_back(parse_complex(part));
  return out;
}

}  // namespace jclass
