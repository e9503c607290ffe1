#pragma once

#include <complex>
#include <string>
#include <vector>

namespace jclass {

// Floating-point text form used everywhere the tools print numbers: %.17g,
// which round-trips doubles exactly and is stable across runs.
std::string fmt17(double x);
std::string fmt17(std::complex<double> z);  // "re+imi" / "re-imi"

// Comma-separated doubles ("1,2.5,-3e-2").  Throws InvalidArgument on junk.
std::vector<double> parse_double_list(const std::string& text);

// Complex scalar in "a", "a+bi", "a-bi", or "bi" form.
std::complex<double> parse_complex(const std::string& text);

// Comma-separated complex values; parentheses may wrap entries with signs,
// e.g. "(1+2i),(3-0.5i)" or "1,2i".
std::vector<std::complex<double>> parse_complex_list(const std::string& text);

}  // namespace jclass
