#pragma once

// Text grid format:
//   d=<int>
//   J=<int>
//   box=<lo_1> <hi_1> ... <lo_d> <hi_d>      (each as m/2^J0, or a plain integer)
//   <one sample per line, row-major, first axis slowest>
// Lines starting with '#' are ignored.

#include <iosfwd>
#include <string>

#include "haar/dyadic.hpp"

namespace haar {

void write_grid(std::ostream& os, const GridFunction& f);
GridFunction read_grid(std::istream& is);

void save_grid(const std::string& path, const GridFunction& f);
GridFunction load_grid(const std::string& path);

/// Parses "m/2^e" or "m" into (m, e).
void parse_dyadic(const std::string& token, std::int64_t& numerator, int& exponent);

/// Parses a box written as "lo_1 hi_1 ... lo_d hi_d" in the dyadic token form.
Box parse_box(const std::string& text, std::size_t d);
std::string format_box(const Box& box);

}  // namespace haar
