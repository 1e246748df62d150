#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>

#include "frostman/errors.hpp"

namespace frostman {

// Exact rational with checked 64-bit arithmetic; throws on overflow instead
// of silently degrading.  Used for set-construction pieces so that deep
// subdivision decisions (piece vs. dyadic cube) never hinge on fp noise.
struct Frac {
  long long num = 0;
  long long den = 1;

  Frac() = default;
  Frac(long long n, long long d);

  static Frac of(long long n) { return Frac(n, 1); }

  Frac operator+(const Frac& o) const;
  Frac operator-(const Frac& o) const;
  Frac operator*(const Frac& o) const;
  bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
  bool operator<(const Frac& o) const;
  bool operator<=(const Frac& o) const;

  // Compare against the dyadic rational k * 2^-level (level <= 62).
  int cmp_dyadic(std::uint64_t k, int level) const;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Parses "3", "-1/3", "0.25", "2^-8" into an exact rational when the value
// fits; returns nullopt for strings that are numbers but not exactly
// representable in 64-bit rationals.
std::optional<Frac> parse_exact_number(const std::string& s);
// Same grammar, always producing a double (throws input_error if malformed).
double parse_number(const std::string& s);

// %.12g — all reported floats use 12 significant digits.
std::string fmt12(double v);

std::uint64_t fnv1a64(const std::string& s);

// Worker count: FROSTMAN_THREADS if set (>=1), else hardware concurrency.
unsigned resolve_thread_count();

// Static-chunked parallel loop over [0, n); runs inline when n or the worker
// count is small.  Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace frostman
