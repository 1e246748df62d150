#include "frostman/util.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace frostman {

namespace {

using i128 = __int128;

long long checked_ll(i128 v, const char* what) {
  if (v > i128{0x3fffffffffffffffLL} || v < -i128{0x3fffffffffffffffLL})
    throw input_error(std::string("rational overflow in ") + what);
  return static_cast<long long>(v);
}

}  // namespace

Frac::Frac(long long n, long long d) {
  if (d == 0) throw input_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

Frac Frac::operator+(const Frac& o) const {
  return Frac(checked_ll(i128(num) * o.den + i128(o.num) * den, "add"),
              checked_ll(i128(den) * o.den, "add"));
}

Frac Frac::operator-(const Frac& o) const {
  return Frac(checked_ll(i128(num) * o.den - i128(o.num) * den, "sub"),
              checked_ll(i128(den) * o.den, "sub"));
}

Frac Frac::operator*(const Frac& o) const {
  // Cross-reduce first so products like (1/3^8)*(1/3^8) stay in range.
  const long long g1 = std::gcd(num < 0 ? -num : num, o.den);
  const long long g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
  return Frac(checked_ll(i128(num / g1) * (o.num / g2), "mul"),
              checked_ll(i128(den / g2) * (o.den / g1), "mul"));
}

bool Frac::operator<(const Frac& o) const { return i128(num) * o.den < i128(o.num) * den; }
bool Frac::operator<=(const Frac& o) const { return i128(num) * o.den <= i128(o.num) * den; }

int Frac::cmp_dyadic(std::uint64_t k, int level) const {
  const i128 lhs = i128(num) << level;
  const i128 rhs = i128(k) * den;
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

std::optional<Frac> parse_exact_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  // a/b
  if (auto slash = s.find('/'); slash != std::string::npos) {
    try {
      const long long n = std::stoll(s.substr(0, slash));
      const long long d = std::stoll(s.substr(slash + 1));
      return Frac(n, d);
    } catch (...) {
      return std::nullopt;
    }
  }
  // 2^-k
  if (auto caret = s.find('^'); caret != std::string::npos) {
    try {
      const long long base = std::stoll(s.substr(0, caret));
      const long long exp = std::stoll(s.substr(caret + 1));
      if (base != 2 || exp < -62 || exp > 62) return std::nullopt;
      if (exp >= 0) return Frac(1LL << exp, 1);
      return Frac(1, 1LL << -exp);
    } catch (...) {
      return std::nullopt;
    }
  }
  // decimal
  std::string digits = s;
  long long scale = 1;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::size_t frac_digits = s.size() - dot - 1;
    if (frac_digits > 17) return std::nullopt;
    digits = s.substr(0, dot) + s.substr(dot + 1);
    for (std::size_t i = 0; i < frac_digits; ++i) {
      if (scale > (1LL << 60) / 10) return std::nullopt;
      scale *= 10;
    }
  }
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(digits, &pos);
    if (pos != digits.size()) return std::nullopt;
    return Frac(n, scale);
  } catch (...) {
    return std::nullopt;
  }
}

double parse_number(const std::string& s) {
  if (auto f = parse_exact_number(s)) return f->to_double();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw input_error("malformed number: '" + s + "'");
    return v;
  } catch (const input_error&) {
    throw;
  } catch (...) {
    throw input_error("malformed number: '" + s + "'");
  }
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

unsigned resolve_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("FROSTMAN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(resolve_thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace frostman
