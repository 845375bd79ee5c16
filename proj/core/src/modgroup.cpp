#include "cgp/modgroup.hpp"

#include <stdexcept>
#include <string>

namespace cgp {
namespace {

constexpr std::uint32_t kMaxModulus = 1u << 16;

std::uint32_t reduce(std::int64_t x, std::uint32_t n) {
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t r = x % m;
  return static_cast<std::uint32_t>(r < 0 ? r + m : r);
}

}  // namespace

Mat2Z::Mat2Z(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::uint32_t n)
    : n_(n) {
  if (n < 2 || n > kMaxModulus) {
    throw std::invalid_argument("Mat2Z: modulus must lie in [2, 65536], got " + std::to_string(n));
  }
  a_ = reduce(a, n);
  b_ = reduce(b, n);
  c_ = reduce(c, n);
  d_ = reduce(d, n);
  const std::int64_t det = std::int64_t{a_} * d_ - std::int64_t{b_} * c_;
  if (reduce(det, n) != 1 % n) {
    throw std::invalid_argument("Mat2Z: determinant is not 1 mod " + std::to_string(n));
  }
}

Mat2Z Mat2Z::identity(std::uint32_t n) { return Mat2Z(1, 0, 0, 1, n); }

std::uint64_t Mat2Z::key() const {
  const std::uint64_t n = n_;
  return ((std::uint64_t{a_} * n + b_) * n + c_) * n + d_;
}

std::ostream& operator<<(std::ostream& os, const Mat2Z& m) {
  return os << "[[" << m.a() << "," << m.b() << "],[" << m.c() << "," << m.d() << "]] mod "
            << m.modulus();
}

Mat2Z mat_mul(const Mat2Z& x, const Mat2Z& y) {
  if (x.modulus() != y.modulus()) {
    throw std::invalid_argument("mat_mul: modulus mismatch (" + std::to_string(x.modulus()) +
                                " vs " + std::to_string(y.modulus()) + ")");
  }
  const std::int64_t n = x.modulus();
  const std::int64_t a = (std::int64_t{x.a()} * y.a() + std::int64_t{x.b()} * y.c()) % n;
  const std::int64_t b = (std::int64_t{x.a()} * y.b() + std::int64_t{x.b()} * y.d()) % n;
  const std::int64_t c = (std::int64_t{x.c()} * y.a() + std::int64_t{x.d()} * y.c()) % n;
  const std::int64_t d = (std::int64_t{x.c()} * y.b() + std::int64_t{x.d()} * y.d()) % n;
  return Mat2Z(a, b, c, d, x.modulus());
}

Mat2Z mat_inverse(const Mat2Z& x) {
  return Mat2Z(x.d(), -std::int64_t{x.b()}, -std::int64_t{x.c()}, x.a(), x.modulus());
}

std::uint64_t sl2_order(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("sl2_order: modulus must be positive");
  }
  // n^3 * prod (p^2 - 1) / p^2 over distinct primes; divide first to stay exact.
  std::uint64_t result = n * n * n;
  std::uint64_t rest = n;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    result = result / (p * p) * (p * p - 1);
  }
  if (rest > 1) {
    result = result / (rest * rest) * (rest * rest - 1);
  }
  return result;
}

std::vector<Mat2Z> enumerate_sl2_bruteforce(std::uint32_t n) {
  if (n < 2 || n > 20) {
    throw std::invalid_argument("enumerate_sl2_bruteforce: n must lie in [2, 20], got " +
                                std::to_string(n));
  }
  std::vector<Mat2Z> out;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t d = 0; d < n; ++d) {
          if ((a * d + n * n - b * c) % n == 1) out.emplace_back(a, b, c, d, n);
        }
  return out;
}

std::vector<Mat2Z> generators(std::uint32_t n) {
  if (n < 2) {
    throw std::invalid_argument("generators: n must be at least 2");
  }
  const std::int64_t m = n;
  const std::array<Mat2Z, 4> all = {Mat2Z(1, 1, 0, 1, n), Mat2Z(1, m - 1, 0, 1, n),
                                    Mat2Z(1, 0, 1, 1, n), Mat2Z(1, 0, m - 1, 1, n)};
  std::vector<Mat2Z> out;
  for (const auto& g : all) {
    bool seen = false;
    for (const auto& h : out) seen = seen || h == g;
    if (!seen) out.push_back(g);
  }
  return out;
}

}  // namespace cgp
