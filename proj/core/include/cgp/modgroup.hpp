#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace cgp {

/// Element of SL(2, Z_n): a 2x2 matrix over Z_n with determinant 1.
///
/// Entries are always held as canonical residues in [0, n). Construction
/// reduces its arguments and rejects matrices whose determinant is not 1.
class Mat2Z {
 public:
  Mat2Z(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::uint32_t n);

  static Mat2Z identity(std::uint32_t n);

  std::uint32_t a() const { return a_; }
  std::uint32_t b() const { return b_; }
  std::uint32_t c() const { return c_; }
  std::uint32_t d() const { return d_; }
  std::uint32_t modulus() const { return n_; }

  /// Dense integer key, unique among elements of the same modulus.
  std::uint64_t key() const;

  friend bool operator==(const Mat2Z&, const Mat2Z&) = default;
  friend auto operator<=>(const Mat2Z&, const Mat2Z&) = default;

 private:
  // Field order matters for the defaulted ordering: n, then a, b, c, d.
  std::uint32_t n_;
  std::uint32_t a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const Mat2Z& m);

/// Group product x*y reduced mod n. Throws std::invalid_argument on modulus mismatch.
Mat2Z mat_mul(const Mat2Z& x, const Mat2Z& y);

/// Multiplicative inverse [[d, -b], [-c, a]].
Mat2Z mat_inverse(const Mat2Z& x);

/// |SL(2, Z_n)| = n^3 * prod_{p | n} (1 - 1/p^2), evaluated exactly in integers.
std::uint64_t sl2_order(std::uint64_t n);

/// Every determinant-one matrix over Z_n in lexicographic (a, b, c, d) order.
/// Quartic in n; restricted to 2 <= n <= 20.
std::vector<Mat2Z> enumerate_sl2_bruteforce(std::uint32_t n);

/// The symmetric generating set {[[1,1],[0,1]], [[1,-1],[0,1]], [[1,0],[1,1]], [[1,0],[-1,1]]}
/// in that order, with coinciding entries removed (n = 2 leaves two).
std::vector<Mat2Z> generators(std::uint32_t n);

}  // namespace cgp

template <>
struct std::hash<cgp::Mat2Z> {
  std::size_t operator()(const cgp::Mat2Z& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.key() ^ (std::uint64_t{m.modulus()} << 40));
  }
};
