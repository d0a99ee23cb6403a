#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace nmjet {

/// Graded enumeration of the exponents alpha in N^n with |alpha| <= degcap.
/// Degree d occupies the contiguous index range [degree_begin(d), degree_begin(d+1)).
/// Within a degree, exponents are ordered lexicographically descending
/// (x1^d first). Shared, immutable, and cached per (n, degcap).
class MonomialBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static std::shared_ptr<const MonomialBasis> get(int nvars, int degcap);

  MonomialBasis(int nvars, int degcap);

  int nvars() const noexcept { return nvars_; }
  int degcap() const noexcept { return degcap_; }
  std::size_t size() const noexcept { return degree_.size(); }

  std::span<const int> exponent(std::size_t idx) const noexcept {
    return {exponents_.data() + idx * nvars_, static_cast<std::size_t>(nvars_)};
  }
  int degree(std::size_t idx) const noexcept { return degree_[idx]; }
  std::size_t degree_begin(int d) const noexcept { return offsets_[d]; }
  std::size_t degree_size(int d) const noexcept { return offsets_[d + 1] - offsets_[d]; }

  /// npos when |alpha| > degcap or the arity is wrong.
  std::size_t index_of(std::span<const int> alpha) const;

  /// Index of exponent(i) + exponent(j), npos when the sum exceeds degcap.
  std::size_t product(std::size_t i, std::size_t j) const noexcept {
    if (!table_.empty()) return table_[i * size() + j];
    if (degree_[i] + degree_[j] > degcap_) return npos;
    return lookup(key_[i] + key_[j]);
  }

  /// d/dx_var of x^alpha = factor * x^(alpha - e_var); factor 0 when alpha_var = 0.
  struct Derivative {
    std::size_t target;
    double factor;
  };
  Derivative derivative(std::size_t idx, int var) const noexcept {
    return derivatives_[idx * nvars_ + var];
  }

 private:
  std::size_t lookup(std::uint64_t key) const noexcept;

  int nvars_;
  int degcap_;
  std::vector<int> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint64_t> key_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::vector<Derivative> derivatives_;
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

}  // namespace nmjet
