#include "nmjet/monomials.hpp"

#include <map>
#include <mutex>
#include <utility>

#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

// Full multiplication tables are kept for bases up to this many monomials
// (n = 3 up to degree 12); larger bases fall back to hashed key lookup.
constexpr std::size_t kTableLimit = 512;

void enumerate_degree(int nvars, int remaining, int var, std::vector<int>& current,
                      std::vector<int>& out) {
  if (var == nvars - 1) {
    current[var] = remaining;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    enumerate_degree(nvars, remaining - e, var + 1, current, out);
  }
}

}  // namespace

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int nvars, int degcap) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{nvars, degcap}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, degcap);
  return slot;
}

MonomialBasis::MonomialBasis(int nvars, int degcap) : nvars_(nvars), degcap_(degcap) {
  if (nvars <= 0) throw Error(ErrorCode::BadInput, "number of variables must be positive");
  if (degcap < 0) throw Error(ErrorCode::BadInput, "degree cap must be nonnegative");
  std::vector<int> current(nvars, 0);
  offsets_.push_back(0);
  for (int d = 0; d <= degcap; ++d) {
    enumerate_degree(nvars, d, 0, current, exponents_);
    offsets_.push_back(exponents_.size() / nvars);
  }
  const std::size_t n = offsets_.back();
  degree_.resize(n);
  key_.resize(n);
  for (int d = 0; d <= degcap; ++d)
    for (std::size_t i = offsets_[d]; i < offsets_[d + 1]; ++i) degree_[i] = d;
  const std::uint64_t base = static_cast<std::uint64_t>(degcap) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (int v = nvars - 1; v >= 0; --v) key = key * base + exponents_[i * nvars + v];
    key_[i] = key;
    index_.emplace(key, i);
  }
  if (n <= kTableLimit) {
    table_.assign(n * n, npos);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (degree_[i] + degree_[j] <= degcap) table_[i * n + j] = lookup(key_[i] + key_[j]);
  }
  derivatives_.resize(n * nvars);
  std::vector<int> alpha(nvars);
  for (std::size_t i = 0; i < n; ++i)
    for (int v = 0; v < nvars; ++v) {
      const int e = exponents_[i * nvars + v];
      if (e == 0) {
        derivatives_[i * nvars + v] = {0, 0.0};
        continue;
      }
      for (int w = 0; w < nvars; ++w) alpha[w] = exponents_[i * nvars + w];
      alpha[v] -= 1;
      derivatives_[i * nvars + v] = {index_of(alpha), static_cast<double>(e)};
    }
}

std::size_t MonomialBasis::lookup(std::uint64_t key) const noexcept {
  auto it = index_.find(key);
  return it == index_.end() ? npos : it->second;
}

std::size_t MonomialBasis::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(nvars_)) return npos;
  int total = 0;
  for (int e : alpha) {
    if (e < 0) return npos;
    total += e;
  }
  if (total > degcap_) return npos;
  const std::uint64_t base = static_cast<std::uint64_t>(degcap_) + 1;
  std::uint64_t key = 0;
  for (int v = nvars_ - 1; v >= 0; --v) key = key * base + alpha[v];
  return lookup(key);
}

}  // namespace nmjet
