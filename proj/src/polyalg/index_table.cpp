#include "ettk/polyalg/index_table.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "ettk/errors.hpp"

namespace ettk::polyalg {

namespace {

// Hard cap on table size: keeps exact-order products and moment tables inside
// the memory envelope instead of thrashing the sandbox.
constexpr std::size_t kMaxTableSize = 80'000'000;

std::uint64_t count_upto(int nvars, int order) {
  // C(nvars + order, order), guarded against overflow for absurd requests.
  long double c = 1.0L;
  for (int j = 1; j <= order; ++j) c = c * static_cast<long double>(nvars + j) / static_cast<long double>(j);
  return static_cast<std::uint64_t>(c + 0.5L);
}

}  // namespace

std::shared_ptr<const IndexTable> IndexTable::get(int nvars, int order) {
  if (nvars < 1) throw std::invalid_argument("IndexTable: nvars must be >= 1, got " + std::to_string(nvars));
  if (order < 1) throw std::invalid_argument("IndexTable: order must be >= 1, got " + std::to_string(order));
  if (count_upto(nvars, order) > kMaxTableSize)
    throw numerical_error("IndexTable: requested multi-index table (nvars=" + std::to_string(nvars) +
                          ", order=" + std::to_string(order) + ") exceeds the supported table size");

  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::shared_ptr<const IndexTable>(new IndexTable(nvars, order));
  cache.emplace(key, table);
  return table;
}

IndexTable::IndexTable(int nvars, int order) : nvars_(nvars), order_(order) {
  // Binomial table C(n, k) for n <= nvars + order, used by rank().
  binom_cols_ = nvars + order + 1;
  const int rows = nvars + order + 1;
  binom_.assign(static_cast<std::size_t>(rows) * binom_cols_, 0);
  for (int n = 0; n < rows; ++n) {
    binom_[static_cast<std::size_t>(n) * binom_cols_] = 1;
    for (int k = 1; k <= n && k < binom_cols_; ++k) {
      const std::uint64_t a = binom_[static_cast<std::size_t>(n - 1) * binom_cols_ + k - 1];
      const std::uint64_t b = (k <= n - 1) ? binom_[static_cast<std::size_t>(n - 1) * binom_cols_ + k] : 0;
      binom_[static_cast<std::size_t>(n) * binom_cols_ + k] = a + b;
    }
  }

  const std::size_t total = count_upto(nvars, order);
  offsets_.reserve(static_cast<std::size_t>(order) + 2);
  degrees_.reserve(total);
  exps_.reserve(total * nvars);
  log_fact_.reserve(total);

  std::vector<double> lf(static_cast<std::size_t>(order) + 1, 0.0);
  for (int j = 2; j <= order; ++j) lf[static_cast<std::size_t>(j)] = lf[static_cast<std::size_t>(j) - 1] + std::log(static_cast<double>(j));

  std::vector<std::uint8_t> alpha(static_cast<std::size_t>(nvars), 0);
  offsets_.push_back(0);
  for (int d = 0; d <= order; ++d) {
    // Emit all |alpha| = d in descending lex: choose the leading exponent
    // from d down to 0 and recurse on the remainder.
    double lsum = 0.0;
    auto emit = [&](auto&& self, int var, int remaining) -> void {
      if (var == nvars - 1) {
        alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
        degrees_.push_back(static_cast<std::uint8_t>(d));
        exps_.insert(exps_.end(), alpha.begin(), alpha.end());
        log_fact_.push_back(lsum + lf[static_cast<std::size_t>(remaining)]);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
        const double saved = lsum;
        lsum += lf[static_cast<std::size_t>(e)];
        self(self, var + 1, remaining - e);
        lsum = saved;
      }
    };
    emit(emit, 0, d);
    offsets_.push_back(degrees_.size());
  }
}

std::uint64_t IndexTable::binom(int n, int k) const {
  if (k < 0 || k > n) return 0;
  return binom_[static_cast<std::size_t>(n) * binom_cols_ + k];
}

std::size_t IndexTable::rank(std::span<const std::uint8_t> alpha) const {
  int d = 0;
  for (std::uint8_t e : alpha) d += e;
  // Within the degree block, the rank counts tuples that precede alpha in
  // descending lex; the per-variable contribution collapses to a single
  // binomial through the hockey-stick identity.
  std::size_t r = offsets_[static_cast<std::size_t>(d)];
  int m = nvars_;
  int dd = d;
  for (int i = 0; i + 1 < nvars_; ++i) {
    const int ai = alpha[static_cast<std::size_t>(i)];
    if (dd - ai - 1 >= 0) r += binom(m + dd - ai - 2, dd - ai - 1);
    dd -= ai;
    m -= 1;
  }
  return r;
}

}  // namespace ettk::polyalg
