#pragma once

#include <map>
#include <mutex>

#include "twist/cache.hpp"
#include "twist/newforms.hpp"

namespace twist::test {

// Built-in tables shared across test cases, backed by an on-disk cache in
// the build tree.
inline const NewformTable &builtin(const std::string &name, i64 N) {
  static std::map<std::pair<std::string, i64>, NewformTable> tables;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(name, N);
  auto it = tables.find(key);
  if (it != tables.end())
    return it->second;
  CoefficientCache cache(TWIST_TEST_CACHE_DIR);
  auto f = cache.get(name, N, [&](i64 n) {
    return eta_product_coefficients(parse_builtin(name), n);
  });
  return tables.emplace(key, std::move(f)).first->second;
}

inline const NewformTable &level11(i64 N = 2'000'000) { return builtin("level11", N); }
inline const NewformTable &delta(i64 N = 1'000'000) { return builtin("delta", N); }

} // namespace twist::test
