#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twist/newforms.hpp"

namespace twist {

struct CacheCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary layout: magic, label, level, 2 kappa, eps, N, a(0..N) as zigzag
// varints, CRC-32 of everything before it.
void write_coefficient_file(const std::filesystem::path &path,
                            const NewformTable &f);
NewformTable read_coefficient_file(const std::filesystem::path &path);

enum class CacheEventKind { hit, superset, generated, corrupt, stored };

struct CacheEvent {
  CacheEventKind kind;
  std::filesystem::path path;
  std::string message;
};

const char *to_string(CacheEventKind k);

// Files <label>-<N>.twc in one directory. A request for N is served by the
// smallest cached N' >= N; unreadable or checksum-failing files are removed
// and regenerated.
class CoefficientCache {
public:
  using Generator = std::function<NewformTable(i64)>;

  explicit CoefficientCache(std::filesystem::path dir, std::ostream *log = nullptr);

  const std::filesystem::path &dir() const { return dir_; }
  std::filesystem::path path_for(const std::string &label, i64 N) const;

  std::optional<NewformTable> load(const std::string &label, i64 N);
  void store(const NewformTable &f);
  NewformTable get(const std::string &label, i64 N, const Generator &gen);

  const std::vector<CacheEvent> &events() const { return events_; }

private:
  void record(CacheEventKind kind, const std::filesystem::path &p,
              std::string message);
  std::filesystem::path dir_;
  std::ostream *log_;
  std::vector<CacheEvent> events_;
};

} // namespace twist
