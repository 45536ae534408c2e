#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twist/cache.hpp"
#include "twist/newforms.hpp"

namespace twist::cli {

using json = nlohmann::ordered_json;

// Bad value for a named flag; exit code 1.
struct FlagError : std::invalid_argument {
  FlagError(const std::string &flag, const std::string &msg)
      : std::invalid_argument(flag + ": " + msg), flag(flag) {}
  std::string flag;
};

// A check that ran but did not meet its numerical contract; exit code 2.
struct ContractFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct RunConfig {
  std::string form = "level11";
  std::string form2;
  std::string fetch_url;
  i64 p = 3;
  std::vector<int> hs;
  i64 l1 = 1, l2 = 1;
  i64 ell = 13;
  int t = 1;
  std::uint64_t seed = 12345;
  Format format = Format::json;
  std::string cache_dir = ".twist-cache";
  bool no_cache = false;
  double cutoff_scale = 1.0;
  i64 coeffs = 0; // 0: per-command default
  unsigned threads = 0;
  std::string output;
};

// {"value": v, "err": e}
json measured(double v, double err);
// {"re": , "im": , "err": }
json measured(std::complex<double> v, double err);
// {"value": v, "exact": true}
json exact(json v);
std::string i128_string(i128 v);

// rows[] flattened with dotted keys; nested arrays are skipped.
std::string csv_projection(const json &report);
void emit(const json &report, const RunConfig &cfg);

std::vector<int> parse_h_range(const std::string &flag, const std::string &text);

// Resolves --form / --fetch-url specs to coefficient tables.
class FormProvider {
public:
  FormProvider(const RunConfig &cfg, std::ostream *log);
  NewformTable get(const std::string &spec, i64 N);

private:
  NewformTable fetch(const std::string &url);
  const RunConfig &cfg_;
  std::ostream *log_;
  std::optional<CoefficientCache> cache_;
  std::optional<NewformTable> fetched_;
  std::string fetched_url_;
};

// Parses "need N >= k" from the library's insufficient-coefficient errors.
std::optional<i64> required_terms(const std::string &message);

json run_characters(const RunConfig &cfg, bool list_wild);
json run_lvalue(const RunConfig &cfg, FormProvider &forms, bool all, int digits);
json run_moment(const RunConfig &cfg, FormProvider &forms);
json run_trace(const RunConfig &cfg, FormProvider &forms, double c);
json run_errorterm(const RunConfig &cfg, FormProvider &forms, std::optional<i64> xi,
                   std::optional<i64> xi_order, bool keep_diagonal,
                   bool allow_truncation);
struct LatticeFlags {
  i64 q = 27;
  i64 xi = 1;
  int samples = 200;
  double max_side = 4096;
  double ball_T = 200;
  double sieve_M = 300, sieve_N = 500;
  i64 sieve_max_product = 100;
  i64 weil_max = 0;
};
json run_lattice(const RunConfig &cfg, const LatticeFlags &lf);
json run_satotate(const RunConfig &cfg, FormProvider &forms, i64 z);
struct RecognizeFlags {
  std::string value;
  i64 m = 0;
  int degree = 0;
  bool rational = false;
  std::string height = "1000000";
};
json run_recognize(const RunConfig &cfg, FormProvider &forms, const RecognizeFlags &rf);
json run_selftest(const RunConfig &cfg, FormProvider &forms);

} // namespace twist::cli
