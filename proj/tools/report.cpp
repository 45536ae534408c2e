#include <algorithm>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "cli.hpp"

#ifdef TWIST_WITH_FETCH
#include <httplib.h>
#endif

namespace twist::cli {

namespace fs = std::filesystem;

json measured(double v, double err) { return {{"value", v}, {"err", err}}; }

json measured(std::complex<double> v, double err) {
  return {{"re", v.real()}, {"im", v.imag()}, {"err", err}};
}

json exact(json v) { return {{"value", std::move(v)}, {"exact", true}}; }

std::string i128_string(i128 v) {
  if (v == 0)
    return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg)
    s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

void flatten(const json &j, const std::string &prefix,
             std::vector<std::pair<std::string, const json *>> &out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (!j.is_array()) {
    out.emplace_back(prefix, &j);
  }
}

std::string csv_cell(const json &v) {
  if (v.is_null())
    return "";
  if (v.is_string()) {
    const auto &s = v.get_ref<const std::string &>();
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"')
        q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

} // namespace

std::string csv_projection(const json &report) {
  std::vector<std::string> header;
  std::vector<std::vector<std::pair<std::string, const json *>>> rows;
  if (report.contains("rows"))
    for (const auto &r : report["rows"]) {
      rows.emplace_back();
      flatten(r, "", rows.back());
      for (const auto &kv : rows.back())
        if (std::find(header.begin(), header.end(), kv.first) == header.end())
          header.push_back(kv.first);
    }
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto &r : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i)
        os << ",";
      for (const auto &kv : r)
        if (kv.first == header[i]) {
          os << csv_cell(*kv.second);
          break;
        }
    }
    os << "\n";
  }
  return os.str();
}

void emit(const json &report, const RunConfig &cfg) {
  std::string text = cfg.format == Format::csv ? csv_projection(report)
                                               : report.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  if (!out)
    throw FlagError("--output", "cannot open '" + cfg.output + "' for writing");
  out << text;
}

std::vector<int> parse_h_range(const std::string &flag, const std::string &text) {
  std::vector<int> hs;
  auto number = [&](const std::string &s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw FlagError(flag, "expected an integer, a range a..b or a list, got '" +
                                text + "'");
    if (s.size() > 3)
      throw FlagError(flag, "value out of range in '" + text + "'");
    return std::stoi(s);
  };
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      hs.push_back(number(part));
    } else {
      int a = number(part.substr(0, dots)), b = number(part.substr(dots + 2));
      if (a > b)
        throw FlagError(flag, "empty range '" + part + "'");
      for (int h = a; h <= b; ++h)
        hs.push_back(h);
    }
  }
  if (hs.empty())
    throw FlagError(flag, "no values given");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i] < 2 || hs[i] > 12)
      throw FlagError(flag, "h must lie in [2, 12], got " + std::to_string(hs[i]));
    if (i && hs[i] <= hs[i - 1])
      throw FlagError(flag, "values must be strictly increasing");
  }
  return hs;
}

std::optional<i64> required_terms(const std::string &message) {
  static const std::regex re("need N >= ([0-9]+)");
  std::smatch m;
  if (std::regex_search(message, m, re))
    return std::stoll(m[1].str());
  return std::nullopt;
}

FormProvider::FormProvider(const RunConfig &cfg, std::ostream *log)
    : cfg_(cfg), log_(log) {
  if (!cfg.no_cache)
    cache_.emplace(cfg.cache_dir, log);
}

NewformTable FormProvider::get(const std::string &spec, i64 N) {
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    NewformTable f = fetch(spec);
    if (f.size() < N)
      throw FlagError("--fetch-url", "download has " + std::to_string(f.size()) +
                                         " coefficients, need " + std::to_string(N));
    return f.truncated(N);
  }
  std::optional<BuiltinForm> builtin;
  try {
    builtin = parse_builtin(spec);
  } catch (const std::invalid_argument &) {
  }
  if (builtin) {
    auto gen = [&](i64 n) { return eta_product_coefficients(*builtin, n); };
    const std::string label = *builtin == BuiltinForm::level11 ? "level11" : "delta";
    if (!cache_)
      return gen(N);
    return cache_->get(label, N, gen);
  }
  if (!fs::exists(spec))
    throw FlagError("--form", "'" + spec +
                                  "' is neither a built-in (level11, delta) nor a file");
  NewformTable f;
  try {
    f = load_qexpansion(spec);
  } catch (const std::exception &e) {
    throw FlagError("--form", e.what());
  }
  if (f.size() < N)
    throw FlagError("--form", "'" + spec + "' has " + std::to_string(f.size()) +
                                  " coefficients, need " + std::to_string(N));
  return f.truncated(N);
}

NewformTable FormProvider::fetch(const std::string &url) {
#ifdef TWIST_WITH_FETCH
  if (fetched_ && fetched_url_ == url)
    return *fetched_;
  static const std::regex re("^http://([^/:]+)(:([0-9]+))?(/.*)?$");
  std::smatch m;
  if (!std::regex_match(url, m, re))
    throw FlagError("--fetch-url", "only plain http://host[:port]/path URLs are supported");
  std::string host = m[1].str();
  int port = m[3].matched ? std::stoi(m[3].str()) : 80;
  std::string path = m[4].matched ? m[4].str() : "/";
  httplib::Client client(host, port);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  auto res = client.Get(path.c_str());
  if (!res)
    throw FlagError("--fetch-url", "request to '" + url + "' failed: " +
                                       httplib::to_string(res.error()));
  if (res->status != 200)
    throw FlagError("--fetch-url", "'" + url + "' returned HTTP " +
                                       std::to_string(res->status));
  NewformTable f;
  try {
    f = parse_qexpansion(res->body, url);
  } catch (const std::exception &e) {
    throw FlagError("--fetch-url", e.what());
  }
  if (log_)
    *log_ << "fetched " << url << ": " << f.label() << ", N = " << f.size() << "\n";
  fetched_ = f;
  fetched_url_ = url;
  return f;
#else
  throw FlagError("--fetch-url", "built without HTTP support ('" + url + "')");
#endif
}

} // namespace twist::cli
