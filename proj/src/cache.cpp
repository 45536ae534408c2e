#include "twist/cache.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include <boost/crc.hpp>

namespace twist {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'T', 'W', 'C', 'O', 'E', 'F', '0', '2'};

class Writer {
public:
  void bytes(const void *p, std::size_t n) {
    auto c = static_cast<const char *>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  template <typename T> void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      buf_.push_back(static_cast<char>(static_cast<unsigned char>(
          (static_cast<unsigned __int128>(v) >> (8 * i)) & 0xff)));
  }
  // Zigzag LEB128.
  void varint(i128 v) {
    auto u = (static_cast<unsigned __int128>(v) << 1) ^
             static_cast<unsigned __int128>(v >> 127);
    do {
      unsigned char byte = static_cast<unsigned char>(u & 0x7f);
      u >>= 7;
      buf_.push_back(static_cast<char>(u ? byte | 0x80 : byte));
    } while (u);
  }
  std::vector<char> &buffer() { return buf_; }

private:
  std::vector<char> buf_;
};

class Reader {
public:
  Reader(const std::vector<char> &buf, std::size_t end, const fs::path &path)
      : buf_(buf), end_(end), path_(path) {}
  void bytes(void *p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  template <typename T> T le() {
    need(sizeof(T));
    unsigned __int128 v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<unsigned __int128>(
               static_cast<unsigned char>(buf_[pos_ + i]))
           << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  i128 varint() {
    unsigned __int128 u = 0;
    for (int shift = 0;; shift += 7) {
      if (shift > 126)
        throw CacheCorrupt(path_.string() + ": malformed coefficient");
      need(1);
      auto byte = static_cast<unsigned char>(buf_[pos_++]);
      u |= static_cast<unsigned __int128>(byte & 0x7f) << shift;
      if (!(byte & 0x80))
        break;
    }
    return static_cast<i128>(u >> 1) ^ -static_cast<i128>(u & 1);
  }
  std::size_t remaining() const { return end_ - pos_; }

private:
  void need(std::size_t n) {
    if (end_ - pos_ < n)
      throw CacheCorrupt(path_.string() + ": truncated");
  }
  const std::vector<char> &buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
  fs::path path_;
};

std::uint32_t crc32(const char *p, std::size_t n) {
  boost::crc_32_type c;
  c.process_bytes(p, n);
  return c.checksum();
}

} // namespace

void write_coefficient_file(const fs::path &path, const NewformTable &f) {
  if (!f.exact())
    throw std::invalid_argument("coefficient cache: only integer tables are stored");
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(f.label().size()));
  w.bytes(f.label().data(), f.label().size());
  w.le<std::int64_t>(f.level());
  w.le<std::int32_t>(f.two_kappa());
  w.le<std::int32_t>(f.eps());
  w.le<std::int64_t>(f.size());
  for (i64 n = 0; n <= f.size(); ++n)
    w.varint(f.a(n));
  auto &buf = w.buffer();
  std::uint32_t crc = crc32(buf.data(), buf.size());
  w.le<std::uint32_t>(crc);

  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw fs::filesystem_error("coefficient cache: cannot write", tmp,
                                 std::make_error_code(std::errc::io_error));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out)
      throw fs::filesystem_error("coefficient cache: write failed", tmp,
                                 std::make_error_code(std::errc::io_error));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw fs::filesystem_error("coefficient cache: cannot rename", tmp, path, ec);
}

NewformTable read_coefficient_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw fs::filesystem_error("coefficient cache: cannot open", path,
                               std::make_error_code(std::errc::no_such_file_or_directory));
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < sizeof kMagic + 4)
    throw CacheCorrupt(path.string() + ": truncated");
  std::size_t body = buf.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[body + i]))
              << (8 * i);
  if (crc32(buf.data(), body) != stored)
    throw CacheCorrupt(path.string() + ": checksum mismatch");

  Reader r(buf, body, path);
  char magic[sizeof kMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw CacheCorrupt(path.string() + ": bad magic");
  auto len = r.le<std::uint32_t>();
  if (len > r.remaining())
    throw CacheCorrupt(path.string() + ": bad label length");
  std::string label(len, '\0');
  r.bytes(label.data(), len);
  auto level = r.le<std::int64_t>();
  auto two_kappa = r.le<std::int32_t>();
  auto eps = r.le<std::int32_t>();
  auto N = r.le<std::int64_t>();
  if (N < 1 || static_cast<std::size_t>(N + 1) > r.remaining())
    throw CacheCorrupt(path.string() + ": size does not match header");
  std::vector<i128> a(static_cast<std::size_t>(N + 1));
  for (auto &c : a)
    c = r.varint();
  if (r.remaining() != 0)
    throw CacheCorrupt(path.string() + ": trailing bytes");
  return NewformTable(std::move(label), level, two_kappa, eps, std::move(a));
}

const char *to_string(CacheEventKind k) {
  switch (k) {
  case CacheEventKind::hit:
    return "hit";
  case CacheEventKind::superset:
    return "superset";
  case CacheEventKind::generated:
    return "generated";
  case CacheEventKind::corrupt:
    return "corrupt";
  case CacheEventKind::stored:
    return "stored";
  }
  return "?";
}

CoefficientCache::CoefficientCache(fs::path dir, std::ostream *log)
    : dir_(std::move(dir)), log_(log) {}

fs::path CoefficientCache::path_for(const std::string &label, i64 N) const {
  return dir_ / (label + "-" + std::to_string(N) + ".twc");
}

void CoefficientCache::record(CacheEventKind kind, const fs::path &p,
                              std::string message) {
  if (log_)
    *log_ << "cache " << to_string(kind) << ": " << p.string()
          << (message.empty() ? "" : " (" + message + ")") << "\n";
  events_.push_back({kind, p, std::move(message)});
}

std::optional<NewformTable> CoefficientCache::load(const std::string &label,
                                                   i64 N) {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec))
    return std::nullopt;
  std::vector<std::pair<i64, fs::path>> candidates;
  const std::string prefix = label + "-";
  for (const auto &entry : fs::directory_iterator(dir_, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() != ".twc" || name.rfind(prefix, 0) != 0)
      continue;
    const auto digits = name.substr(prefix.size(), name.size() - prefix.size() - 4);
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      continue;
    i64 M = std::stoll(digits);
    if (M >= N)
      candidates.emplace_back(M, entry.path());
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto &[M, p] : candidates) {
    try {
      NewformTable f = read_coefficient_file(p);
      if (f.label() != label || f.size() != M)
        throw CacheCorrupt(p.string() + ": header does not match file name");
      if (M == N) {
        record(CacheEventKind::hit, p, "");
        return f;
      }
      record(CacheEventKind::superset, p, "N = " + std::to_string(N));
      return f.truncated(N);
    } catch (const CacheCorrupt &e) {
      record(CacheEventKind::corrupt, p, e.what());
      fs::remove(p, ec);
    }
  }
  return std::nullopt;
}

void CoefficientCache::store(const NewformTable &f) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec)
    throw fs::filesystem_error("coefficient cache: cannot create", dir_, ec);
  auto p = path_for(f.label(), f.size());
  write_coefficient_file(p, f);
  record(CacheEventKind::stored, p, "");
}

NewformTable CoefficientCache::get(const std::string &label, i64 N,
                                   const Generator &gen) {
  if (auto f = load(label, N))
    return *f;
  NewformTable f = gen(N);
  record(CacheEventKind::generated, path_for(label, N), "");
  store(f);
  return f;
}

} // namespace twist
