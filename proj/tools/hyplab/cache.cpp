#include "cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hyplab/errors.hpp"

namespace hyplab::cli {

namespace {

constexpr char kMagic[8] = {'H', 'Y', 'P', 'L', 'A', 'B', 'V', 'T'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw Error(ErrorKind::io, "cache: truncated record");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

std::string key_string(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) {
  return spec.canonical() + "|" + std::to_string(lo) + "|" + std::to_string(hi) + "|v" +
         std::to_string(SegmentCache::kVersion);
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string serialize_table(const ValueTable& table) {
  std::string out(kMagic, sizeof kMagic);
  put_u64(out, SegmentCache::kVersion);
  const std::string key = key_string(table.spec(), table.lo(), table.hi());
  put_u64(out, key.size());
  out += key;
  put_u64(out, table.exact() ? 0 : 1);
  put_u64(out, table.size());
  if (table.exact())
    for (std::int64_t v : table.integers()) put_u64(out, static_cast<std::uint64_t>(v));
  else
    for (double v : table.reals()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  put_u64(out, fnv1a(out));
  return out;
}

ValueTable deserialize_table(const std::string& bytes, const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) {
  if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::io, "cache: bad magic");
  std::size_t pos = sizeof kMagic;
  if (get_u64(bytes, pos) != SegmentCache::kVersion) throw Error(ErrorKind::io, "cache: version mismatch");
  const std::uint64_t klen = get_u64(bytes, pos);
  if (klen > bytes.size() - pos) throw Error(ErrorKind::io, "cache: truncated key");
  if (bytes.compare(pos, klen, key_string(spec, lo, hi)) != 0 || klen != key_string(spec, lo, hi).size())
    throw Error(ErrorKind::io, "cache: key mismatch");
  pos += klen;
  const std::uint64_t kind = get_u64(bytes, pos);
  const std::uint64_t count = get_u64(bytes, pos);
  if (kind > 1 || count != hi - lo + 1 || bytes.size() != pos + 8 * count + 8)
    throw Error(ErrorKind::io, "cache: bad payload size");
  const std::uint64_t want = fnv1a(std::string_view(bytes).substr(0, bytes.size() - 8));
  std::size_t tail = bytes.size() - 8;
  if (get_u64(bytes, tail) != want) throw Error(ErrorKind::io, "cache: checksum mismatch");
  if (kind == 0) {
    std::vector<std::int64_t> v(count);
    for (auto& e : v) e = static_cast<std::int64_t>(get_u64(bytes, pos));
    return ValueTable(spec, lo, std::move(v));
  }
  std::vector<double> v(count);
  for (auto& e : v) e = std::bit_cast<double>(get_u64(bytes, pos));
  return ValueTable(spec, lo, std::move(v));
}

std::filesystem::path SegmentCache::path_for(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) const {
  std::ostringstream name;
  name << std::hex << fnv1a(key_string(spec, lo, hi)) << ".hvt";
  return dir_ / name.str();
}

std::optional<ValueTable> SegmentCache::load(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) const {
  const auto path = path_for(spec, lo, hi);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_table(bytes, spec, lo, hi);
  } catch (const Error& e) {
    std::cerr << "warning: " << e.what() << " in " << path.string() << "; recomputing\n";
    return std::nullopt;
  }
}

void SegmentCache::store(const ValueTable& table) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const auto path = path_for(table.spec(), table.lo(), table.hi());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    const std::string bytes = serialize_table(table);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::cerr << "warning: could not write cache file " << tmp << "\n";
      return;
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::cerr << "warning: could not install cache file " << path.string() << ": " << ec.message() << "\n";
}

}  // namespace hyplab::cli
