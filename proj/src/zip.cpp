// SPDX-License-Identifier: Apache-2.0
#include "doctowers/zip.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

#include "doctowers/error.hpp"

namespace doctowers::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::size_t kEndSize = 22;
constexpr std::size_t kCentralSize = 46;
constexpr std::size_t kLocalSize = 30;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::NotAZipArchive, what); }

std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) fail("truncated archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(u16(b, at)) | (static_cast<std::uint32_t>(u16(b, at + 2)) << 16);
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), n);
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string inflate_raw(std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) fail("cannot initialise inflate");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) fail("corrupt deflate stream");
  return out;
}

std::string deflate_raw(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    fail("cannot initialise deflate");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) fail("deflate failed");
  return out;
}

}  // namespace

bool looks_like_zip(std::string_view bytes) noexcept {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), "PK\x03\x04", 4) == 0;
}

Archive Archive::open(std::string bytes) {
  Archive ar;
  ar.bytes_ = std::move(bytes);
  const std::string_view b = ar.bytes_;
  if (b.size() < kEndSize) fail("too small to be a ZIP archive");

  std::size_t end = std::string_view::npos;
  const std::size_t lowest = b.size() > kEndSize + 0xffff ? b.size() - kEndSize - 0xffff : 0;
  for (std::size_t at = b.size() - kEndSize + 1; at-- > lowest;) {
    if (u32(b, at) == kEndSig) {
      end = at;
      break;
    }
  }
  if (end == std::string_view::npos) fail("end of central directory not found");

  const std::uint16_t count = u16(b, end + 10);
  std::size_t at = u32(b, end + 16);
  if (count == 0xffff || at == 0xffffffffu) fail("ZIP64 archives are not supported");
  ar.entries_.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(b, at) != kCentralSig) fail("bad central directory entry");
    Entry e;
    e.flags = u16(b, at + 8);
    e.method = u16(b, at + 10);
    e.crc = u32(b, at + 16);
    e.compressed_size = u32(b, at + 20);
    e.size = u32(b, at + 24);
    const std::uint16_t name_len = u16(b, at + 28);
    const std::uint16_t extra_len = u16(b, at + 30);
    const std::uint16_t comment_len = u16(b, at + 32);
    e.local_offset = u32(b, at + 42);
    if (at + kCentralSize + name_len > b.size()) fail("truncated central directory");
    e.name = std::string(b.substr(at + kCentralSize, name_len));
    ar.entries_.push_back(std::move(e));
    at += kCentralSize + name_len + extra_len + comment_len;
  }
  return ar;
}

bool Archive::contains(std::string_view name) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.name == name; });
}

std::vector<std::string> Archive::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

std::optional<std::string> Archive::read(std::string_view name) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const Entry& e) { return e.name == name; });
  if (it == entries_.end()) return std::nullopt;
  const std::string_view b = bytes_;
  if (it->flags & 1u) fail(it->name + ": encrypted members are not supported");
  const std::size_t at = it->local_offset;
  if (u32(b, at) != kLocalSig) fail(it->name + ": bad local header");
  const std::size_t data_at = at + kLocalSize + u16(b, at + 26) + u16(b, at + 28);
  if (data_at + it->compressed_size > b.size()) fail(it->name + ": truncated member");
  const std::string_view raw = b.substr(data_at, it->compressed_size);

  std::string data;
  if (it->method == 0) {
    data = std::string(raw);
  } else if (it->method == 8) {
    data = inflate_raw(raw, it->size);
  } else {
    fail(it->name + ": unsupported compression method " + std::to_string(it->method));
  }
  if (crc_of(data) != it->crc) fail(it->name + ": CRC mismatch");
  return data;
}

std::string write(const std::vector<Member>& members) {
  std::string out;
  std::string central;
  for (const Member& m : members) {
    const std::uint32_t crc = crc_of(m.data);
    const std::string payload = m.deflate ? deflate_raw(m.data) : m.data;
    const auto offset = static_cast<std::uint32_t>(out.size());
    const std::uint16_t method = m.deflate ? 8 : 0;
    const auto name_len = static_cast<std::uint16_t>(m.name.size());

    put32(out, kLocalSig);
    put16(out, 20);
    put16(out, 0);
    put16(out, method);
    put16(out, 0);
    put16(out, 0x21);  // 1980-01-01, fixed for reproducible output
    put32(out, crc);
    put32(out, static_cast<std::uint32_t>(payload.size()));
    put32(out, static_cast<std::uint32_t>(m.data.size()));
    put16(out, name_len);
    put16(out, 0);
    out += m.name;
    out += payload;

    put32(central, kCentralSig);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, method);
    put16(central, 0);
    put16(central, 0x21);
    put32(central, crc);
    put32(central, static_cast<std::uint32_t>(payload.size()));
    put32(central, static_cast<std::uint32_t>(m.data.size()));
    put16(central, name_len);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += m.name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(members.size()));
  put16(out, static_cast<std::uint16_t>(members.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

}  // namespace doctowers::zip
