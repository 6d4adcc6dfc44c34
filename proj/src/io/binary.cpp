#include "mosgnn/io/binary.hpp"

#include <fstream>
#include <iterator>

namespace mosgnn::io {

void ByteWriter::str(std::string_view s) {
  if (s.size() > UINT32_MAX) throw DataError("string too long to encode");
  u32(static_cast<std::uint32_t>(s.size()));
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteReader::fail(const std::string& what) const {
  throw FormatError(context_ + ": " + what + " at byte offset " + std::to_string(pos_));
}

void ByteReader::require(std::uint64_t count, std::uint64_t width, const char* what) const {
  if (width != 0 && count > remaining() / width) {
    fail(std::string("truncated ") + what + " (need " + std::to_string(count) + "x" +
         std::to_string(width) + " bytes, " + std::to_string(remaining()) + " left)");
  }
}

void ByteReader::expect_magic(std::string_view m) {
  require(1, m.size(), "magic");
  if (std::memcmp(data_.data() + pos_, m.data(), m.size()) != 0) {
    fail("bad magic, expected '" + std::string(m) + "'");
  }
  pos_ += m.size();
}

std::vector<double> ByteReader::f64s(std::uint64_t count) {
  require(count, 8, "float64 array");
  std::vector<double> out(count);
  for (auto& v : out) v = f64();
  return out;
}

std::string ByteReader::str() {
  const std::uint32_t len = u32();
  require(len, 1, "string");
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
  pos_ += len;
  return s;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) fail(std::to_string(remaining()) + " trailing bytes");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace mosgnn::io
