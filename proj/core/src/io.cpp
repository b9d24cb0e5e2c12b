#include "lscd/io.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lscd {

namespace {
constexpr std::size_t kChunk = 1 << 16;
}

LineReader::LineReader(const std::string& path) : path_(path) {
  // gzopen reads plain files transparently; the gzip magic is sniffed.
  gz_ = gzopen(path.c_str(), "rb");
  if (!gz_) throw std::runtime_error("cannot open file: " + path);
}

LineReader::~LineReader() {
  if (gz_) gzclose(static_cast<gzFile>(gz_));
}

bool LineReader::fill() {
  char chunk[kChunk];
  int n = gzread(static_cast<gzFile>(gz_), chunk, kChunk);
  if (n < 0) throw std::runtime_error("read error in " + path_);
  if (n == 0) {
    eof_ = true;
    return false;
  }
  buffer_.append(chunk, static_cast<std::size_t>(n));
  return true;
}

bool LineReader::next_line(std::string& line) {
  std::size_t nl;
  while ((nl = buffer_.find('\n', pos_)) == std::string::npos) {
    if (eof_ || !fill()) break;
  }
  if (nl == std::string::npos) {
    if (pos_ >= buffer_.size()) return false;
    line.assign(buffer_, pos_, buffer_.size() - pos_);
    pos_ = buffer_.size();
  } else {
    line.assign(buffer_, pos_, nl - pos_);
    pos_ = nl + 1;
  }
  if (pos_ > kChunk) {
    buffer_.erase(0, pos_);
    pos_ = 0;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_number_;
  if (!is_valid_utf8(line)) {
    throw std::runtime_error(path_ + ": invalid UTF-8 at line " +
                             std::to_string(line_number_));
  }
  return true;
}

LineWriter::LineWriter(const std::string& path) : path_(path) {
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    gz_ = gzopen(path.c_str(), "wb");
    if (!gz_) throw std::runtime_error("cannot open file for writing: " + path);
  } else {
    plain_ = std::fopen(path.c_str(), "wb");
    if (!plain_) throw std::runtime_error("cannot open file for writing: " + path);
  }
}

LineWriter::~LineWriter() { close(); }

void LineWriter::write(const std::string& text) {
  if (gz_) {
    if (gzwrite(static_cast<gzFile>(gz_), text.data(),
                static_cast<unsigned>(text.size())) !=
        static_cast<int>(text.size())) {
      throw std::runtime_error("write error in " + path_);
    }
  } else if (plain_) {
    if (std::fwrite(text.data(), 1, text.size(), static_cast<FILE*>(plain_)) !=
        text.size()) {
      throw std::runtime_error("write error in " + path_);
    }
  }
}

void LineWriter::close() {
  if (gz_) {
    gzclose(static_cast<gzFile>(gz_));
    gz_ = nullptr;
  }
  if (plain_) {
    std::fclose(static_cast<FILE*>(plain_));
    plain_ = nullptr;
  }
}

bool is_valid_utf8(const std::string& s) {
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    std::size_t len;
    unsigned cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t j = 1; j < len; ++j) {
      if ((p[i + j] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + j] & 0x3F);
    }
    // overlongs, surrogates, out of range
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) return false;
    if (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) return false;
    i += len;
  }
  return true;
}

std::map<std::string, std::string> read_key_value_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ": expected key=value, got: " + line);
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void write_key_value_file(const std::string& path,
                          const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

namespace {

std::string digest_hex(EVP_MD_CTX* ctx) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  std::string out = digest_hex(ctx);
  EVP_MD_CTX_free(ctx);
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char chunk[kChunk];
  while (in) {
    in.read(chunk, sizeof(chunk));
    EVP_DigestUpdate(ctx, chunk, static_cast<std::size_t>(in.gcount()));
  }
  std::string out = digest_hex(ctx);
  EVP_MD_CTX_free(ctx);
  return out;
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

}  // namespace lscd
