#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lscd {

// Line-oriented reader over plain or gzip-compressed files (gzip is
// sniffed from the magic bytes). Lines are validated as UTF-8.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Returns false at end of file. Throws std::runtime_error with the
  // line number on malformed UTF-8.
  bool next_line(std::string& line);
  std::int64_t line_number() const { return line_number_; }

 private:
  void* gz_ = nullptr;  // gzFile
  std::string path_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
  std::int64_t line_number_ = 0;
  bool fill();
};

// Writes lines to a file; gzip-compresses when the path ends in ".gz".
class LineWriter {
 public:
  explicit LineWriter(const std::string& path);
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;
  void write(const std::string& text);
  void write_line(const std::string& line) { write(line + "\n"); }
  void close();

 private:
  void* gz_ = nullptr;
  void* plain_ = nullptr;  // FILE*
  std::string path_;
};

bool is_valid_utf8(const std::string& s);

// Flat `key=value` config files; '#' starts a comment line.
std::map<std::string, std::string> read_key_value_file(const std::string& path);
void write_key_value_file(const std::string& path,
                          const std::map<std::string, std::string>& kv);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Fixed 6-decimal formatting used by all numeric text outputs.
std::string format_fixed(double x, int decimals = 6);

}  // namespace lscd
