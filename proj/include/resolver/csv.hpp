// Copyright 2026 The resolver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC 4180 CSV reading and writing. Reads transparently accept
// gzip-compressed files.

#ifndef RESOLVER_CSV_HPP_
#define RESOLVER_CSV_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace resolver {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by name, or -1.
  int Column(std::string_view name) const;
};

// Throws InvalidInput on ragged rows or unterminated quotes.
CsvTable ParseCsv(std::string_view text);

// Reads a plain or gzip file. Throws InvalidInput if it cannot be opened.
std::string ReadFileText(const std::string& path);
CsvTable ReadCsv(const std::string& path);

// Streams rows from a plain or gzip file without loading it whole. The
// first row is read as the header.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);
  ~CsvReader();
  CsvReader(const CsvReader&) = delete;
  CsvReader& operator=(const CsvReader&) = delete;

  const std::vector<std::string>& header() const { return header_; }
  // Fills row with the next non-blank record; false at end of file.
  // Throws InvalidInput on ragged rows.
  bool Next(std::vector<std::string>& row);
  // 1-based data row number of the last row returned.
  std::int64_t row_number() const { return row_number_; }

 private:
  bool ReadRecord(std::vector<std::string>& row);
  int Get();

  std::string path_;
  void* file_ = nullptr;
  std::string buffer_;
  size_t pos_ = 0;
  std::vector<std::string> header_;
  std::int64_t row_number_ = 0;
};

// Version string of the linked zlib.
const char* ZlibVersion();

// Quotes a field when it contains a comma, quote or newline.
std::string CsvEscape(std::string_view field);

// Buffered CSV output. Finish() gzips the file in place (appending ".gz")
// when it grew beyond the threshold and returns the final path.
class CsvWriter {
 public:
  static constexpr std::uint64_t kCompressThreshold = 100ull << 20;

  explicit CsvWriter(std::string path);
  ~CsvWriter();

  void WriteRow(const std::vector<std::string>& fields);
  // Direct access for callers writing fields that never need quoting.
  std::ostream& stream() { return out_; }
  std::string Finish(std::uint64_t threshold = kCompressThreshold);

 private:
  std::string path_;
  std::ofstream out_;
  bool finished_ = false;
};

// Compresses path to path + ".gz" and removes the original.
std::string GzipFile(const std::string& path);

}  // namespace resolver

#endif  // RESOLVER_CSV_HPP_
