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

#include "resolver/csv.hpp"

#include <zlib.h>

#include <cstdio>
#include <filesystem>

#include "resolver/common.hpp"

namespace resolver {

int CsvTable::Column(std::string_view name) const {
  for (size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return static_cast<int>(k);
  }
  return -1;
}

CsvTable ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  size_t pos = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;  // UTF-8 BOM

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) lines.push_back(std::move(row));
    row.clear();
  };

  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw InvalidInput("unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) end_row();

  CsvTable table;
  if (lines.empty()) return table;
  table.header = std::move(lines[0]);
  for (size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].size() != table.header.size()) {
      throw InvalidInput("CSV row " + std::to_string(k) + " has " +
                         std::to_string(lines[k].size()) + " fields, expected " +
                         std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(lines[k]));
  }
  return table;
}

std::string ReadFileText(const std::string& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw InvalidInput("cannot open '" + path + "'");
  std::string text;
  char buffer[1 << 16];
  int got;
  while ((got = gzread(file, buffer, sizeof(buffer))) > 0) {
    text.append(buffer, got);
  }
  const bool failed = got < 0;
  gzclose(file);
  if (failed) throw InvalidInput("cannot read '" + path + "'");
  return text;
}

CsvReader::CsvReader(const std::string& path) : path_(path) {
  std::string actual = path;
  if (!std::filesystem::exists(path) &&
      std::filesystem::exists(path + ".gz")) {
    actual = path + ".gz";
  }
  file_ = gzopen(actual.c_str(), "rb");
  if (file_ == nullptr) throw InvalidInput("cannot open '" + path + "'");
  if (!ReadRecord(header_)) header_.clear();
}

CsvReader::~CsvReader() {
  if (file_ != nullptr) gzclose(static_cast<gzFile>(file_));
}

int CsvReader::Get() {
  if (pos_ == buffer_.size()) {
    buffer_.resize(1 << 16);
    const int got = gzread(static_cast<gzFile>(file_), buffer_.data(),
                           static_cast<unsigned>(buffer_.size()));
    if (got < 0) throw InvalidInput("cannot read '" + path_ + "'");
    buffer_.resize(got);
    pos_ = 0;
    if (got == 0) return -1;
  }
  return static_cast<unsigned char>(buffer_[pos_++]);
}

bool CsvReader::ReadRecord(std::vector<std::string>& row) {
  while (true) {
    row.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = Get()) != -1) {
      any = true;
      if (quoted) {
        if (c == '"') {
          const int next = Get();
          if (next == '"') {
            field.push_back('"');
            continue;
          }
          quoted = false;
          if (next == -1) break;
          c = next;
        } else {
          field.push_back(static_cast<char>(c));
          continue;
        }
      }
      if (c == '"' && field.empty()) {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (c == '\n') {
        break;
      } else if (c != '\r') {
        field.push_back(static_cast<char>(c));
      }
    }
    if (quoted) throw InvalidInput("unterminated quoted CSV field");
    if (!any) return false;
    row.push_back(std::move(field));
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (header_.empty() && row_number_ == 0 && !row[0].empty() &&
        row[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
      row[0].erase(0, 3);
    }
    return true;
  }
}

bool CsvReader::Next(std::vector<std::string>& row) {
  if (!ReadRecord(row)) return false;
  ++row_number_;
  if (row.size() != header_.size()) {
    throw InvalidInput("'" + path_ + "' row " + std::to_string(row_number_) +
                       " has " + std::to_string(row.size()) +
                       " fields, expected " + std::to_string(header_.size()));
  }
  return true;
}

const char* ZlibVersion() { return zlibVersion(); }

CsvTable ReadCsv(const std::string& path) {
  if (!std::filesystem::exists(path) &&
      std::filesystem::exists(path + ".gz")) {
    return ParseCsv(ReadFileText(path + ".gz"));
  }
  return ParseCsv(ReadFileText(path));
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw InvalidInput("cannot write '" + path_ + "'");
}

CsvWriter::~CsvWriter() {
  if (!finished_) out_.close();
}

void CsvWriter::WriteRow(const std::vector<std::string>& fields) {
  for (size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out_.put(',');
    out_ << CsvEscape(fields[k]);
  }
  out_.put('\n');
}

std::string CsvWriter::Finish(std::uint64_t threshold) {
  finished_ = true;
  out_.close();
  if (!out_) throw InvalidInput("failed writing '" + path_ + "'");
  if (std::filesystem::file_size(path_) > threshold) return GzipFile(path_);
  return path_;
}

std::string GzipFile(const std::string& path) {
  const std::string target = path + ".gz";
  std::FILE* in = std::fopen(path.c_str(), "rb");
  if (in == nullptr) throw InvalidInput("cannot open '" + path + "'");
  gzFile out = gzopen(target.c_str(), "wb6");
  if (out == nullptr) {
    std::fclose(in);
    throw InvalidInput("cannot write '" + target + "'");
  }
  char buffer[1 << 16];
  size_t got;
  bool ok = true;
  while ((got = std::fread(buffer, 1, sizeof(buffer), in)) > 0) {
    if (gzwrite(out, buffer, static_cast<unsigned>(got)) !=
        static_cast<int>(got)) {
      ok = false;
      break;
    }
  }
  std::fclose(in);
  if (gzclose(out) != Z_OK) ok = false;
  if (!ok) throw InvalidInput("failed compressing '" + path + "'");
  std::filesystem::remove(path);
  return target;
}

}  // namespace resolver
