#include "unclab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "unclab/errors.hpp"

namespace unclab {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc()) throw numeric_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw validation_error("CsvBuilder: header must be nonempty");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) header_line_ += ',';
    header_line_ += header[i];
  }
}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_) {
    throw validation_error("CsvBuilder: row has " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(columns_));
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  rows_.push_back(std::move(line));
}

std::string CsvBuilder::str() const {
  std::string out = header_line_;
  out += '\n';
  for (const auto& row : rows_) {
    out += row;
    out += '\n';
  }
  return out;
}

namespace {

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  return path.parent_path() / (path.filename().string() + ".tmp");
}

void write_stream(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw io_error("write failed for " + path.string());
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (!path.parent_path().empty()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + path.parent_path().string());
  }
  const auto temp = temp_sibling(path);
  write_stream(temp, content);
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw io_error("cannot rename " + temp.string() + " to " + path.string());
  }
}

ArtifactStage::~ArtifactStage() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& entry : entries_) std::filesystem::remove(entry.temp_path, ec);
}

void ArtifactStage::stage(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (!path.parent_path().empty()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + path.parent_path().string());
  }
  Entry entry{path, temp_sibling(path)};
  write_stream(entry.temp_path, content);
  entries_.push_back(std::move(entry));
}

std::vector<std::filesystem::path> ArtifactStage::commit() {
  std::vector<std::filesystem::path> written;
  for (const auto& entry : entries_) {
    std::error_code ec;
    std::filesystem::rename(entry.temp_path, entry.final_path, ec);
    if (ec) throw io_error("cannot rename " + entry.temp_path.string() + " to " +
                           entry.final_path.string());
    written.push_back(entry.final_path);
  }
  committed_ = true;
  return written;
}

}  // namespace unclab
