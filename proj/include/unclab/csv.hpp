#ifndef UNCLAB_CSV_HPP
#define UNCLAB_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace unclab {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Simple CSV assembly: fixed header, rows of preformatted cells.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  const std::string& header_line() const { return header_line_; }
  std::string str() const;

 private:
  std::string header_line_;
  std::size_t columns_;
  std::vector<std::string> rows_;
};

/// Writes content through a temp file in the target directory plus rename,
/// so readers never observe a torn file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Collects artifacts and renames them into place only once all of them have
/// been staged; a failure before commit leaves nothing behind.
class ArtifactStage {
 public:
  ~ArtifactStage();
  void stage(const std::filesystem::path& path, const std::string& content);
  std::vector<std::filesystem::path> commit();

 private:
  struct Entry {
    std::filesystem::path final_path;
    std::filesystem::path temp_path;
  };
  std::vector<Entry> entries_;
  bool committed_ = false;
};

}  // namespace unclab

#endif  // UNCLAB_CSV_HPP
