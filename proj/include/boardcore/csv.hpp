#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

namespace boardcore {

// A parsed CSV file. `line` holds the 1-based line each data row starts on,
// for error messages.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> line;

    // Index of a required header column; throws ParseError if absent.
    size_t col(const std::string& name) const;
};

// UTF-8, comma separated, double-quote escaping, header row required.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv_text(const std::string& text, const std::string& path_for_errors);

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& fields);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace boardcore
