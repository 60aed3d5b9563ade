#include "srlr/csv.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srlr {

namespace {

// Splits one CSV record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t row_1based) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted)
    throw std::invalid_argument("csv parse error: unterminated quote at row " +
                             std::to_string(row_1based));
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, std::size_t row_1based, std::size_t col_1based) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("csv parse error: non-numeric cell '" + cell + "' at row " +
                             std::to_string(row_1based) + ", column " +
                             std::to_string(col_1based));
  return value;
}

bool is_index_string(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& response_column, bool has_header,
                 std::vector<std::string>& covariate_names, std::string& response_name) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("could not open '" + path + "'");

  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_record(line, row);
    if (row == 1 && has_header) {
      for (auto& f : fields) header.push_back(trim(f));
      width = header.size();
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw std::invalid_argument("csv parse error: row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " cells, expected " +
                               std::to_string(width));
    std::vector<double> values;
    values.reserve(width);
    for (std::size_t c = 0; c < fields.size(); ++c)
      values.push_back(parse_cell(fields[c], row, c + 1));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::invalid_argument("csv parse error: '" + path + "' has no data rows");
  if (width < 2)
    throw std::invalid_argument("csv parse error: need at least one covariate besides the response");

  if (header.empty())
    for (std::size_t c = 0; c < width; ++c) header.push_back("x" + std::to_string(c));

  std::size_t response_idx = width;  // sentinel
  if (has_header) {
    for (std::size_t c = 0; c < width; ++c)
      if (header[c] == response_column) response_idx = c;
  }
  if (response_idx == width && is_index_string(response_column)) {
    const std::size_t idx = std::stoul(response_column);
    if (idx < width) response_idx = idx;
  }
  if (response_idx == width) {
    std::string available;
    for (std::size_t c = 0; c < width; ++c) available += (c ? ", " : "") + header[c];
    throw std::invalid_argument("response column '" + response_column +
                             "' not found; available columns: " + available);
  }

  const std::size_t n = rows.size(), p = width - 1;
  Eigen::VectorXd y(static_cast<Index>(n));
  Eigen::MatrixXd X(static_cast<Index>(n), static_cast<Index>(p));
  covariate_names.clear();
  for (std::size_t c = 0; c < width; ++c)
    if (c != response_idx) covariate_names.push_back(header[c]);
  response_name = header[response_idx];
  for (std::size_t i = 0; i < n; ++i) {
    y[static_cast<Index>(i)] = rows[i][response_idx];
    std::size_t k = 0;
    for (std::size_t c = 0; c < width; ++c)
      if (c != response_idx) X(static_cast<Index>(i), static_cast<Index>(k++)) = rows[i][c];
  }
  return Dataset::from_raw(std::move(X), std::move(y));
}

Dataset load_csv(const std::string& path, const std::string& response_column, bool has_header) {
  std::vector<std::string> names;
  std::string response_name;
  return load_csv(path, response_column, has_header, names, response_name);
}

}  // namespace srlr
