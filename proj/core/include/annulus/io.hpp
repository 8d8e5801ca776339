#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace annulus::io {

/// Round-trip-exact decimal rendering (17 significant digits, general form).
std::string format_double(double v);

/// Plain-text table with '#' metadata comments above the header row.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void comment(const std::string& text) { comments.push_back(text); }
  void row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
  std::string render() const;
};

/// Writes through a sibling temporary file and renames it into place, so a
/// crash never leaves a half-written file at the destination. Throws
/// IoError.
void write_text_atomic(const std::string& path, const std::string& content);

/// Binary 8-bit graymap. The matrix is laid out row 0 = first image row;
/// values are clamped to [0, 255] after rounding.
std::string encode_pgm(const Eigen::MatrixXd& gray);

}  // namespace annulus::io
