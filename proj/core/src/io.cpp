#include "annulus/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "annulus/errors.hpp"

namespace annulus::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string Table::render() const {
  std::string out;
  for (const auto& c : comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out += ',';
      out += r[i];
    }
    out += '\n';
  }
  return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (f == nullptr) throw IoError("cannot open " + tmp + " for writing");
  const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
  const bool flushed = std::fflush(f) == 0;
  const bool closed = std::fclose(f) == 0;
  if (written != content.size() || !flushed || !closed) {
    std::remove(tmp.c_str());
    throw IoError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move " + tmp + " into place at " + path);
  }
}

std::string encode_pgm(const Eigen::MatrixXd& gray) {
  if (gray.rows() == 0 || gray.cols() == 0)
    throw ConfigError("cannot encode an empty image");
  std::string out = "P5\n" + std::to_string(gray.cols()) + " " +
                    std::to_string(gray.rows()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(gray.size()));
  for (Eigen::Index i = 0; i < gray.rows(); ++i) {
    for (Eigen::Index j = 0; j < gray.cols(); ++j) {
      const double v = std::round(gray(i, j));
      const double clamped = std::fmin(255.0, std::fmax(0.0, v));
      out.push_back(static_cast<char>(static_cast<unsigned char>(clamped)));
    }
  }
  return out;
}

}  // namespace annulus::io
