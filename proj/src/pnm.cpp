#include "slickseg/pnm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slickseg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error(path + ": " + msg);
}

// Cursor over the raw file bytes; skips whitespace and '#' comments between
// header tokens and ASCII samples.
struct Cursor {
  const std::string& data;
  std::size_t pos = 0;
  const std::string& path;

  void skip_space_and_comments() {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  long long next_int(const char* what) {
    skip_space_and_comments();
    if (pos >= data.size())
      fail(path, std::string("truncated while reading ") + what +
                     " at byte offset " + std::to_string(pos));
    if (data[pos] < '0' || data[pos] > '9')
      fail(path, std::string("malformed header: expected ") + what +
                     " at byte offset " + std::to_string(pos));
    long long v = 0;
    while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
      v = v * 10 + (data[pos] - '0');
      if (v > 1'000'000'000) fail(path, std::string(what) + " is out of range");
      ++pos;
    }
    return v;
  }
};

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open file for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(path, "write failed");
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  const std::string data = read_all(path);
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    fail(path, "not a P2/P5 portable graymap");
  const bool binary = data[1] == '5';
  Cursor cur{data, 2, path};

  GrayImage img;
  img.width = static_cast<int>(cur.next_int("width"));
  img.height = static_cast<int>(cur.next_int("height"));
  img.maxval = static_cast<int>(cur.next_int("maxval"));
  if (img.width <= 0 || img.height <= 0)
    fail(path, "image dimensions must be positive");
  if (img.maxval <= 0 || img.maxval > 65535)
    fail(path, "maxval must be in [1, 65535], got " +
                   std::to_string(img.maxval));

  const std::size_t count =
      std::size_t(img.width) * std::size_t(img.height);
  img.pixels.resize(count);

  if (binary) {
    if (cur.pos >= data.size())
      fail(path, "truncated before pixel data at byte offset " +
                     std::to_string(cur.pos));
    ++cur.pos;  // single whitespace byte after maxval
    const int bytes_per = img.maxval > 255 ? 2 : 1;
    const std::size_t need = count * std::size_t(bytes_per);
    if (data.size() - cur.pos < need)
      fail(path, "truncated pixel data at byte offset " +
                     std::to_string(data.size()) + " (need " +
                     std::to_string(cur.pos + need) + " bytes)");
    for (std::size_t i = 0; i < count; ++i) {
      std::uint16_t v;
      if (bytes_per == 2) {
        v = std::uint16_t((std::uint8_t(data[cur.pos]) << 8) |
                          std::uint8_t(data[cur.pos + 1]));
        cur.pos += 2;
      } else {
        v = std::uint8_t(data[cur.pos]);
        ++cur.pos;
      }
      if (v > img.maxval)
        fail(path, "sample " + std::to_string(v) + " exceeds maxval " +
                       std::to_string(img.maxval));
      img.pixels[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long long v = cur.next_int("pixel sample");
      if (v > img.maxval)
        fail(path, "sample " + std::to_string(v) + " exceeds maxval " +
                       std::to_string(img.maxval));
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
  if (img.width <= 0 || img.height <= 0)
    fail(path, "refusing to write a zero-size image");
  if (img.maxval <= 0 || img.maxval > 65535)
    fail(path, "maxval must be in [1, 65535]");
  const std::size_t count = std::size_t(img.width) * std::size_t(img.height);
  if (img.pixels.size() != count)
    fail(path, "pixel buffer size does not match the dimensions");
  std::string out = "P5\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n" +
                    std::to_string(img.maxval) + "\n";
  out.reserve(out.size() + count * (img.maxval > 255 ? 2 : 1));
  for (std::uint16_t v : img.pixels) {
    if (v > img.maxval)
      fail(path, "sample " + std::to_string(v) + " exceeds maxval");
    if (img.maxval > 255) {
      out += char(v >> 8);
      out += char(v & 0xFF);
    } else {
      out += char(v & 0xFF);
    }
  }
  write_all(path, out);
}

void write_mask(const RealField& mask, const std::string& path) {
  GrayImage img;
  img.width = static_cast<int>(mask.cols());
  img.height = static_cast<int>(mask.rows());
  img.maxval = 255;
  img.pixels.reserve(std::size_t(mask.size()));
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask(i) != 0.0 && mask(i) != 1.0)
      fail(path, "mask field is not binary");
    img.pixels.push_back(mask(i) != 0.0 ? 255 : 0);
  }
  write_pgm(img, path);
}

RealField to_field(const GrayImage& img) {
  RealField f(img.height, img.width);
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = Real(img.pixels[std::size_t(i)]);
  return f;
}

void write_overlay(const RealField& intensity,
                   const std::vector<std::pair<int, int>>& contour,
                   const std::string& path) {
  const int w = static_cast<int>(intensity.cols());
  const int h = static_cast<int>(intensity.rows());
  if (w <= 0 || h <= 0) fail(path, "refusing to write a zero-size overlay");
  const Real top = intensity.maxCoeff();
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) +
                    "\n255\n";
  out.reserve(out.size() + std::size_t(w) * std::size_t(h) * 3);
  for (Eigen::Index i = 0; i < intensity.size(); ++i) {
    const Real g = top > 0 ? std::round(255.0 * intensity(i) / top) : 0.0;
    const char c = char(static_cast<int>(std::min<Real>(255.0, std::max<Real>(0.0, g))));
    out += c;
    out += c;
    out += c;
  }
  const std::size_t header = out.size() - std::size_t(w) * std::size_t(h) * 3;
  for (const auto& [x, y] : contour) {
    if (x < 0 || x >= w || y < 0 || y >= h)
      fail(path, "contour pixel (" + std::to_string(x) + "," +
                     std::to_string(y) + ") is outside the image");
    const std::size_t at = header + 3 * (std::size_t(y) * std::size_t(w) +
                                         std::size_t(x));
    out[at] = char(255);
    out[at + 1] = 0;
    out[at + 2] = 0;
  }
  write_all(path, out);
}

}  // namespace slickseg
