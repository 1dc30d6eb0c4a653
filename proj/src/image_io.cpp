#include "stereokit/image_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "stereokit/errors.hpp"

namespace stereo {

namespace {

/// Header scanner for PNM: skips whitespace and '#' comments between tokens
/// and keeps a line count for error messages.
struct PnmScanner {
  std::ifstream& in;
  int line = 1;

  int get() {
    const int c = in.get();
    if (c == '\n') ++line;
    return c;
  }

  void skip_separators() {
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        while (c != '\n' && c != EOF) c = get();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else {
        return;
      }
    }
  }

  long next_number() {
    skip_separators();
    long value = 0;
    bool any = false;
    for (;;) {
      const int c = in.peek();
      if (c < '0' || c > '9') break;
      get();
      value = value * 10 + (c - '0');
      any = true;
      if (value > 1'000'000'000L)
        throw ParseError(line, "header number out of range");
    }
    if (!any) throw ParseError(line, "expected a number in the PGM header");
    return value;
  }
};

struct PgmHeader {
  int width;
  int height;
  long maxval;
  int data_line;
};

PgmHeader read_pgm_header(std::ifstream& in, const std::string& path) {
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  PnmScanner scan{in};
  if (scan.get() != 'P' || scan.get() != '5')
    throw ParseError(scan.line, "not a binary PGM (P5) file");
  PgmHeader h;
  h.width = static_cast<int>(scan.next_number());
  h.height = static_cast<int>(scan.next_number());
  h.maxval = scan.next_number();
  // Exactly one whitespace byte separates the header from the samples.
  const int sep = scan.get();
  if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
    throw ParseError(scan.line, "missing separator before sample data");
  if (h.width < 1 || h.height < 1)
    throw ParseError(scan.line, "image dimensions must be positive");
  h.data_line = scan.line;
  return h;
}

}  // namespace

GrayImage read_pgm8(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  const PgmHeader h = read_pgm_header(in, path);
  if (h.maxval < 1 || h.maxval > 255)
    throw ParseError(h.data_line,
                     "expected an 8-bit image (maxval <= 255), got maxval " +
                         std::to_string(h.maxval));
  GrayImage img = GrayImage::create(h.width, h.height);
  in.read(reinterpret_cast<char*>(img.samples.data()),
          static_cast<std::streamsize>(img.samples.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.samples.size()))
    throw ParseError(h.data_line, "truncated sample data in '" + path + "'");
  return img;
}

void write_pgm8(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

DisparityImage read_disparity(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  const PgmHeader h = read_pgm_header(in, path);
  if (h.maxval != 65535)
    throw ParseError(h.data_line,
                     "disparity files are 16-bit PGM (maxval 65535), got "
                     "maxval " +
                         std::to_string(h.maxval));
  const std::size_t n =
      static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  std::vector<std::uint8_t> raw(n * 2);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw ParseError(h.data_line, "truncated sample data in '" + path + "'");

  DisparityImage disp = DisparityImage::create(h.width, h.height);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned code = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    if (code != 0) disp.values[i] = static_cast<float>(code) / 256.0f;
  }
  return disp;
}

void write_disparity(const std::string& path, const DisparityImage& disp) {
  const std::size_t n = disp.values.size();
  std::vector<std::uint8_t> raw(n * 2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const float d = disp.values[i];
    if (d == DisparityImage::kInvalid) continue;
    const long code = std::lround(static_cast<double>(d) * 256.0);
    if (code > 65535)
      throw DisparityOverflow("disparity " + std::to_string(d) +
                              " exceeds the representable maximum 255.996");
    if (code <= 0) continue;  // quantizes to the invalid marker
    raw[2 * i] = static_cast<std::uint8_t>(code >> 8);
    raw[2 * i + 1] = static_cast<std::uint8_t>(code & 0xFF);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "P5\n" << disp.width << " " << disp.height << "\n65535\n";
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace stereo
