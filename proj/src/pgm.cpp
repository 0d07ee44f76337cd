#include "railedge/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "railedge/errors.hpp"

namespace railedge {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

unsigned long read_header_number(std::istream& in, const char* field) {
  skip_separators(in);
  std::string token;
  while (in.peek() != EOF && std::isdigit(in.peek())) token.push_back(static_cast<char>(in.get()));
  if (token.empty() || token.size() > 9) {
    throw IoError(std::string("PGM: malformed ") + field);
  }
  return std::stoul(token);
}

}  // namespace

MaskGrid read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    throw IoError("PGM: expected magic number P2 or P5");
  }
  const bool binary = magic[1] == '5';
  const auto width = read_header_number(in, "width");
  const auto height = read_header_number(in, "height");
  const auto maxval = read_header_number(in, "maxval");
  if (width == 0 || height == 0) throw IoError("PGM: dimensions must be positive");
  if (width * height > (1ul << 28)) throw IoError("PGM: image too large");
  if (maxval == 0 || maxval > 255) throw IoError("PGM: maxval must be in [1, 255]");
  const double scale = static_cast<double>(maxval);

  std::vector<double> values(height * width);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (!std::isspace(in.get())) throw IoError("PGM: missing separator before raster");
    std::string raster(values.size(), '\0');
    in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
      throw IoError("PGM: truncated raster");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto sample = static_cast<unsigned char>(raster[i]);
      if (sample > maxval) throw IoError("PGM: sample exceeds maxval");
      values[i] = sample / scale;
    }
  } else {
    for (double& v : values) {
      const auto sample = read_header_number(in, "sample");
      if (sample > maxval) throw IoError("PGM: sample exceeds maxval");
      v = static_cast<double>(sample) / scale;
    }
  }
  return MaskGrid(height, width, std::move(values));
}

MaskGrid read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return read_pgm(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const MaskGrid& grid, PgmFormat format) {
  out << (format == PgmFormat::Binary ? "P5" : "P2") << '\n'
      << grid.width() << ' ' << grid.height() << '\n'
      << 255 << '\n';
  auto quantize = [](double v) {
    return static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  if (format == PgmFormat::Binary) {
    std::string raster(grid.size(), '\0');
    const auto values = grid.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      raster[i] = static_cast<char>(quantize(values[i]));
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  } else {
    for (std::size_t r = 0; r < grid.height(); ++r) {
      for (std::size_t c = 0; c < grid.width(); ++c) {
        out << (c == 0 ? "" : " ") << quantize(grid(r, c));
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("PGM: write failed");
}

void write_pgm(const std::filesystem::path& path, const MaskGrid& grid, PgmFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_pgm(out, grid, format);
}

}  // namespace railedge
