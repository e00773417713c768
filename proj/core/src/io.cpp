#include "sdot1/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sdot1 {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

Bounds default_bounds(int nx, int ny) {
  const double side = 1.0 / std::max(nx, ny);
  return {0.0, 0.0, nx * side, ny * side};
}

// Skips whitespace and '#' comment lines in a PGM header.
int next_pgm_int(std::istream& in, const std::string& path) {
  while (true) {
    int c = in.peek();
    if (c == EOF) fail(path, "truncated PGM header");
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int value;
  if (!(in >> value)) fail(path, "malformed PGM header");
  return value;
}

double parse_double(const std::string& token, const std::string& path, size_t line_no) {
  double value;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    fail(path, "line " + std::to_string(line_no) + ": cannot parse number '" + token + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding spaces
    size_t a = field.find_first_not_of(" \t\r");
    size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

PgmImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") fail(path, "not a P2/P5 PGM file");
  PgmImage img;
  img.width = next_pgm_int(in, path);
  img.height = next_pgm_int(in, path);
  img.max_value = next_pgm_int(in, path);
  if (img.width <= 0 || img.height <= 0) fail(path, "invalid PGM dimensions");
  if (img.max_value <= 0 || img.max_value > 65535) fail(path, "invalid PGM max value");
  const size_t count = static_cast<size_t>(img.width) * img.height;
  img.pixels.resize(count);
  if (magic == "P2") {
    for (size_t i = 0; i < count; ++i) {
      int v = next_pgm_int(in, path);
      if (v < 0 || v > img.max_value) fail(path, "pixel value out of range");
      img.pixels[i] = static_cast<uint16_t>(v);
    }
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = img.max_value > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) fail(path, "truncated PGM data");
    for (size_t i = 0; i < count; ++i) {
      img.pixels[i] = bytes == 1
          ? raw[i]
          : static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
  }
  return img;
}

void write_pgm(const PgmImage& image, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  const size_t count = static_cast<size_t>(image.width) * image.height;
  if (binary) {
    out << "P5\n" << image.width << " " << image.height << "\n" << image.max_value << "\n";
    const int bytes = image.max_value > 255 ? 2 : 1;
    std::vector<unsigned char> raw;
    raw.reserve(count * bytes);
    for (size_t i = 0; i < count; ++i) {
      if (bytes == 2) raw.push_back(static_cast<unsigned char>(image.pixels[i] >> 8));
      raw.push_back(static_cast<unsigned char>(image.pixels[i] & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  } else {
    out << "P2\n" << image.width << " " << image.height << "\n" << image.max_value << "\n";
    for (int r = 0; r < image.height; ++r) {
      for (int c = 0; c < image.width; ++c) {
        out << image.pixels[r * image.width + c] << (c + 1 == image.width ? '\n' : ' ');
      }
    }
  }
}

DensityGrid load_density_pgm(const std::string& path, std::optional<Bounds> bounds) {
  const PgmImage img = load_pgm(path);
  const Bounds b = bounds ? *bounds : default_bounds(img.width, img.height);
  std::vector<double> values(img.pixels.begin(), img.pixels.end());
  return DensityGrid(b.x_min, b.y_min, b.x_max, b.y_max, img.width, img.height,
                     std::move(values));
}

DensityGrid load_density_csv(const std::string& path, std::optional<Bounds> bounds) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::vector<double> values;
  int nx = -1;
  int ny = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (nx < 0) {
      nx = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != nx) {
      fail(path, "line " + std::to_string(line_no) + ": ragged row");
    }
    for (const auto& f : fields) values.push_back(parse_double(f, path, line_no));
    ++ny;
  }
  if (nx <= 0 || ny <= 0) fail(path, "empty grid");
  Bounds b;
  if (bounds) {
    b = *bounds;
  } else {
    std::ifstream side(path + ".json");
    if (side) {
      json j = json::parse(side);
      b = {j.at("x_min").get<double>(), j.at("y_min").get<double>(),
           j.at("x_max").get<double>(), j.at("y_max").get<double>()};
    } else {
      b = default_bounds(nx, ny);
    }
  }
  return DensityGrid(b.x_min, b.y_min, b.x_max, b.y_max, nx, ny, std::move(values));
}

DensityGrid load_density(const std::string& path, std::optional<Bounds> bounds) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(path, "cannot open file");
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
    return load_density_pgm(path, bounds);
  }
  return load_density_csv(path, bounds);
}

void write_density_csv(const DensityGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  for (int r = 0; r < grid.ny(); ++r) {
    for (int c = 0; c < grid.nx(); ++c) {
      out << format_double(grid.value(c, r)) << (c + 1 == grid.nx() ? '\n' : ',');
    }
  }
  json sidecar = {
      {"x_min", grid.x_min()}, {"y_min", grid.y_min()},
      {"x_max", grid.x_max()}, {"y_max", grid.y_max()},
  };
  std::ofstream side(path + ".json");
  if (!side) fail(path + ".json", "cannot open file for writing");
  side << sidecar.dump(2) << "\n";
}

DiscreteMeasure load_discrete_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "x" || header[1] != "y" || header[2] != "mass") {
    fail(path, "expected header 'x,y,mass'");
  }
  std::vector<Point> points;
  std::vector<double> masses;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      fail(path, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    points.push_back({parse_double(fields[0], path, line_no),
                      parse_double(fields[1], path, line_no)});
    masses.push_back(parse_double(fields[2], path, line_no));
  }
  return DiscreteMeasure(std::move(points), std::move(masses));
}

void write_discrete_csv(const DiscreteMeasure& nu, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  out << "x,y,mass\n";
  for (int j = 0; j < nu.size(); ++j) {
    out << format_double(nu.point(j).x) << "," << format_double(nu.point(j).y)
        << "," << format_double(nu.mass(j)) << "\n";
  }
}

std::vector<Point> load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "x" || header[1] != "y") {
    fail(path, "expected header starting with 'x,y'");
  }
  std::vector<Point> points;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      fail(path, "line " + std::to_string(line_no) + ": expected at least 2 fields");
    }
    points.push_back({parse_double(fields[0], path, line_no),
                      parse_double(fields[1], path, line_no)});
  }
  return points;
}

}  // namespace sdot1
