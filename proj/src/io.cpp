#include "neuroseg/io.hpp"
#include "neuroseg/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace neuroseg::io {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode), &std::fclose);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return f;
}

struct PngHeader {
  png_uint_32 width = 0, height = 0;
  int channels = 0, bit_depth = 0;
};

// libpng reports errors through longjmp; only trivially destructible locals
// live past setjmp here.
bool decode_png(std::FILE* file, std::vector<std::uint16_t>& samples, PngHeader& header) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  png_bytep volatile raw = nullptr;
  if (setjmp(png_jmpbuf(png))) {
    if (raw) png_free(png, raw);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  header.width = png_get_image_width(png, info);
  header.height = png_get_image_height(png, info);
  header.channels = png_get_channels(png, info);
  header.bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  raw = static_cast<png_bytep>(png_malloc(png, rowbytes * header.height));
  for (png_uint_32 y = 0; y < header.height; ++y) png_read_row(png, raw + y * rowbytes, nullptr);
  png_read_end(png, nullptr);

  const std::size_t n = static_cast<std::size_t>(header.width) * header.height * header.channels;
  samples.resize(n);
  if (header.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  } else {
    for (std::size_t i = 0; i < n; ++i) samples[i] = raw[i];
  }
  png_free(png, raw);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_png(std::FILE* file, const std::vector<png_byte>& bytes, const PngImage& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_compression_level(png, 6);
  int color = PNG_COLOR_TYPE_GRAY;
  if (image.channels == 2) color = PNG_COLOR_TYPE_GRAY_ALPHA;
  if (image.channels == 3) color = PNG_COLOR_TYPE_RGB;
  if (image.channels == 4) color = PNG_COLOR_TYPE_RGBA;
  png_set_IHDR(png, info, image.width, image.height, image.bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes = static_cast<std::size_t>(image.width) * image.channels * (image.bit_depth / 8);
  for (int y = 0; y < image.height; ++y) png_write_row(png, bytes.data() + y * rowbytes);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

PngImage make_image(int width, int height, int channels, int bit_depth) {
  PngImage img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.bit_depth = bit_depth;
  img.samples.assign(static_cast<std::size_t>(width) * height * channels, 0);
  return img;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& s, int& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

PngImage read_png(const fs::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorCode::BadFormat, path.string() + " is not a PNG file");
  }
  std::rewind(file.get());
  PngImage img;
  PngHeader header;
  if (!decode_png(file.get(), img.samples, header)) {
    throw Error(ErrorCode::BadFormat, "failed to decode " + path.string());
  }
  img.width = static_cast<int>(header.width);
  img.height = static_cast<int>(header.height);
  img.channels = header.channels;
  img.bit_depth = header.bit_depth;
  return img;
}

void write_png(const fs::path& path, const PngImage& image) {
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw Error(ErrorCode::InvalidArgument, "only 8- and 16-bit PNGs are written");
  }
  if (image.channels < 1 || image.channels > 4 ||
      image.samples.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw Error(ErrorCode::InvalidArgument, "inconsistent image buffer");
  }
  std::vector<png_byte> bytes;
  if (image.bit_depth == 16) {
    bytes.resize(image.samples.size() * 2);
    for (std::size_t i = 0; i < image.samples.size(); ++i) {
      bytes[2 * i] = static_cast<png_byte>(image.samples[i] >> 8);
      bytes[2 * i + 1] = static_cast<png_byte>(image.samples[i] & 0xff);
    }
  } else {
    bytes.resize(image.samples.size());
    for (std::size_t i = 0; i < image.samples.size(); ++i) {
      if (image.samples[i] > 255) throw Error(ErrorCode::InvalidArgument, "8-bit sample out of range");
      bytes[i] = static_cast<png_byte>(image.samples[i]);
    }
  }
  FilePtr file = open_file(path, "wb");
  if (!encode_png(file.get(), bytes, image)) throw Error(ErrorCode::Io, "failed to encode " + path.string());
  if (std::fflush(file.get()) != 0) throw Error(ErrorCode::Io, "failed to write " + path.string());
}

PngImage crop(const PngImage& image, const TileRect& r) {
  if (r.x0 < 0 || r.y0 < 0 || r.x0 + r.width > image.width || r.y0 + r.height > image.height) {
    throw Error(ErrorCode::OutOfBounds, "crop rectangle outside the image");
  }
  PngImage out = make_image(r.width, r.height, image.channels, image.bit_depth);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      for (int c = 0; c < image.channels; ++c)
        out.samples[(static_cast<std::size_t>(y) * r.width + x) * image.channels + c] =
            image.at(r.x0 + x, r.y0 + y, c);
  return out;
}

ProbabilityMap<double> read_probability_map(const fs::path& path) {
  const PngImage img = read_png(path);
  if (img.channels != 3) {
    throw Error(ErrorCode::NotThreeChannel,
                path.string() + " has " + std::to_string(img.channels) + " channel(s), expected RGB");
  }
  if (img.bit_depth != 8) throw Error(ErrorCode::BadFormat, path.string() + " is not 8-bit");
  ProbabilityMap<double> pm(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double sum = 0;
      for (int c = 0; c < 3; ++c) {
        const double v = img.at(x, y, c) / 255.0;
        pm.channels[c](y, x) = v;
        sum += v;
      }
      if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
        throw Error(ErrorCode::BadFormat, path.string() + ": channels at (" + std::to_string(x) + "," +
                                              std::to_string(y) + ") sum to " + std::to_string(sum));
      }
    }
  }
  normalize(pm);
  return pm;
}

void write_probability_map(const fs::path& path, const ProbabilityMap<double>& pm) {
  PngImage img = make_image(pm.width(), pm.height(), 3, 8);
  for (int y = 0; y < pm.height(); ++y) {
    for (int x = 0; x < pm.width(); ++x) {
      std::array<double, 3> scaled;
      double sum = 0;
      for (int c = 0; c < 3; ++c) sum += pm.channels[c](y, x);
      if (!(sum > 0)) throw Error(ErrorCode::InvalidArgument, "pixel with zero probability mass");
      std::array<int, 3> q;
      int total = 0;
      for (int c = 0; c < 3; ++c) {
        scaled[c] = pm.channels[c](y, x) / sum * 255.0;
        q[c] = static_cast<int>(std::floor(scaled[c]));
        total += q[c];
      }
      std::array<int, 3> order{0, 1, 2};
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return scaled[a] - q[a] > scaled[b] - q[b]; });
      for (int k = 0; total < 255; ++k, ++total) ++q[order[k % 3]];
      for (int c = 0; c < 3; ++c)
        img.samples[(static_cast<std::size_t>(y) * pm.width() + x) * 3 + c] = static_cast<std::uint16_t>(q[c]);
    }
  }
  write_png(path, img);
}

LabelMap read_label_map(const fs::path& path) {
  const PngImage img = read_png(path);
  if (img.channels != 1) throw Error(ErrorCode::BadFormat, path.string() + " is not single-channel");
  LabelMap labels(img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) labels(y, x) = img.at(x, y, 0);
  return labels;
}

void write_label_map(const fs::path& path, const LabelMap& labels) {
  PngImage img = make_image(static_cast<int>(labels.cols()), static_cast<int>(labels.rows()), 1, 16);
  for (int y = 0; y < labels.rows(); ++y) {
    for (int x = 0; x < labels.cols(); ++x) {
      const Label l = labels(y, x);
      if (l < 0 || l > 65535) {
        throw Error(ErrorCode::LabelOverflow, "label " + std::to_string(l) + " does not fit 16 bits");
      }
      img.samples[static_cast<std::size_t>(y) * img.width + x] = static_cast<std::uint16_t>(l);
    }
  }
  write_png(path, img);
}

BinaryMask read_mask(const fs::path& path) {
  const PngImage img = read_png(path);
  if (img.channels != 1) throw Error(ErrorCode::BadFormat, path.string() + " is not single-channel");
  BinaryMask mask(img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) mask(y, x) = img.at(x, y, 0) != 0;
  return mask;
}

void write_mask(const fs::path& path, const BinaryMask& mask) {
  PngImage img = make_image(static_cast<int>(mask.cols()), static_cast<int>(mask.rows()), 1, 8);
  for (int y = 0; y < mask.rows(); ++y)
    for (int x = 0; x < mask.cols(); ++x)
      img.samples[static_cast<std::size_t>(y) * img.width + x] = mask(y, x) ? 255 : 0;
  write_png(path, img);
}

ThreeClassMask read_class_mask(const fs::path& path) {
  const PngImage img = read_png(path);
  if (img.channels != 3 || img.bit_depth != 8) {
    throw Error(ErrorCode::BadFormat, path.string() + " is not an 8-bit RGB image");
  }
  ThreeClassMask cls(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Rgb px{static_cast<std::uint8_t>(img.at(x, y, 0)), static_cast<std::uint8_t>(img.at(x, y, 1)),
                   static_cast<std::uint8_t>(img.at(x, y, 2))};
      PixelClass c;
      if (px == kTissueColor) {
        c = PixelClass::background;
      } else if (px == kNeuronColor) {
        c = PixelClass::neuron;
      } else if (px == kContourColor) {
        c = PixelClass::contour;
      } else {
        throw Error(ErrorCode::UnknownColor, "(" + std::to_string(px.r) + "," + std::to_string(px.g) + "," +
                                                 std::to_string(px.b) + ") at (" + std::to_string(x) + "," +
                                                 std::to_string(y) + ")");
      }
      cls(y, x) = static_cast<std::uint8_t>(c);
    }
  }
  return cls;
}

void write_class_mask(const fs::path& path, const ThreeClassMask& mask) {
  PngImage img = make_image(static_cast<int>(mask.cols()), static_cast<int>(mask.rows()), 3, 8);
  for (int y = 0; y < mask.rows(); ++y) {
    for (int x = 0; x < mask.cols(); ++x) {
      Rgb px;
      switch (static_cast<PixelClass>(mask(y, x))) {
        case PixelClass::background: px = kTissueColor; break;
        case PixelClass::neuron: px = kNeuronColor; break;
        case PixelClass::contour: px = kContourColor; break;
        default: throw Error(ErrorCode::InvalidArgument, "invalid class value in mask");
      }
      const std::size_t i = (static_cast<std::size_t>(y) * img.width + x) * 3;
      img.samples[i] = px.r;
      img.samples[i + 1] = px.g;
      img.samples[i + 2] = px.b;
    }
  }
  write_png(path, img);
}

PointSet parse_points(const std::string& text, int width, int height) {
  PointSet points;
  std::set<Point> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto parts = split(t, ',');
    Point p;
    if (parts.size() != 2 || !parse_int(parts[0], p.x) || !parse_int(parts[1], p.y)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected \"x,y\", got \"" + t + "\"");
    }
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw Error(ErrorCode::OutOfBounds, "line " + std::to_string(lineno) + ": (" + std::to_string(p.x) + "," +
                                              std::to_string(p.y) + ") outside " + std::to_string(width) + "x" +
                                              std::to_string(height));
    }
    if (!seen.insert(p).second) {
      throw Error(ErrorCode::DuplicatePoint, "line " + std::to_string(lineno) + ": (" + std::to_string(p.x) + "," +
                                                 std::to_string(p.y) + ") repeated");
    }
    points.push_back(p);
  }
  return points;
}

PointSet read_points(const fs::path& path, int width, int height) {
  return parse_points(read_text(path), width, height);
}

void write_points(const fs::path& path, const PointSet& points) {
  std::ostringstream out;
  for (const auto& p : points) out << p.x << ',' << p.y << '\n';
  write_text(path, out.str());
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  const fs::path dir = path.parent_path();
  std::istringstream in(read_text(path));
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  auto optional_path = [&](const std::vector<std::string>& parts, std::size_t i) -> std::optional<fs::path> {
    if (i >= parts.size()) return std::nullopt;
    const std::string v = trim(parts[i]);
    if (v.empty() || v == "-") return std::nullopt;
    return resolve(dir, v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto parts = split(line, '\t');
    if (parts.size() < 2 || parts.size() > 4 || trim(parts[0]).empty() || trim(parts[1]).empty()) {
      throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(lineno) +
                                             ": expected id<TAB>probmap[<TAB>centroids[<TAB>gt]]");
    }
    ManifestEntry e;
    e.id = trim(parts[0]);
    e.probability_map = resolve(dir, trim(parts[1]));
    e.centroids = optional_path(parts, 2);
    e.ground_truth = optional_path(parts, 3);
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(lineno) + ": duplicate id " + e.id);
    }
    for (const auto* p : {&e.probability_map, e.centroids ? &*e.centroids : nullptr,
                          e.ground_truth ? &*e.ground_truth : nullptr}) {
      if (p && !fs::exists(*p)) throw Error(ErrorCode::Io, "manifest path does not exist: " + p->string());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.id << '\t' << e.probability_map.generic_string() << '\t'
        << (e.centroids ? e.centroids->generic_string() : "-") << '\t'
        << (e.ground_truth ? e.ground_truth->generic_string() : "-") << '\n';
  }
  write_text(path, out.str());
}

TileManifest read_tile_manifest(const fs::path& path) {
  const fs::path dir = path.parent_path();
  std::istringstream in(read_text(path));
  TileManifest m;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto parts = split(line, '\t');
    const auto fail = [&] {
      throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(lineno));
    };
    if (!have_header) {
      if (parts.size() != 5 || trim(parts[0]) != "canvas" || trim(parts[3]) != "overlap" ||
          !parse_int(parts[1], m.width) || !parse_int(parts[2], m.height) || !parse_int(parts[4], m.overlap)) {
        fail();
      }
      have_header = true;
      continue;
    }
    TileRect r;
    if (parts.size() != 5 || !parse_int(parts[0], r.x0) || !parse_int(parts[1], r.y0) ||
        !parse_int(parts[2], r.width) || !parse_int(parts[3], r.height) || trim(parts[4]).empty()) {
      fail();
    }
    m.tiles.emplace_back(r, resolve(dir, trim(parts[4])));
  }
  if (!have_header) throw Error(ErrorCode::ParseError, path.string() + ": missing canvas header");
  return m;
}

void write_tile_manifest(const fs::path& path, const TileManifest& m) {
  std::ostringstream out;
  out << "canvas\t" << m.width << '\t' << m.height << "\toverlap\t" << m.overlap << '\n';
  for (const auto& [r, p] : m.tiles)
    out << r.x0 << '\t' << r.y0 << '\t' << r.width << '\t' << r.height << '\t' << p.generic_string() << '\n';
  write_text(path, out.str());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace neuroseg::io
