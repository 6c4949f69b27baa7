#include "support.hpp"

#include "neuroseg/error.hpp"
#include "neuroseg/io.hpp"

#include <doctest.h>

using namespace neuroseg;
using namespace neuroseg::testing;
namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

io::PngImage rgb(int w, int h, std::uint16_t r, std::uint16_t g, std::uint16_t b) {
  io::PngImage img{w, h, 3, 8, {}};
  for (int i = 0; i < w * h; ++i) img.samples.insert(img.samples.end(), {r, g, b});
  return img;
}

}  // namespace

TEST_CASE("probability map round trip") {
  TempDir dir("io_prob");
  io::write_png(dir / "gray.png", rgb(2, 2, 85, 85, 85));
  const ProbabilityMap<double> pm = io::read_probability_map(dir / "gray.png");
  for (int c = 0; c < 3; ++c) CHECK(pm.channels[c](1, 1) == doctest::Approx(1.0 / 3.0));

  ProbabilityMap<double> q(3, 1);
  const double vals[3][3] = {{0.2, 0.3, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, 0.0, 1.0}};
  for (int x = 0; x < 3; ++x)
    for (int c = 0; c < 3; ++c) q.channels[c](0, x) = vals[x][c];
  io::write_probability_map(dir / "q.png", q);
  const io::PngImage raw = io::read_png(dir / "q.png");
  for (int x = 0; x < 3; ++x) CHECK(raw.at(x, 0, 0) + raw.at(x, 0, 1) + raw.at(x, 0, 2) == 255);
  const ProbabilityMap<double> back = io::read_probability_map(dir / "q.png");
  for (int x = 0; x < 3; ++x)
    for (int c = 0; c < 3; ++c) CHECK(back.channels[c](0, x) == doctest::Approx(vals[x][c]).epsilon(0.01));
}

TEST_CASE("probability map format errors") {
  TempDir dir("io_prob_err");
  io::write_png(dir / "one.png", io::PngImage{2, 2, 1, 8, {1, 2, 3, 4}});
  CHECK(code_of([&] { io::read_probability_map(dir / "one.png"); }) == ErrorCode::NotThreeChannel);
  io::write_png(dir / "sum.png", rgb(2, 2, 200, 200, 200));
  CHECK(code_of([&] { io::read_probability_map(dir / "sum.png"); }) == ErrorCode::BadFormat);
  io::write_text(dir / "text.png", "not a png");
  CHECK(code_of([&] { io::read_probability_map(dir / "text.png"); }) == ErrorCode::BadFormat);
  CHECK(code_of([&] { io::read_probability_map(dir / "missing.png"); }) == ErrorCode::Io);
}

TEST_CASE("label map round trip") {
  TempDir dir("io_labels");
  LabelMap l = LabelMap::Zero(3, 4);
  l(0, 0) = 1;
  l(2, 3) = 65535;
  l(1, 2) = 300;
  io::write_label_map(dir / "l.png", l);
  CHECK((io::read_label_map(dir / "l.png") == l).all());
  CHECK(io::read_png(dir / "l.png").bit_depth == 16);

  l(0, 1) = 70000;
  CHECK(code_of([&] { io::write_label_map(dir / "big.png", l); }) == ErrorCode::LabelOverflow);
}

TEST_CASE("binary mask round trip") {
  TempDir dir("io_mask");
  BinaryMask m = BinaryMask::Constant(4, 5, false);
  m(1, 1) = true;
  m(3, 4) = true;
  io::write_mask(dir / "m.png", m);
  CHECK((io::read_mask(dir / "m.png") == m).all());
  io::write_png(dir / "gray.png", io::PngImage{2, 1, 1, 8, {0, 7}});
  const BinaryMask g = io::read_mask(dir / "gray.png");
  CHECK(!g(0, 0));
  CHECK(g(0, 1));
}

TEST_CASE("class mask colours") {
  TempDir dir("io_classes");
  io::write_png(dir / "blue.png", rgb(1, 1, 0, 0, 255));
  CHECK(io::read_class_mask(dir / "blue.png")(0, 0) == static_cast<std::uint8_t>(PixelClass::neuron));
  io::write_png(dir / "green.png", rgb(1, 1, 0, 255, 0));
  CHECK(io::read_class_mask(dir / "green.png")(0, 0) == static_cast<std::uint8_t>(PixelClass::contour));
  io::write_png(dir / "grey.png", rgb(1, 1, 128, 128, 128));
  CHECK(code_of([&] { io::read_class_mask(dir / "grey.png"); }) == ErrorCode::UnknownColor);

  ThreeClassMask c = ThreeClassMask::Zero(2, 3);
  c(0, 1) = 1;
  c(1, 2) = 2;
  io::write_class_mask(dir / "c.png", c);
  CHECK((io::read_class_mask(dir / "c.png") == c).all());
}

TEST_CASE("point lists") {
  const PointSet p = io::parse_points("# header\n10,20\n 3 , 4 \n\n", 50, 50);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == Point{10, 20});
  CHECK(p[1] == Point{3, 4});
  CHECK(code_of([] { io::parse_points("10,20\n10,20\n", 50, 50); }) == ErrorCode::DuplicatePoint);
  CHECK(code_of([] { io::parse_points("a,b\n", 50, 50); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::parse_points("1,2,3\n", 50, 50); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::parse_points("50,0\n", 50, 50); }) == ErrorCode::OutOfBounds);
  CHECK(code_of([] { io::parse_points("-1,0\n", 50, 50); }) == ErrorCode::OutOfBounds);

  TempDir dir("io_points");
  io::write_points(dir / "p.txt", p);
  CHECK(io::read_points(dir / "p.txt", 50, 50) == p);
}

TEST_CASE("manifests") {
  TempDir dir("io_manifest");
  io::write_png(dir / "a.png", rgb(1, 1, 85, 85, 85));
  io::write_text(dir / "a.txt", "0,0\n");
  io::write_manifest(dir / "m.tsv", {{"a", "a.png", fs::path("a.txt"), std::nullopt}});
  const auto entries = io::read_manifest(dir / "m.tsv");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].id == "a");
  CHECK(entries[0].probability_map == dir / "a.png");
  CHECK(entries[0].centroids == dir / "a.txt");
  CHECK(!entries[0].ground_truth);

  io::write_text(dir / "dup.tsv", "a\ta.png\t-\t-\na\ta.png\t-\t-\n");
  CHECK(code_of([&] { io::read_manifest(dir / "dup.tsv"); }) == ErrorCode::ParseError);
  io::write_text(dir / "gone.tsv", "a\tnothing.png\t-\t-\n");
  CHECK(code_of([&] { io::read_manifest(dir / "gone.tsv"); }) == ErrorCode::Io);

  io::TileManifest t{100, 80, 8, {{{0, 0, 64, 64}, "t0.png"}, {{36, 16, 64, 64}, "t1.png"}}};
  io::write_tile_manifest(dir / "tiles.tsv", t);
  const io::TileManifest back = io::read_tile_manifest(dir / "tiles.tsv");
  CHECK(back.width == 100);
  CHECK(back.height == 80);
  CHECK(back.overlap == 8);
  REQUIRE(back.tiles.size() == 2);
  CHECK(back.tiles[1].first == TileRect{36, 16, 64, 64});
  CHECK(back.tiles[1].second.filename() == "t1.png");
}

TEST_CASE("png crop") {
  io::PngImage img{3, 2, 1, 8, {1, 2, 3, 4, 5, 6}};
  const io::PngImage c = io::crop(img, {1, 1, 2, 1});
  CHECK(c.samples == std::vector<std::uint16_t>{5, 6});
  CHECK(code_of([&] { io::crop(img, {2, 0, 2, 1}); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("writes are byte-identical") {
  TempDir dir("io_bytes");
  LabelMap l = LabelMap::Zero(30, 40);
  l.block(3, 4, 10, 10).setConstant(12);
  io::write_label_map(dir / "a.png", l);
  io::write_label_map(dir / "b.png", l);
  CHECK(io::read_text(dir / "a.png") == io::read_text(dir / "b.png"));
}
