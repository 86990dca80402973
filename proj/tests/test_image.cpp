#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "stegcol/image.hpp"

using namespace stegcol;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

PpmError::Kind kind_of(const std::string& text) {
  try {
    read_ppm(bytes(text));
  } catch (const PpmError& e) {
    return e.kind();
  }
  FAIL("expected a PpmError");
  return PpmError::Kind::bad_header;
}

}  // namespace

TEST_CASE("write_ppm layout and round trip") {
  ImageRGB img(3, 2);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(255 - i * 13);
  const auto data = write_ppm(img);
  const std::string header = "P6\n3 2\n255\n";
  REQUIRE(data.size() == header.size() + 18);
  CHECK(std::string(data.begin(), data.begin() + static_cast<long>(header.size())) == header);
  CHECK(read_ppm(data) == img);
}

TEST_CASE("header comments and whitespace are accepted") {
  const auto img = read_ppm(bytes(std::string("P6 # made by hand\n  2\t1 # size\n255\n") + "abcdef"));
  CHECK(img.width == 2);
  CHECK(img.height == 1);
  CHECK(img.at(1, 0, 2) == 'f');
}

TEST_CASE("malformed files are rejected by kind") {
  CHECK(kind_of("P3\n1 1\n255\n000") == PpmError::Kind::bad_magic);
  CHECK(kind_of("P6\n1\n") == PpmError::Kind::bad_header);
  CHECK(kind_of("P6\n0 4\n255\n") == PpmError::Kind::bad_header);
  CHECK(kind_of("P6\n1 1\n65535\n012345") == PpmError::Kind::unsupported_maxval);
  CHECK(kind_of("P6\n2 2\n255\nabc") == PpmError::Kind::truncated);
  try {
    read_ppm(bytes("P6\n1 1\n65535\n012345"));
  } catch (const PpmError& e) {
    CHECK(std::string(e.what()) == "ppm: unsupported maxval 65535");
  }
}

TEST_CASE("save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "stegcol_test_image";
  std::filesystem::create_directories(dir);
  ImageRGB img(5, 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 7);
  save_ppm(dir / "a.ppm", img);
  CHECK(load_ppm(dir / "a.ppm") == img);
  CHECK_THROWS(load_ppm(dir / "missing.ppm"));
  std::filesystem::remove_all(dir);
}
