#include "stegcol/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace stegcol {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int(const char* field) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw PpmError(PpmError::Kind::bad_header, "ppm: header value too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw PpmError(PpmError::Kind::bad_header, std::string("ppm: missing or malformed ") + field);
    }
    return value;
  }

  std::size_t& pos() { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageRGB::ImageRGB(int w, int h) : width(w), height(h), pixels(pixel_count() * 3, 0) {}

void ImageRGB::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("image: width and height must be >= 1");
  if (pixels.size() != pixel_count() * 3) throw std::invalid_argument("image: pixel buffer size mismatch");
}

ImageRGB read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw PpmError(PpmError::Kind::bad_magic, "ppm: not a binary P6 file");
  }
  HeaderReader in(bytes.subspan(2));
  const long w = in.read_int("width");
  const long h = in.read_int("height");
  const long maxval = in.read_int("maxval");
  if (w < 1 || h < 1) throw PpmError(PpmError::Kind::bad_header, "ppm: zero image dimension");
  if (maxval != 255) {
    throw PpmError(PpmError::Kind::unsupported_maxval, "ppm: unsupported maxval " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t pos = 2 + in.pos();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw PpmError(PpmError::Kind::truncated, "ppm: truncated pixel data");
  }
  ++pos;

  ImageRGB image(static_cast<int>(w), static_cast<int>(h));
  if (bytes.size() - pos < image.pixels.size()) {
    throw PpmError(PpmError::Kind::truncated, "ppm: truncated pixel data");
  }
  std::copy_n(bytes.begin() + static_cast<long>(pos), image.pixels.size(), image.pixels.begin());
  return image;
}

std::vector<std::uint8_t> write_ppm(const ImageRGB& image) {
  image.validate();
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

ImageRGB load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return read_ppm(bytes);
  } catch (const PpmError& e) {
    throw PpmError(e.kind(), path.string() + ": " + e.what());
  }
}

void save_ppm(const std::filesystem::path& path, const ImageRGB& image) {
  const auto bytes = write_ppm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace stegcol
