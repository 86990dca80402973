#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace stegcol {

/// 8-bit RGB raster, row-major, interleaved R, G, B.
struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  ImageRGB() = default;
  ImageRGB(int w, int h);

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::uint8_t& at(int x, int y, int channel) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
  }
  std::uint8_t at(int x, int y, int channel) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
  }
  void validate() const;

  bool operator==(const ImageRGB&) const = default;
};

class PpmError : public std::runtime_error {
 public:
  enum class Kind { bad_magic, bad_header, unsupported_maxval, truncated };
  PpmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Parses a binary P6 image with maxval 255. Header comments are skipped.
ImageRGB read_ppm(std::span<const std::uint8_t> bytes);

/// Emits "P6\n<w> <h>\n255\n" followed by the raw pixel bytes.
std::vector<std::uint8_t> write_ppm(const ImageRGB& image);

ImageRGB load_ppm(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const ImageRGB& image);

}  // namespace stegcol
