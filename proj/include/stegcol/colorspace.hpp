#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stegcol/image.hpp"

namespace stegcol {

enum class ColorSpace { RGB, HSV, YCbCr, YUV, XYZ, Lab };

inline constexpr std::array<ColorSpace, 6> kAllColorSpaces{
    ColorSpace::RGB, ColorSpace::HSV, ColorSpace::YCbCr,
    ColorSpace::YUV, ColorSpace::XYZ, ColorSpace::Lab};

const char* to_string(ColorSpace space) noexcept;
ColorSpace parse_colorspace(std::string_view name);

/// Three real-valued planes in one colorspace.
///
/// Channel ranges: RGB in [0,1]; HSV hue in [0,360), S and V in [0,1];
/// YCbCr full-range with chroma offset 128/255; YUV with U, V offset by 0.5;
/// XYZ in [0, 1.089]; Lab L in [0,100], a and b nominally in [-128, 127].
struct ImagePlanar {
  ColorSpace space = ColorSpace::RGB;
  int width = 0;
  int height = 0;
  std::array<std::vector<double>, 3> channels;
};

using Triple = std::array<double, 3>;

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Nominal range of each channel of a colorspace (see ImagePlanar).
std::array<ValueRange, 3> channel_ranges(ColorSpace space);

// Per-pixel forward transforms on normalized RGB in [0,1].
Triple rgb_to_hsv(const Triple& rgb);
Triple rgb_to_ycbcr(const Triple& rgb);
Triple rgb_to_yuv(const Triple& rgb);
Triple rgb_to_xyz(const Triple& rgb);
Triple xyz_to_lab(const Triple& xyz);

// Inverses; used for round-trip checks only.
Triple hsv_to_rgb(const Triple& hsv);
Triple ycbcr_to_rgb(const Triple& ycc);
Triple yuv_to_rgb(const Triple& yuv);
Triple xyz_to_rgb(const Triple& xyz);
Triple lab_to_xyz(const Triple& lab);

/// Single-pixel conversion from normalized RGB to any supported space.
Triple convert_pixel(const Triple& rgb, ColorSpace target);
/// Single-pixel conversion back to normalized RGB.
Triple to_rgb_pixel(const Triple& value, ColorSpace source);

ImagePlanar convert(const ImageRGB& image, ColorSpace target);

/// One planar image per target, in order. Duplicate or empty targets throw.
std::vector<ImagePlanar> convert_all(const ImageRGB& image, std::span<const ColorSpace> targets);

}  // namespace stegcol
