#include "stegcol/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace stegcol {
namespace {

// sRGB (D65) primaries.
constexpr double kToXyz[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                                 {0.2126729, 0.7151522, 0.0721750},
                                 {0.0193339, 0.1191920, 0.9503041}};
constexpr double kFromXyz[3][3] = {{3.2404542, -1.5371385, -0.4985314},
                                   {-0.9692660, 1.8760108, 0.0415560},
                                   {0.0556434, -0.2040259, 1.0572252}};

// Reference white is the image of RGB (1,1,1), so white maps to a = b = 0 exactly.
constexpr double kWhite[3] = {kToXyz[0][0] + kToXyz[0][1] + kToXyz[0][2],
                              kToXyz[1][0] + kToXyz[1][1] + kToXyz[1][2],
                              kToXyz[2][0] + kToXyz[2][1] + kToXyz[2][2]};

constexpr double kChromaOffset = 128.0 / 255.0;
constexpr double kLabEpsilon = 216.0 / 24389.0;  // (6/29)^3

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
  return t > kLabEpsilon ? std::cbrt(t) : t / (3.0 * (6.0 / 29.0) * (6.0 / 29.0)) + 4.0 / 29.0;
}

double lab_f_inv(double f) {
  return f > 6.0 / 29.0 ? f * f * f : 3.0 * (6.0 / 29.0) * (6.0 / 29.0) * (f - 4.0 / 29.0);
}

Triple apply(const double (&m)[3][3], const Triple& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

}  // namespace

const char* to_string(ColorSpace space) noexcept {
  switch (space) {
    case ColorSpace::RGB: return "RGB";
    case ColorSpace::HSV: return "HSV";
    case ColorSpace::YCbCr: return "YCbCr";
    case ColorSpace::YUV: return "YUV";
    case ColorSpace::XYZ: return "XYZ";
    case ColorSpace::Lab: return "Lab";
  }
  return "?";
}

ColorSpace parse_colorspace(std::string_view name) {
  for (ColorSpace s : kAllColorSpaces) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown colorspace '" + std::string(name) + "'");
}

std::array<ValueRange, 3> channel_ranges(ColorSpace space) {
  switch (space) {
    case ColorSpace::RGB: return {{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}};
    case ColorSpace::HSV: return {{{0.0, 360.0}, {0.0, 1.0}, {0.0, 1.0}}};
    case ColorSpace::YCbCr:
      return {{{0.0, 1.0}, {kChromaOffset - 0.5, kChromaOffset + 0.5}, {kChromaOffset - 0.5, kChromaOffset + 0.5}}};
    case ColorSpace::YUV: return {{{0.0, 1.0}, {0.5 - 0.436, 0.5 + 0.436}, {0.5 - 0.615, 0.5 + 0.615}}};
    case ColorSpace::XYZ: return {{{0.0, kWhite[0]}, {0.0, kWhite[1]}, {0.0, kWhite[2]}}};
    case ColorSpace::Lab: return {{{0.0, 100.0}, {-128.0, 127.0}, {-128.0, 127.0}}};
  }
  throw std::invalid_argument("unknown colorspace");
}

Triple rgb_to_hsv(const Triple& rgb) {
  const auto [r, g, b] = rgb;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  return {h, s, mx};
}

Triple hsv_to_rgb(const Triple& hsv) {
  const auto [h, s, v] = hsv;
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  Triple rgb{0.0, 0.0, 0.0};
  switch (static_cast<int>(std::floor(hp)) % 6) {
    case 0: rgb = {c, x, 0.0}; break;
    case 1: rgb = {x, c, 0.0}; break;
    case 2: rgb = {0.0, c, x}; break;
    case 3: rgb = {0.0, x, c}; break;
    case 4: rgb = {x, 0.0, c}; break;
    default: rgb = {c, 0.0, x}; break;
  }
  const double m = v - c;
  return {rgb[0] + m, rgb[1] + m, rgb[2] + m};
}

Triple rgb_to_ycbcr(const Triple& rgb) {
  const auto [r, g, b] = rgb;
  return {0.299 * r + 0.587 * g + 0.114 * b,
          kChromaOffset - 0.168736 * r - 0.331264 * g + 0.5 * b,
          kChromaOffset + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

Triple ycbcr_to_rgb(const Triple& ycc) {
  const double y = ycc[0];
  const double cb = ycc[1] - kChromaOffset;
  const double cr = ycc[2] - kChromaOffset;
  return {y + 1.402 * cr, y - 0.344136 * cb - 0.714136 * cr, y + 1.772 * cb};
}

Triple rgb_to_yuv(const Triple& rgb) {
  const auto [r, g, b] = rgb;
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return {y, 0.5 + 0.492 * (b - y), 0.5 + 0.877 * (r - y)};
}

Triple yuv_to_rgb(const Triple& yuv) {
  const double y = yuv[0];
  const double b = y + (yuv[1] - 0.5) / 0.492;
  const double r = y + (yuv[2] - 0.5) / 0.877;
  const double g = (y - 0.299 * r - 0.114 * b) / 0.587;
  return {r, g, b};
}

Triple rgb_to_xyz(const Triple& rgb) {
  return apply(kToXyz, {srgb_to_linear(rgb[0]), srgb_to_linear(rgb[1]), srgb_to_linear(rgb[2])});
}

Triple xyz_to_rgb(const Triple& xyz) {
  const Triple lin = apply(kFromXyz, xyz);
  return {linear_to_srgb(lin[0]), linear_to_srgb(lin[1]), linear_to_srgb(lin[2])};
}

Triple xyz_to_lab(const Triple& xyz) {
  const double fx = lab_f(xyz[0] / kWhite[0]);
  const double fy = lab_f(xyz[1] / kWhite[1]);
  const double fz = lab_f(xyz[2] / kWhite[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Triple lab_to_xyz(const Triple& lab) {
  const double fy = (lab[0] + 16.0) / 116.0;
  const double fx = fy + lab[1] / 500.0;
  const double fz = fy - lab[2] / 200.0;
  return {kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy), kWhite[2] * lab_f_inv(fz)};
}

Triple convert_pixel(const Triple& rgb, ColorSpace target) {
  switch (target) {
    case ColorSpace::RGB: return rgb;
    case ColorSpace::HSV: return rgb_to_hsv(rgb);
    case ColorSpace::YCbCr: return rgb_to_ycbcr(rgb);
    case ColorSpace::YUV: return rgb_to_yuv(rgb);
    case ColorSpace::XYZ: return rgb_to_xyz(rgb);
    case ColorSpace::Lab: return xyz_to_lab(rgb_to_xyz(rgb));
  }
  throw std::invalid_argument("unknown colorspace");
}

Triple to_rgb_pixel(const Triple& value, ColorSpace source) {
  switch (source) {
    case ColorSpace::RGB: return value;
    case ColorSpace::HSV: return hsv_to_rgb(value);
    case ColorSpace::YCbCr: return ycbcr_to_rgb(value);
    case ColorSpace::YUV: return yuv_to_rgb(value);
    case ColorSpace::XYZ: return xyz_to_rgb(value);
    case ColorSpace::Lab: return xyz_to_rgb(lab_to_xyz(value));
  }
  throw std::invalid_argument("unknown colorspace");
}

ImagePlanar convert(const ImageRGB& image, ColorSpace target) {
  image.validate();
  if (std::find(kAllColorSpaces.begin(), kAllColorSpaces.end(), target) == kAllColorSpaces.end()) {
    throw std::invalid_argument("unknown colorspace");
  }
  ImagePlanar out;
  out.space = target;
  out.width = image.width;
  out.height = image.height;
  const std::size_t n = image.pixel_count();
  for (auto& c : out.channels) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Triple rgb{image.pixels[3 * i] / 255.0, image.pixels[3 * i + 1] / 255.0,
                     image.pixels[3 * i + 2] / 255.0};
    const Triple v = convert_pixel(rgb, target);
    for (int c = 0; c < 3; ++c) out.channels[c][i] = v[c];
  }
  return out;
}

std::vector<ImagePlanar> convert_all(const ImageRGB& image, std::span<const ColorSpace> targets) {
  if (targets.empty()) throw std::invalid_argument("convert_all: no target colorspaces");
  std::set<ColorSpace> seen;
  for (ColorSpace s : targets) {
    if (!seen.insert(s).second) {
      throw std::invalid_argument(std::string("convert_all: duplicate colorspace ") + to_string(s));
    }
  }
  std::vector<ImagePlanar> out;
  out.reserve(targets.size());
  for (ColorSpace s : targets) out.push_back(convert(image, s));
  return out;
}

}  // namespace stegcol
