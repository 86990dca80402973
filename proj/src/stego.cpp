#include "stegcol/stego.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "stegcol/rng.hpp"

namespace stegcol {
namespace {

enum Purpose : std::uint64_t {
  kEmbedPurpose = 0x2001,
  kCoverPurpose = 0x2002,
  kCorpusCover = 0x2003,
  kCorpusEmbed = 0x2004,
  kCorpusSplit = 0x2005,
};

// Separable box blur with clamped edges, applied in place.
void box_blur(std::vector<double>& field, int w, int h, int radius) {
  std::vector<double> tmp(field.size());
  const double norm = 1.0 / (2 * radius + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += field[y * w + std::clamp(x + k, 0, w - 1)];
      tmp[y * w + x] = s * norm;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += tmp[std::clamp(y + k, 0, h - 1) * w + x];
      field[y * w + x] = s * norm;
    }
  }
}

// Zero-mean, unit-variance low-pass noise field.
std::vector<double> smooth_field(int w, int h, int radius, RngStream& rng) {
  std::vector<double> f(static_cast<std::size_t>(w) * h);
  for (double& v : f) v = rng.normal();
  box_blur(f, w, h, radius);
  box_blur(f, w, h, radius);
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
  double var = 0.0;
  for (double v : f) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(f.size()));
  for (double& v : f) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return f;
}

std::string csv_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void PayloadConfig::validate() const {
  if (!(bpc >= 0.0 && bpc <= 1.0)) throw std::invalid_argument("payload: bpc must lie in [0, 1]");
}

ImageRGB embed_lsbm(const ImageRGB& cover, const PayloadConfig& payload) {
  cover.validate();
  payload.validate();
  ImageRGB stego = cover;
  const std::size_t n = cover.pixel_count();
  const auto count = static_cast<std::size_t>(std::ceil(payload.bpc * static_cast<double>(n) - 1e-9));
  if (count == 0) return stego;

  std::vector<std::uint32_t> order(n);
  for (int c = 0; c < 3; ++c) {
    RngStream rng(mix_key(payload.seed, {kEmbedPurpose, static_cast<std::uint64_t>(c)}));
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(n - i);
      std::swap(order[i], order[j]);
      std::uint8_t& px = stego.pixels[static_cast<std::size_t>(order[i]) * 3 + c];
      const bool bit = rng.coin();
      const bool up = rng.coin();
      if ((px & 1u) == static_cast<unsigned>(bit)) continue;
      if (px == 0 || (px != 255 && up)) {
        ++px;
      } else {
        --px;
      }
    }
  }
  return stego;
}

ImageRGB synth_cover(int width, int height, std::uint64_t seed) {
  if (width < 16 || height < 16) throw std::invalid_argument("synth_cover: width and height must be >= 16");
  RngStream rng(mix_key(seed, {kCoverPurpose}));

  // Layers: broad shading, mid-frequency texture and per-pixel sensor noise.
  // The texture and noise amplitudes vary per image, which sets how hard the
  // cover is to analyze.
  const int broad_radius = 5 + static_cast<int>(rng.below(5));
  const int texture_radius = 1 + static_cast<int>(rng.below(2));
  const double broad_amplitude = rng.uniform(12.0, 28.0);
  const double texture_amplitude = rng.uniform(0.5, 5.0);
  const double chroma_amplitude = rng.uniform(3.0, 12.0);
  // Demosaiced colour images carry noise that is mostly shared by the channels.
  const double shared_noise = rng.uniform(0.3, 1.5);
  const double channel_noise = rng.uniform(0.0, 0.5);
  const double slope_x = rng.uniform(-0.25, 0.25);
  const double slope_y = rng.uniform(-0.25, 0.25);
  double base[3];
  for (double& b : base) b = rng.uniform(80.0, 170.0);

  const auto broad = smooth_field(width, height, broad_radius, rng);
  const auto texture = smooth_field(width, height, texture_radius, rng);
  const auto chroma_u = smooth_field(width, height, broad_radius, rng);
  const auto chroma_v = smooth_field(width, height, broad_radius, rng);
  constexpr double kMix[3][2] = {{0.0, 1.0}, {-0.4, -0.5}, {1.0, 0.0}};

  ImageRGB img(width, height);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const double luma = slope_x * (x - cx) + slope_y * (y - cy) + broad_amplitude * broad[i] +
                          texture_amplitude * texture[i] + shared_noise * rng.normal();
      for (int c = 0; c < 3; ++c) {
        const double v = base[c] + luma +
                         chroma_amplitude * (kMix[c][0] * chroma_u[i] + kMix[c][1] * chroma_v[i]) +
                         channel_noise * rng.normal();
        img.pixels[i * 3 + c] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
      }
    }
  }
  return img;
}

const char* to_string(Split split) noexcept { return split == Split::train ? "train" : "test"; }

CorpusManifest gen_corpus(const std::filesystem::path& out_dir, int n_pairs, int width, int height,
                          std::span<const double> payloads, std::uint64_t seed) {
  namespace fs = std::filesystem;
  if (n_pairs < 8) throw std::invalid_argument("gen_corpus: n_pairs must be >= 8");
  for (double bpc : payloads) PayloadConfig{bpc, 0}.validate();

  std::vector<std::string> stego_dirs;
  for (double bpc : payloads) stego_dirs.push_back(fmt::format("stego_{:g}", bpc));
  std::error_code ec;
  fs::create_directories(out_dir / "covers", ec);
  for (const auto& d : stego_dirs) {
    if (!ec) fs::create_directories(out_dir / d, ec);
  }
  if (ec) throw std::runtime_error("cannot create corpus directories under " + out_dir.string() + ": " + ec.message());

  // Cover-level split: the first 75% of a seeded permutation train.
  std::vector<std::size_t> order(static_cast<std::size_t>(n_pairs));
  std::iota(order.begin(), order.end(), 0);
  RngStream split_rng(mix_key(seed, {kCorpusSplit}));
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[split_rng.below(i + 1)]);
  const auto n_train = static_cast<std::size_t>(std::lround(0.75 * n_pairs));
  std::vector<Split> split(order.size(), Split::test);
  for (std::size_t i = 0; i < n_train; ++i) split[order[i]] = Split::train;

  CorpusManifest manifest;
  for (int i = 0; i < n_pairs; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const std::uint64_t cover_seed = mix_key(seed, {kCorpusCover, idx});
    const std::string cover_rel = fmt::format("covers/cover_{:05d}.ppm", i);
    const ImageRGB cover = synth_cover(width, height, cover_seed);
    save_ppm(out_dir / cover_rel, cover);
    manifest.entries.push_back(ManifestEntry{cover_rel, "", 0.0, cover_seed, split[idx]});

    for (std::size_t p = 0; p < payloads.size(); ++p) {
      const std::uint64_t embed_seed = mix_key(seed, {kCorpusEmbed, idx, p});
      const std::string stego_rel = fmt::format("{}/stego_{:05d}.ppm", stego_dirs[p], i);
      save_ppm(out_dir / stego_rel, embed_lsbm(cover, PayloadConfig{payloads[p], embed_seed}));
      manifest.entries.push_back(ManifestEntry{cover_rel, stego_rel, payloads[p], embed_seed, split[idx]});
    }
  }
  return manifest;
}

std::string manifest_to_csv(const CorpusManifest& manifest) {
  std::string out = "cover_path,stego_path,bpc,seed,split\n";
  for (const auto& e : manifest.entries) {
    out += fmt::format("{},{},{},{},{}\n", e.cover_path, e.stego_path, csv_double(e.bpc), e.seed,
                       to_string(e.split));
  }
  return out;
}

CorpusManifest manifest_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "cover_path,stego_path,bpc,seed,split") {
    throw std::runtime_error("manifest: missing or unexpected header");
  }
  CorpusManifest manifest;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 5) {
      throw std::runtime_error(fmt::format("manifest line {}: expected 5 fields, got {}", line_no, fields.size()));
    }
    ManifestEntry e;
    e.cover_path = fields[0];
    e.stego_path = fields[1];
    try {
      e.bpc = std::stod(fields[2]);
      e.seed = std::stoull(fields[3]);
    } catch (const std::exception&) {
      throw std::runtime_error(fmt::format("manifest line {}: bad number", line_no));
    }
    if (fields[4] == "train") {
      e.split = Split::train;
    } else if (fields[4] == "test") {
      e.split = Split::test;
    } else {
      throw std::runtime_error(fmt::format("manifest line {}: bad split '{}'", line_no, fields[4]));
    }
    if (e.cover_path.empty()) throw std::runtime_error(fmt::format("manifest line {}: empty cover_path", line_no));
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace stegcol
