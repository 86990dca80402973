#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stegcol/image.hpp"

namespace stegcol {

struct PayloadConfig {
  double bpc = 0.0;  // message bits per channel pixel, in [0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

/// LSB matching. In every channel, ceil(bpc * w * h) positions are chosen by a
/// seeded permutation and each receives one random message bit; a pixel whose
/// LSB differs from its bit moves by +-1 (0 always goes up, 255 always down).
ImageRGB embed_lsbm(const ImageRGB& cover, const PayloadConfig& payload);

/// Seeded synthetic cover: blurred Gaussian texture, smooth gradient and a
/// per-image amount of fine sensor-like noise, quantized to 8 bits.
/// Requires width, height >= 16.
ImageRGB synth_cover(int width, int height, std::uint64_t seed);

enum class Split { train, test };
const char* to_string(Split split) noexcept;

/// One manifest row. Cover rows have an empty stego_path and bpc 0.
struct ManifestEntry {
  std::string cover_path;  // relative to the manifest directory
  std::string stego_path;
  double bpc = 0.0;
  std::uint64_t seed = 0;
  Split split = Split::train;

  bool is_cover() const noexcept { return stego_path.empty(); }
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

/// Writes covers/ and stego_<bpc>/ PPM trees under out_dir and returns their
/// manifest (paths relative to out_dir).
/// Covers are split 75/25 into train/test; a cover's stegos share its split.
CorpusManifest gen_corpus(const std::filesystem::path& out_dir, int n_pairs, int width, int height,
                          std::span<const double> payloads, std::uint64_t seed);

/// CSV with header cover_path,stego_path,bpc,seed,split.
std::string manifest_to_csv(const CorpusManifest& manifest);
CorpusManifest manifest_from_csv(const std::string& text);

}  // namespace stegcol
