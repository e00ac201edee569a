#pragma once

#include <litetrack/detection_source.hpp>
#include <litetrack/mot_io.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace litetrack::overlay {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

/// Deterministic id -> color palette (golden-angle hue rotation).
Rgb id_color(int id);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // packed, 3 bytes per pixel

    static Image blank(int width, int height, Rgb fill);
    Rgb pixel(int x, int y) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return Rgb{rgb[i], rgb[i + 1], rgb[i + 2]};
    }
};

void draw_box(Image& img, const BBox& box, Rgb color, int thickness = 2);

void write_ppm(const std::filesystem::path& file, const Image& img);
Image read_ppm(const std::filesystem::path& file);

struct OverlayOptions {
    /// Optional background frames, {frame:06}.ppm. Missing frames are skipped
    /// with a warning; without a directory a blank canvas is used.
    std::filesystem::path images_dir;
    int thickness = 2;
};

/// Renders one annotated PPM per frame into out_dir. Returns frames written.
int render_overlay(const SequenceMeta& meta, const std::vector<io::ResultRow>& rows,
                   const std::filesystem::path& out_dir, const OverlayOptions& opts = {});

} // namespace litetrack::overlay
