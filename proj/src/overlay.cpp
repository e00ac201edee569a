#include <litetrack/overlay.hpp>

#include <litetrack/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

namespace litetrack::overlay {
namespace {

Rgb hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    if (hp < 1.0) {
        r = c, g = x;
    } else if (hp < 2.0) {
        r = x, g = c;
    } else if (hp < 3.0) {
        g = c, b = x;
    } else if (hp < 4.0) {
        g = x, b = c;
    } else if (hp < 5.0) {
        r = x, b = c;
    } else {
        r = c, b = x;
    }
    const double m = v - c;
    const auto to8 = [m](double t) {
        return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t + m, 0.0, 1.0)));
    };
    return Rgb{to8(r), to8(g), to8(b)};
}

} // namespace

Rgb id_color(int id) {
    const double hue = std::fmod(static_cast<double>(id) * 0.618033988749895, 1.0);
    return hsv_to_rgb(hue, 0.85, 0.95);
}

Image Image::blank(int width, int height, Rgb fill) {
    Image img;
    img.width = width;
    img.height = height;
    img.rgb.resize(3 * static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = fill.r;
        img.rgb[i + 1] = fill.g;
        img.rgb[i + 2] = fill.b;
    }
    return img;
}

void draw_box(Image& img, const BBox& box, Rgb color, int thickness) {
    const int x0 = static_cast<int>(std::lround(box.x));
    const int y0 = static_cast<int>(std::lround(box.y));
    const int x1 = static_cast<int>(std::lround(box.right()));
    const int y1 = static_cast<int>(std::lround(box.bottom()));
    const auto put = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) {
            return;
        }
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * img.width + x);
        img.rgb[i] = color.r;
        img.rgb[i + 1] = color.g;
        img.rgb[i + 2] = color.b;
    };
    for (int t = 0; t < thickness; ++t) {
        for (int x = x0; x <= x1; ++x) {
            put(x, y0 + t);
            put(x, y1 - t);
        }
        for (int y = y0; y <= y1; ++y) {
            put(x0 + t, y);
            put(x1 - t, y);
        }
    }
}

void write_ppm(const std::filesystem::path& file, const Image& img) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw InputError("cannot create " + file.string());
    }
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
}

Image read_ppm(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + file.string());
    }
    std::string magic;
    in >> magic;
    if (magic != "P6") {
        throw InputError(file.string() + ": not a P6 ppm");
    }
    const auto next_int = [&]() {
        int value = 0;
        in >> std::ws;
        while (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            in >> std::ws;
        }
        if (!(in >> value)) {
            throw InputError(file.string() + ": malformed ppm header");
        }
        return value;
    };
    Image img;
    img.width = next_int();
    img.height = next_int();
    const int maxval = next_int();
    if (img.width <= 0 || img.height <= 0 || maxval != 255) {
        throw InputError(file.string() + ": unsupported ppm dimensions");
    }
    in.get(); // single whitespace after maxval
    img.rgb.resize(3 * static_cast<std::size_t>(img.width) * img.height);
    if (!in.read(reinterpret_cast<char*>(img.rgb.data()),
                 static_cast<std::streamsize>(img.rgb.size()))) {
        throw InputError(file.string() + ": truncated ppm payload");
    }
    return img;
}

int render_overlay(const SequenceMeta& meta, const std::vector<io::ResultRow>& rows,
                   const std::filesystem::path& out_dir, const OverlayOptions& opts) {
    std::map<int, std::vector<io::ResultRow>> by_frame;
    int max_frame = meta.num_frames;
    for (const io::ResultRow& r : rows) {
        by_frame[r.frame].push_back(r);
        max_frame = std::max(max_frame, r.frame);
    }
    std::filesystem::create_directories(out_dir);

    const Rgb background{24, 24, 24};
    int written = 0;
    for (int frame = 1; frame <= max_frame; ++frame) {
        Image canvas;
        if (!opts.images_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof(name), "%06d.ppm", frame);
            const std::filesystem::path src = opts.images_dir / name;
            if (!std::filesystem::exists(src)) {
                std::cerr << "overlay: missing frame image " << src.string()
                          << ", skipping\n";
                continue;
            }
            canvas = read_ppm(src);
        } else {
            canvas = Image::blank(meta.image_width > 0 ? meta.image_width : 640,
                                  meta.image_height > 0 ? meta.image_height : 480,
                                  background);
        }
        const auto it = by_frame.find(frame);
        if (it != by_frame.end()) {
            for (const io::ResultRow& r : it->second) {
                draw_box(canvas, r.box, id_color(r.id), opts.thickness);
            }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "%06d.ppm", frame);
        write_ppm(out_dir / name, canvas);
        ++written;
    }
    return written;
}

} // namespace litetrack::overlay
