#include "spargen/image.hpp"

#include <algorithm>
#include <fstream>

namespace spargen {

ImageRgb::ImageRgb(int w, int h, std::array<uint8_t, 3> fill) : width(w), height(h) {
    data.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill[0];
        data[i + 1] = fill[1];
        data[i + 2] = fill[2];
    }
}

ImageRgb load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P6") throw ParseError(path.string() + ": not a binary PPM");
    auto next_token = [&]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw ParseError(path.string() + ": truncated PPM header");
    };
    ImageRgb img;
    img.width = std::stoi(next_token());
    img.height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (maxval != 255) throw ParseError(path.string() + ": only maxval 255 supported");
    in.get();  // single whitespace after header
    img.data.resize(static_cast<size_t>(img.width) * img.height * 3);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw ParseError(path.string() + ": truncated pixel data");
    return img;
}

void save_ppm(const std::filesystem::path& path, const ImageRgb& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()),
              static_cast<std::streamsize>(image.data.size()));
}

const char* to_string(MarkKind k) { return k == MarkKind::Point ? "point" : "bbox"; }

const char* to_string(MarkColor c) {
    switch (c) {
        case MarkColor::Red: return "red";
        case MarkColor::Green: return "green";
        case MarkColor::Blue: return "blue";
    }
    return "?";
}

std::array<uint8_t, 3> rgb(MarkColor c) {
    switch (c) {
        case MarkColor::Red: return {255, 0, 0};
        case MarkColor::Green: return {0, 255, 0};
        case MarkColor::Blue: return {0, 0, 255};
    }
    return {0, 0, 0};
}

namespace {

void put(ImageRgb& img, int x, int y, const std::array<uint8_t, 3>& c) {
    if (!img.in_bounds(x, y)) return;
    uint8_t* p = img.pixel(x, y);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
}

void draw_disk(ImageRgb& img, double u, double v, int radius,
               const std::array<uint8_t, 3>& c) {
    const int cx = static_cast<int>(std::lround(u));
    const int cy = static_cast<int>(std::lround(v));
    for (int y = cy - radius; y <= cy + radius; ++y)
        for (int x = cx - radius; x <= cx + radius; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius)
                put(img, x, y, c);
}

void draw_rect(ImageRgb& img, double x_min, double y_min, double x_max, double y_max,
               int stroke, const std::array<uint8_t, 3>& c) {
    const int x0 = static_cast<int>(std::lround(x_min));
    const int y0 = static_cast<int>(std::lround(y_min));
    const int x1 = static_cast<int>(std::lround(x_max));
    const int y1 = static_cast<int>(std::lround(y_max));
    for (int s = 0; s < stroke; ++s) {
        for (int x = x0 - s; x <= x1 + s; ++x) {
            put(img, x, y0 - s, c);
            put(img, x, y1 + s, c);
        }
        for (int y = y0 - s; y <= y1 + s; ++y) {
            put(img, x0 - s, y, c);
            put(img, x1 + s, y, c);
        }
    }
}

void check_bounds(const ImageRgb& img, const VisualMark& mark) {
    for (size_t i = 0; i + 1 < mark.pixels.size(); i += 2) {
        const double u = mark.pixels[i], v = mark.pixels[i + 1];
        if (u < 0 || u > img.width || v < 0 || v > img.height)
            throw ValidationError("mark coordinates outside image bounds");
    }
}

}  // namespace

ImageRgb render_marks(const ImageRgb& image, const std::vector<VisualMark>& marks) {
    ImageRgb out = image;
    for (MarkColor color : {MarkColor::Red, MarkColor::Green, MarkColor::Blue}) {
        for (const VisualMark& mark : marks) {
            if (mark.color != color) continue;
            check_bounds(out, mark);
            if (mark.kind == MarkKind::Point) {
                draw_disk(out, mark.pixels.at(0), mark.pixels.at(1), kPointMarkRadius,
                          rgb(color));
            } else {
                draw_rect(out, mark.pixels.at(0), mark.pixels.at(1), mark.pixels.at(2),
                          mark.pixels.at(3), kBboxMarkStroke, rgb(color));
            }
        }
    }
    return out;
}

}  // namespace spargen
