#include "stag/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace stag {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("not a P5 PGM: " + path);
  auto next_int = [&in, &path]() {
    // Skips whitespace and '#' comment lines.
    while (true) {
      int c = in.peek();
      if (c == '#') {
        std::string dummy;
        std::getline(in, dummy);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    int v;
    if (!(in >> v)) throw std::runtime_error("malformed PGM header: " + path);
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (maxval != 255) throw std::runtime_error("only 8-bit PGM supported: " + path);
  in.get();  // single whitespace after maxval
  GrayImage img(w, h);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (!in) throw std::runtime_error("truncated PGM: " + path);
  return img;
}

void save_png(const GrayImage& image, const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(image.data.data() +
                                             static_cast<size_t>(y) * image.width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read error: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  const png_byte color_type = png_get_color_type(png, info);
  if (color_type & PNG_COLOR_MASK_COLOR) {
    png_set_rgb_to_gray(png, 1, -1, -1);  // default luma coefficients
  }
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  GrayImage img(w, h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = img.data.data() + static_cast<size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

GrayImage load_image(const std::string& path) {
  if (has_suffix(path, ".pgm")) return load_pgm(path);
  if (has_suffix(path, ".png")) return load_png(path);
  // Sniff the magic bytes for extension-less paths.
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  in.close();
  if (magic[0] == 'P' && magic[1] == '5') return load_pgm(path);
  return load_png(path);
}

void save_image(const GrayImage& image, const std::string& path) {
  if (has_suffix(path, ".png")) {
    save_png(image, path);
  } else if (has_suffix(path, ".pgm")) {
    save_pgm(image, path);
  } else {
    throw std::runtime_error("unsupported image extension (use .pgm or .png): " + path);
  }
}

}  // namespace stag
