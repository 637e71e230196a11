#pragma once

#include <string>

#include "stag/image.hpp"

namespace stag {

/// Reads a grayscale image. PGM (P5) and PNG are supported; RGB(A) PNG input
/// is converted to luma. Throws std::runtime_error on unreadable input.
GrayImage load_image(const std::string& path);

/// Writes PGM or PNG depending on the file extension (.pgm / .png).
void save_image(const GrayImage& image, const std::string& path);

void save_pgm(const GrayImage& image, const std::string& path);
GrayImage load_pgm(const std::string& path);
void save_png(const GrayImage& image, const std::string& path);
GrayImage load_png(const std::string& path);

}  // namespace stag
