#include "qwedge/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <vector>

namespace qwedge {

namespace {

constexpr const char* kUnreadable = "unreadable file";

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int depth_for_maxval(unsigned maxval) { return maxval > 255 ? 16 : 8; }

// ---------------------------------------------------------------------------
// PGM

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) throw ImageError(kUnreadable);
    return out;
  }

  unsigned long number() {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ImageError(kUnreadable);
    }
    try {
      return std::stoul(t);
    } catch (const std::exception&) {
      throw ImageError(kUnreadable);
    }
  }

  // Binary payload starts after exactly one whitespace byte following maxval.
  std::size_t payload_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw ImageError(kUnreadable);
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(kUnreadable);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 2 || bytes[0] != 'P') throw ImageError(kUnreadable);
  if (bytes[1] != '2' && bytes[1] != '5') throw ImageError("unsupported format");
  const bool ascii = bytes[1] == '2';

  PgmHeaderReader hdr(bytes);
  hdr.token();
  const unsigned long width = hdr.number();
  const unsigned long height = hdr.number();
  const unsigned long maxval = hdr.number();
  if (width == 0 || height == 0) throw ImageError("zero dimension");
  if (maxval == 0 || maxval > 65535) throw ImageError("unsupported format");

  Image img(static_cast<Index>(width), static_cast<Index>(height));
  img.source_depth = depth_for_maxval(static_cast<unsigned>(maxval));
  const auto scale = static_cast<double>(maxval);
  const auto count = static_cast<std::size_t>(width * height);

  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned long v = hdr.number();
      if (v > maxval) throw ImageError(kUnreadable);
      img.pixels.data()[i] = static_cast<double>(v) / scale;
    }
  } else {
    const std::size_t start = hdr.payload_start();
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() < start + count * bpp) throw ImageError(kUnreadable);
    for (std::size_t i = 0; i < count; ++i) {
      unsigned v = bytes[start + i * bpp];
      if (bpp == 2) v = (v << 8) | bytes[start + i * bpp + 1];
      if (v > maxval) throw ImageError(kUnreadable);
      img.pixels.data()[i] = static_cast<double>(v) / scale;
    }
  }
  return img;
}

void write_pgm(const Eigen::Ref<const Grid>& values, unsigned maxval, const std::string& comment,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError("cannot write " + path.string());
  out << "P5\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << values.cols() << " " << values.rows() << "\n" << maxval << "\n";
  const bool wide = maxval > 255;
  std::vector<unsigned char> row;
  row.reserve(static_cast<std::size_t>(values.cols()) * (wide ? 2 : 1));
  for (Index y = 0; y < values.rows(); ++y) {
    row.clear();
    for (Index x = 0; x < values.cols(); ++x) {
      const double v = std::clamp(values(y, x), 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(v * maxval));
      if (wide) row.push_back(static_cast<unsigned char>(q >> 8));
      row.push_back(static_cast<unsigned char>(q & 0xff));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw ImageError("cannot write " + path.string());
}

// ---------------------------------------------------------------------------
// PNG

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw ImageError(kUnreadable);
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw ImageError(kUnreadable);
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError(kUnreadable);
  }
  // libpng reports decode errors by longjmp back to the setjmp below.
  std::vector<unsigned char> data;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError(kUnreadable);
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError("unsupported format");
  }
  if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (width == 0 || height == 0) throw ImageError("zero dimension");
  const int depth = bit_depth == 16 ? 16 : 8;
  const double scale = depth == 16 ? 65535.0 : 255.0;
  Image img(static_cast<Index>(width), static_cast<Index>(height));
  img.source_depth = depth;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      unsigned v = depth == 16 ? (unsigned(row[2 * x]) << 8) | row[2 * x + 1] : row[x];
      img.pixels(y, x) = v / scale;
    }
  }
  return img;
}

void write_png(const Eigen::Ref<const Grid>& values, int depth, const std::string& comment,
               const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw ImageError("cannot write " + path.string());

  const auto width = static_cast<png_uint_32>(values.cols());
  const auto height = static_cast<png_uint_32>(values.rows());
  const unsigned maxval = depth == 16 ? 65535u : 255u;
  const std::size_t stride = static_cast<std::size_t>(width) * (depth == 16 ? 2 : 1);
  std::vector<unsigned char> data(stride * height);
  for (png_uint_32 y = 0; y < height; ++y) {
    for (png_uint_32 x = 0; x < width; ++x) {
      const double v = std::clamp(values(y, x), 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(v * maxval));
      if (depth == 16) {
        data[y * stride + 2 * x] = static_cast<unsigned char>(q >> 8);
        data[y * stride + 2 * x + 1] = static_cast<unsigned char>(q & 0xff);
      } else {
        data[y * stride + x] = static_cast<unsigned char>(q);
      }
    }
  }
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + y * stride;

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw ImageError("cannot write " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageError("cannot write " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_text text{};
  std::string key = "Comment";
  std::string body = comment;
  if (!comment.empty()) {
    text.compression = PNG_TEXT_COMPRESSION_NONE;
    text.key = key.data();
    text.text = body.data();
    png_set_text(png, info, &text, 1);
  }
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_grid(const Eigen::Ref<const Grid>& values, int depth, const std::string& comment,
                const std::filesystem::path& path, ImageFormat format) {
  if (format == ImageFormat::Pgm) {
    write_pgm(values, depth == 16 ? 65535u : 255u, comment, path);
  } else {
    write_png(values, depth, comment, path);
  }
}

}  // namespace

ImageFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".pgm") return ImageFormat::Pgm;
  if (ext == ".png") return ImageFormat::Png;
  throw ImageError("unsupported format: " + path.string());
}

Image load_image(const std::filesystem::path& path, ImageFormat format) {
  return format == ImageFormat::Pgm ? read_pgm(path) : read_png(path);
}

Image pad_to_even(const Image& img) {
  const Index w = img.width() + (img.width() % 2);
  const Index h = img.height() + (img.height() % 2);
  if (w == img.width() && h == img.height()) return img;
  Image out(w, h);
  out.source_depth = img.source_depth;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      out(x, y) = img(std::min(x, img.width() - 1), std::min(y, img.height() - 1));
    }
  }
  return out;
}

Image binarize(const ProbabilityMap& map, double threshold) {
  return Image((map.values >= threshold).cast<double>());
}

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
  write_grid(img.pixels, img.source_depth == 16 ? 16 : 8, {}, path, format);
}

double write_image(const ProbabilityMap& map, const std::filesystem::path& path,
                   ImageFormat format) {
  const double peak = map.values.size() ? map.values.maxCoeff() : 0.0;
  const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
  std::ostringstream comment;
  comment.precision(17);
  comment << "probability map; pixel = value * " << scale << " (max-normalized)";
  write_grid(map.values * scale, 8, comment.str(), path, format);
  return scale;
}

}  // namespace qwedge
