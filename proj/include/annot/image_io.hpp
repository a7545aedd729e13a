#pragma once

#include <csetjmp>
#include <cstddef>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "annot/errors.hpp"
#include "annot/raster.hpp"

namespace annot {

namespace detail {

struct JpegErrorMgr {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  bool corrupt = false;
};

inline void jpeg_error_exit_cb(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

// msg_level -1 is libjpeg's corrupt-data warning. Decoding is strict:
// a corrupt (e.g. truncated) file fails instead of yielding padded pixels.
inline void jpeg_emit_message_cb(j_common_ptr cinfo, int msg_level) {
  if (msg_level < 0) {
    reinterpret_cast<JpegErrorMgr*>(cinfo->err)->corrupt = true;
  }
}

inline RasterImage decode_jpeg(std::span<const unsigned char> bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit_cb;
  err.mgr.emit_message = jpeg_emit_message_cb;

  RasterImage img;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError("invalid JPEG data");
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  img.width = static_cast<int>(cinfo.output_width);
  img.height = static_cast<int>(cinfo.output_height);
  img.space = ColorSpace::Rgb;
  img.samples.resize(img.pixel_count() * 3);

  const JDIMENSION stride = cinfo.output_width * cinfo.output_components;
  JSAMPARRAY row = (*cinfo.mem->alloc_sarray)(
      reinterpret_cast<j_common_ptr>(&cinfo), JPOOL_IMAGE, stride, 1);
  while (cinfo.output_scanline < cinfo.output_height) {
    const JDIMENSION y = cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, row, 1);
    double* dst = img.samples.data() + static_cast<std::size_t>(y) * img.width * 3;
    for (JDIMENSION i = 0; i < stride; ++i) dst[i] = row[0][i];
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  if (err.corrupt) throw DecodeError("corrupt JPEG data");
  return img;
}

inline RasterImage decode_png(std::span<const unsigned char> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;

  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw DecodeError(std::string("invalid PNG data: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;  // palettes expanded, alpha removed, 8-bit

  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("invalid PNG data: " + msg);
  }

  RasterImage img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.space = ColorSpace::Rgb;
  img.samples.resize(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.samples.size(); ++i) img.samples[i] = buffer[i];
  return img;
}

}  // namespace detail

/// Decode a PNG or JPEG byte stream into an RGB image. Deterministic for
/// identical input bytes; throws DecodeError on anything malformed.
inline RasterImage decode_image(std::span<const unsigned char> bytes) {
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0) {
    return detail::decode_png(bytes);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    return detail::decode_jpeg(bytes);
  }
  throw DecodeError("unsupported image format (only PNG and JPEG are accepted)");
}

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

inline RasterImage load_image(const std::filesystem::path& path) {
  return decode_image(read_file_bytes(path));
}

}  // namespace annot
