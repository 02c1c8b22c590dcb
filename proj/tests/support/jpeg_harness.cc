// Copyright 2026 The jpegfp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/jpeg_harness.h"

#include <algorithm>
#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

#include <jpeglib.h>
#include <png.h>

namespace jpegfp::testing {

namespace {

struct ErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void OnError(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void OnOutputMessage(j_common_ptr) {}

void InstallErrorManager(jpeg_common_struct* cinfo, ErrorManager* err) {
  cinfo->err = jpeg_std_error(&err->pub);
  err->pub.error_exit = OnError;
  err->pub.output_message = OnOutputMessage;
  err->message[0] = '\0';
}

}  // namespace

const std::array<int, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

Image LoadPng(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw std::runtime_error("cannot read PNG " + path + ": " + png.message);
  }
  const bool gray = (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
  png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  Image image;
  image.width = static_cast<int>(png.width);
  image.height = static_cast<int>(png.height);
  image.channels = gray ? 1 : 3;
  image.pixels.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw std::runtime_error("cannot decode PNG " + path + ": " + png.message);
  }
  return image;
}

Image MakeTestPattern(int width, int height, int channels) {
  Image image{width, height, channels, {}};
  image.pixels.resize(static_cast<size_t>(width) * height * channels);
  uint32_t state = 12345;
  size_t i = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        state = state * 1103515245u + 12345u;
        const int noise = static_cast<int>((state >> 16) % 23) - 11;
        const int base = (x * 255 / std::max(1, width - 1) * (c + 1) +
                          y * 255 / std::max(1, height - 1) * (3 - c)) / 4;
        image.pixels[i++] = static_cast<uint8_t>(std::clamp(base + noise, 0, 255));
      }
    }
  }
  return image;
}

std::vector<uint8_t> EncodeJpeg(const Image& image, const EncodeOptions& options) {
  jpeg_compress_struct cinfo{};
  ErrorManager err;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  InstallErrorManager(reinterpret_cast<jpeg_common_struct*>(&cinfo), &err);
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw std::runtime_error(std::string("libjpeg encode failed: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = image.channels;
  cinfo.in_color_space = image.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, options.quality, TRUE);
  cinfo.optimize_coding = options.optimize_coding ? TRUE : FALSE;
  cinfo.restart_interval = static_cast<unsigned int>(options.restart_interval);
  if (image.channels == 3) {
    cinfo.comp_info[0].h_samp_factor = options.luma_h;
    cinfo.comp_info[0].v_samp_factor = options.luma_v;
    for (int c = 1; c < 3; ++c) {
      cinfo.comp_info[c].h_samp_factor = 1;
      cinfo.comp_info[c].v_samp_factor = 1;
    }
  }
  if (options.progressive) jpeg_simple_progression(&cinfo);
  jpeg_start_compress(&cinfo, TRUE);
  const size_t stride = static_cast<size_t>(image.width) * image.channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(image.pixels.data() +
                                        cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::vector<uint8_t> out(buffer, buffer + size);
  std::free(buffer);
  return out;
}

DecodeResult DecodeJpeg(std::span<const uint8_t> jpeg) {
  jpeg_decompress_struct cinfo{};
  ErrorManager err;
  DecodeResult result;
  std::vector<uint8_t> pixels;
  InstallErrorManager(reinterpret_cast<jpeg_common_struct*>(&cinfo), &err);
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    result.ok = false;
    result.message = err.message;
    return result;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, jpeg.data(), static_cast<unsigned long>(jpeg.size()));
  jpeg_read_header(&cinfo, TRUE);
  jpeg_start_decompress(&cinfo);
  const size_t stride =
      static_cast<size_t>(cinfo.output_width) * cinfo.output_components;
  pixels.resize(stride * cinfo.output_height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW ptr = pixels.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &ptr, 1);
  }
  jpeg_finish_decompress(&cinfo);
  result.ok = true;
  result.warnings = static_cast<int>(err.pub.num_warnings);
  result.width = static_cast<int>(cinfo.output_width);
  result.height = static_cast<int>(cinfo.output_height);
  result.image = {result.width, result.height, cinfo.output_components,
                  std::move(pixels)};
  jpeg_destroy_decompress(&cinfo);
  return result;
}

void WritePng(const Image& image, const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0,
                               nullptr)) {
    throw std::runtime_error("cannot write PNG " + path + ": " + png.message);
  }
}

double Psnr(const Image& a, const Image& b) {
  if (a.pixels.size() != b.pixels.size() || a.pixels.empty()) {
    throw std::runtime_error("PSNR of differently sized images");
  }
  double sum = 0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.pixels.size());
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<ComponentCoefficients> ReadCoefficients(std::span<const uint8_t> jpeg) {
  jpeg_decompress_struct cinfo{};
  ErrorManager err;
  std::vector<ComponentCoefficients> out;
  InstallErrorManager(reinterpret_cast<jpeg_common_struct*>(&cinfo), &err);
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error(std::string("libjpeg coefficient read failed: ") +
                             err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, jpeg.data(), static_cast<unsigned long>(jpeg.size()));
  jpeg_read_header(&cinfo, TRUE);
  jvirt_barray_ptr* arrays = jpeg_read_coefficients(&cinfo);
  out.resize(static_cast<size_t>(cinfo.num_components));
  for (int c = 0; c < cinfo.num_components; ++c) {
    const jpeg_component_info& comp = cinfo.comp_info[c];
    ComponentCoefficients& cc = out[static_cast<size_t>(c)];
    cc.width_in_blocks = static_cast<int>(comp.width_in_blocks);
    cc.height_in_blocks = static_cast<int>(comp.height_in_blocks);
    cc.blocks.resize(static_cast<size_t>(cc.width_in_blocks) * cc.height_in_blocks);
    for (int by = 0; by < cc.height_in_blocks; ++by) {
      JBLOCKARRAY rows = (*cinfo.mem->access_virt_barray)(
          reinterpret_cast<j_common_ptr>(&cinfo), arrays[c],
          static_cast<JDIMENSION>(by), 1, FALSE);
      for (int bx = 0; bx < cc.width_in_blocks; ++bx) {
        auto& dst = cc.blocks[static_cast<size_t>(by) * cc.width_in_blocks + bx];
        for (int k = 0; k < 64; ++k) dst[k] = rows[0][bx][k];
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

std::string DataDir() { return JPEGFP_TEST_DATA_DIR; }

std::vector<uint8_t> ReadBinary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

const std::vector<std::string>& CorpusImageNames() {
  static const std::vector<std::string> names = {
      "astronaut", "chelsea", "coffee", "hopper", "hubble",
      "ihc",       "motorcycle", "retina", "rocket"};
  return names;
}

const std::vector<CorpusFile>& BaselineCorpus() {
  static const std::vector<CorpusFile> corpus = [] {
    std::vector<CorpusFile> files;
    for (const std::string& name : CorpusImageNames()) {
      const Image image = LoadPng(DataDir() + "/images/" + name + ".png");
      for (int q : {50, 80, 95}) {
        EncodeOptions options;
        options.quality = q;
        files.push_back({name, q, EncodeJpeg(image, options)});
      }
    }
    return files;
  }();
  return corpus;
}

const std::vector<CorpusFile>& VariantCorpus() {
  static const std::vector<CorpusFile> corpus = [] {
    std::vector<CorpusFile> files;
    auto add = [&files](const std::string& label, const Image& image,
                        EncodeOptions options) {
      files.push_back({label, options.quality, EncodeJpeg(image, options)});
    };
    const std::string dir = DataDir() + "/images/";
    const Image astronaut = LoadPng(dir + "astronaut.png");
    const Image camera = LoadPng(dir + "camera.png");
    const Image coffee = LoadPng(dir + "coffee.png");
    const Image chelsea = LoadPng(dir + "chelsea.png");
    const Image rocket = LoadPng(dir + "rocket.png");

    add("astronaut-rst1", astronaut, {.quality = 80, .restart_interval = 1});
    add("astronaut-rst7", astronaut, {.quality = 95, .restart_interval = 7});
    add("camera-gray", camera, {.quality = 80});
    add("camera-gray-rst5", camera, {.quality = 50, .restart_interval = 5});
    add("coffee-444", coffee, {.quality = 80, .luma_h = 1, .luma_v = 1});
    add("coffee-422", coffee, {.quality = 90, .luma_h = 2, .luma_v = 1});
    add("coffee-440", coffee, {.quality = 70, .luma_h = 1, .luma_v = 2});
    add("chelsea-rst3", chelsea, {.quality = 85, .restart_interval = 3});
    add("rocket-optimized", rocket, {.quality = 90, .optimize_coding = true});
    add("pattern-17x9", MakeTestPattern(17, 9, 3), {.quality = 75});
    add("pattern-1x1", MakeTestPattern(1, 1, 3), {.quality = 100});
    add("pattern-gray-8x8", MakeTestPattern(8, 8, 1), {.quality = 60});
    add("pattern-q100", MakeTestPattern(96, 64, 3), {.quality = 100});
    return files;
  }();
  return corpus;
}

}  // namespace jpegfp::testing
