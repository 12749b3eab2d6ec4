#include "orls/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "orls/rng.hpp"

namespace orls {

namespace {

// Next whitespace-delimited token, skipping '#' comments per the netpbm spec.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      token.push_back(static_cast<char>(c));
      while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
      }
      if (c == '#') in.unget();
      return token;
    }
  }
  return token;
}

int parse_header_int(std::istream& in, const char* field) {
  const std::string token = next_token(in);
  if (token.empty()) throw DataError(std::string("image header: missing ") + field);
  try {
    const int value = std::stoi(token);
    if (value <= 0) throw DataError(std::string("image header: non-positive ") + field);
    return value;
  } catch (const std::invalid_argument&) {
    throw DataError(std::string("image header: malformed ") + field);
  } catch (const std::out_of_range&) {
    throw DataError(std::string("image header: out-of-range ") + field);
  }
}

}  // namespace

ImagePlane load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_image: cannot open " + path.string());

  const std::string magic = next_token(in);
  int channels;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw DataError("load_image: unsupported format '" + magic + "' in " + path.string());
  }

  const int width = parse_header_int(in, "width");
  const int height = parse_header_int(in, "height");
  const int maxval = parse_header_int(in, "maxval");
  if (maxval > 255) {
    throw DataError("load_image: only 8-bit images are supported (maxval " +
                    std::to_string(maxval) + ")");
  }
  in.get();  // single whitespace byte after maxval

  ImagePlane image(width, height, channels, static_cast<double>(maxval));
  std::vector<std::uint8_t> raw(image.sample_count());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw DataError("load_image: truncated pixel data in " + path.string());
  }
  for (std::size_t i = 0; i < raw.size(); ++i) image.samples[i] = static_cast<double>(raw[i]);
  return image;
}

void save_image(const ImagePlane& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw DataError("save_image: channels must be 1 or 3");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_image: cannot open " + path.string());

  const int maxval = static_cast<int>(std::lround(image.peak));
  out << (image.channels == 1 ? "P5" : "P6") << "\n"
      << image.width << " " << image.height << "\n"
      << maxval << "\n";

  std::vector<std::uint8_t> raw(image.sample_count());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(image.samples[i], 0.0, image.peak);
    raw[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw DataError("save_image: write failed for " + path.string());
}

ImagePlane add_gaussian_noise(const ImagePlane& image, double sigma, std::uint64_t seed) {
  ImagePlane noisy = image;
  if (sigma <= 0.0) return noisy;
  for (std::size_t i = 0; i < noisy.samples.size(); ++i) {
    noisy.samples[i] += sigma * rng::gaussian(seed, i + 1);
  }
  return noisy;
}

ImagePlane crop_to_multiple(const ImagePlane& image, int multiple) {
  if (multiple <= 0) throw DataError("crop_to_multiple: multiple must be positive");
  const int w = (image.width / multiple) * multiple;
  const int h = (image.height / multiple) * multiple;
  if (w <= 0 || h <= 0) {
    throw DataError("crop_to_multiple: image smaller than one multiple");
  }
  if (w == image.width && h == image.height) return image;
  ImagePlane cropped(w, h, image.channels, image.peak);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        cropped.at(x, y, c) = image.at(x, y, c);
      }
    }
  }
  return cropped;
}

ImagePlane quantize(const ImagePlane& image) {
  ImagePlane q = image;
  for (double& v : q.samples) {
    v = static_cast<double>(std::lround(std::clamp(v, 0.0, image.peak)));
  }
  return q;
}

}  // namespace orls
