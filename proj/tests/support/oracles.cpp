#include "support/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracles {

std::vector<double> naive_outer_add(const orls::SymmetricMatrix& q, const orls::DenseVector& a) {
  const std::size_t n = q.order();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = q.at(i, j) + a[i] * a[j];
    }
  }
  return out;
}

orls::DenseVector gauss_solve(std::vector<double> a, orls::DenseVector b) {
  const std::size_t n = b.dim();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    }
    if (a[pivot * n + col] == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      b[row] -= f * b[col];
    }
  }
  orls::DenseVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= a[ii * n + k] * x[k];
    x[ii] = acc / a[ii * n + ii];
  }
  return x;
}

std::vector<double> naive_inverse(const orls::SymmetricMatrix& a) {
  const std::size_t n = a.order();
  // Augmented [A | I], eliminated to [I | A^-1].
  std::vector<double> aug(n * 2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i * 2 * n + j] = a.at(i, j);
    aug[i * 2 * n + n + i] = 1.0;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(aug[row * 2 * n + col]) > std::abs(aug[pivot * 2 * n + col])) pivot = row;
    }
    if (aug[pivot * 2 * n + col] == 0.0) throw std::runtime_error("naive_inverse: singular");
    if (pivot != col) {
      for (std::size_t k = 0; k < 2 * n; ++k) {
        std::swap(aug[col * 2 * n + k], aug[pivot * 2 * n + k]);
      }
    }
    const double d = aug[col * 2 * n + col];
    for (std::size_t k = 0; k < 2 * n; ++k) aug[col * 2 * n + k] /= d;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double f = aug[row * 2 * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < 2 * n; ++k) aug[row * 2 * n + k] -= f * aug[col * 2 * n + k];
    }
  }
  std::vector<double> inv(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i * n + j] = aug[i * 2 * n + n + j];
  }
  return inv;
}

double naive_psnr(const orls::ImagePlane& reference, const orls::ImagePlane& test) {
  double sq = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < reference.height; ++y) {
    for (int x = 0; x < reference.width; ++x) {
      for (int c = 0; c < reference.channels; ++c) {
        const double d = reference.at(x, y, c) - test.at(x, y, c);
        sq += d * d;
        ++count;
      }
    }
  }
  const double mse = sq / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference.peak * reference.peak / mse);
}

double naive_ssim(const orls::ImagePlane& reference, const orls::ImagePlane& test) {
  // Same pinned convention (8x8 non-overlapping uniform windows, population
  // statistics) but computed from raw moments instead of centered sums.
  const int w = 8;
  const double c1 = 0.01 * reference.peak * 0.01 * reference.peak;
  const double c2 = 0.03 * reference.peak * 0.03 * reference.peak;
  const double n = 64.0;
  double channel_acc = 0.0;
  for (int ch = 0; ch < reference.channels; ++ch) {
    double acc = 0.0;
    int blocks = 0;
    for (int by = 0; by + w <= reference.height; by += w) {
      for (int bx = 0; bx + w <= reference.width; bx += w) {
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < w; ++i) {
          for (int j = 0; j < w; ++j) {
            const double xv = reference.at(bx + j, by + i, ch);
            const double yv = test.at(bx + j, by + i, ch);
            sx += xv;
            sy += yv;
            sxx += xv * xv;
            syy += yv * yv;
            sxy += xv * yv;
          }
        }
        const double mx = sx / n, my = sy / n;
        const double vx = sxx / n - mx * mx;
        const double vy = syy / n - my * my;
        const double cov = sxy / n - mx * my;
        acc += ((2 * mx * my + c1) * (2 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++blocks;
      }
    }
    channel_acc += acc / blocks;
  }
  return channel_acc / reference.channels;
}

orls::DenseVector random_vector(std::mt19937_64& gen, std::size_t n, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  orls::DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

orls::SymmetricMatrix random_spd(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> b(n * n);
  for (double& v : b) v = dist(gen);
  orls::SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = i == j ? 1.0 : 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += b[i * n + k] * b[j * n + k];
      m.set(i, j, acc);
    }
  }
  return m;
}

orls::ImagePlane random_image(std::mt19937_64& gen, int width, int height, int channels) {
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  orls::ImagePlane img(width, height, channels, 255.0);
  for (double& v : img.samples) v = dist(gen);
  return img;
}

}  // namespace oracles
