#pragma once

// Independent brute-force oracles used to pin expected values. Everything in
// here deliberately avoids the library's computation paths: plain loops,
// Gaussian elimination, raw-moment statistics.

#include <random>
#include <vector>

#include "orls/image.hpp"
#include "orls/linalg.hpp"

namespace oracles {

// Full row-major Q + a a^T by a naive double loop.
std::vector<double> naive_outer_add(const orls::SymmetricMatrix& q, const orls::DenseVector& a);

// Gaussian elimination with partial pivoting on a full row-major matrix.
orls::DenseVector gauss_solve(std::vector<double> a, orls::DenseVector b);

// Gauss-Jordan inverse of a symmetric matrix, returned row-major.
std::vector<double> naive_inverse(const orls::SymmetricMatrix& a);

double naive_psnr(const orls::ImagePlane& reference, const orls::ImagePlane& test);
double naive_ssim(const orls::ImagePlane& reference, const orls::ImagePlane& test);

// Test-data helpers (std::mt19937_64 is fine here; reproducibility across
// platforms is not required for tolerance-based checks).
orls::DenseVector random_vector(std::mt19937_64& gen, std::size_t n, double scale = 1.0);
orls::SymmetricMatrix random_spd(std::mt19937_64& gen, std::size_t n);  // B B^T + I
orls::ImagePlane random_image(std::mt19937_64& gen, int width, int height, int channels);

}  // namespace oracles
