#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace specmark {

// 2D array of doubles, row-major.
struct Plane {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(int r, int c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
};

struct SubBands {
    Plane ll;  // averages
    Plane lh;  // horizontal detail
    Plane hl;  // vertical detail
    Plane hh;  // diagonal detail
};

// Single-level orthonormal Haar split. Requires even dimensions >= 2.
// Each band is (rows/2) x (cols/2) and total energy is preserved exactly.
SubBands haar_decompose(const Plane& p);

// Exact inverse of haar_decompose.
Plane haar_reconstruct(const SubBands& b);

// Duplicates the last row and/or column when a dimension is odd.
Plane pad_to_even(const Plane& p);

// Orthonormal 2D DCT-II of a square plane. Two constructions that must agree
// to machine precision: one goes through the FFT of a 2Nx2N mirror extension,
// the other through an even/odd packed FFT per axis. Both are energy
// preserving, so idct2d is simultaneously their inverse and their adjoint.
Plane dct2d_mirror(const Plane& p);
Plane dct2d_packed(const Plane& p);
Plane idct2d(const Plane& p);

// Heuristic decomposition depth for a plane with the given sample count.
int decomposition_depth(long long sample_count);

// Splits [0, length) into depth contiguous half-open index intervals.
std::vector<std::pair<int, int>> segment_bands(int length, int depth);

namespace fftutil {
// In-place complex FFT for any length >= 1. The inverse applies the 1/n
// factor. Radix-2 for powers of two, Bluestein otherwise.
void fft(std::vector<std::complex<double>>& a, bool inverse);
}  // namespace fftutil

}  // namespace specmark
