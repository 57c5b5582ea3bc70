#include "specmark/transforms.hpp"

#include <cmath>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cd>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        std::vector<cd> tw(len / 2);
        for (size_t j = 0; j < len / 2; ++j)
            tw[j] = cd(std::cos(ang * static_cast<double>(j)), std::sin(ang * static_cast<double>(j)));
        for (size_t i = 0; i < n; i += len) {
            for (size_t j = 0; j < len / 2; ++j) {
                cd u = a[i + j];
                cd w = a[i + j + len / 2] * tw[j];
                a[i + j] = u + w;
                a[i + j + len / 2] = u - w;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cd& x : a) x *= inv;
    }
}

// Chirp-z trick maps an arbitrary length to a power-of-two convolution.
void fft_bluestein(std::vector<cd>& a, bool inverse) {
    const size_t n = a.size();
    size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<cd> chirp(n);
    for (size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the trig argument small without changing the value
        const long long q = static_cast<long long>(k) * static_cast<long long>(k) %
                            (2 * static_cast<long long>(n));
        const double ang = (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(q) /
                           static_cast<double>(n);
        chirp[k] = cd(std::cos(ang), std::sin(ang));
    }

    std::vector<cd> x(m, cd(0.0, 0.0));
    std::vector<cd> y(m, cd(0.0, 0.0));
    for (size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);

    fft_pow2(x, false);
    fft_pow2(y, false);
    for (size_t i = 0; i < m; ++i) x[i] *= y[i];
    fft_pow2(x, true);

    for (size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    if (inverse) {
        const double invn = 1.0 / static_cast<double>(n);
        for (cd& v : a) v *= invn;
    }
}

// Packed 1D DCT-II, orthonormal scaling. Walks a strided view so the same
// routine serves rows and columns.
void dct2_axis(const double* in, double* out, int n, int stride) {
    std::vector<cd> v(n);
    const int half_up = (n + 1) / 2;
    for (int j = 0; j < half_up; ++j) v[j] = in[static_cast<size_t>(2 * j) * stride];
    for (int j = 0; j < n / 2; ++j) v[n - 1 - j] = in[static_cast<size_t>(2 * j + 1) * stride];

    fftutil::fft(v, false);

    const double c0 = std::sqrt(1.0 / n);
    const double ck = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k) {
        const double ang = -kPi * k / (2.0 * n);
        const double s = v[k].real() * std::cos(ang) - v[k].imag() * std::sin(ang);
        out[static_cast<size_t>(k) * stride] = s * (k == 0 ? c0 : ck);
    }
}

// Packed 1D DCT-III, the exact adjoint of dct2_axis.
void dct3_axis(const double* in, double* out, int n, int stride) {
    std::vector<cd> a(n);
    const double c0 = std::sqrt(1.0 / n);
    const double ck = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k) {
        const double ang = kPi * k / (2.0 * n);
        a[k] = in[static_cast<size_t>(k) * stride] * (k == 0 ? c0 : ck) *
               cd(std::cos(ang), std::sin(ang));
    }

    // Unnormalized inverse DFT via conjugation.
    for (cd& z : a) z = std::conj(z);
    fftutil::fft(a, false);

    const int half_up = (n + 1) / 2;
    std::vector<double> tmp(n);
    for (int m = 0; m < n; ++m) tmp[m] = a[m].real();
    for (int j = 0; j < half_up; ++j) out[static_cast<size_t>(2 * j) * stride] = tmp[j];
    for (int j = 0; j < n / 2; ++j) out[static_cast<size_t>(2 * j + 1) * stride] = tmp[n - 1 - j];
}

void require_square(const Plane& p, const char* what) {
    if (p.rows <= 0 || p.cols <= 0)
        throw config_error(std::string(what) + ": plane is empty");
    if (p.rows != p.cols)
        throw config_error(std::string(what) + ": plane must be square");
}

}  // namespace

namespace fftutil {

void fft(std::vector<cd>& a, bool inverse) {
    if (a.empty()) throw config_error("fft of empty vector");
    if (a.size() == 1) return;
    if (is_pow2(a.size()))
        fft_pow2(a, inverse);
    else
        fft_bluestein(a, inverse);
}

}  // namespace fftutil

SubBands haar_decompose(const Plane& p) {
    if (p.rows < 2 || p.cols < 2 || p.rows % 2 != 0 || p.cols % 2 != 0)
        throw config_error("haar_decompose needs even dimensions >= 2");
    const int hr = p.rows / 2, hc = p.cols / 2;
    SubBands b{Plane(hr, hc), Plane(hr, hc), Plane(hr, hc), Plane(hr, hc)};
    for (int i = 0; i < hr; ++i) {
        for (int j = 0; j < hc; ++j) {
            const double a = p.at(2 * i, 2 * j);
            const double bb = p.at(2 * i, 2 * j + 1);
            const double c = p.at(2 * i + 1, 2 * j);
            const double d = p.at(2 * i + 1, 2 * j + 1);
            b.ll.at(i, j) = 0.5 * (a + bb + c + d);
            b.lh.at(i, j) = 0.5 * (a - bb + c - d);
            b.hl.at(i, j) = 0.5 * (a + bb - c - d);
            b.hh.at(i, j) = 0.5 * (a - bb - c + d);
        }
    }
    return b;
}

Plane haar_reconstruct(const SubBands& b) {
    const int hr = b.ll.rows, hc = b.ll.cols;
    auto same = [&](const Plane& q) { return q.rows == hr && q.cols == hc; };
    if (hr <= 0 || hc <= 0 || !same(b.lh) || !same(b.hl) || !same(b.hh))
        throw config_error("haar_reconstruct: band shapes disagree");
    Plane p(hr * 2, hc * 2);
    for (int i = 0; i < hr; ++i) {
        for (int j = 0; j < hc; ++j) {
            const double ll = b.ll.at(i, j), lh = b.lh.at(i, j);
            const double hl = b.hl.at(i, j), hh = b.hh.at(i, j);
            p.at(2 * i, 2 * j) = 0.5 * (ll + lh + hl + hh);
            p.at(2 * i, 2 * j + 1) = 0.5 * (ll - lh + hl - hh);
            p.at(2 * i + 1, 2 * j) = 0.5 * (ll + lh - hl - hh);
            p.at(2 * i + 1, 2 * j + 1) = 0.5 * (ll - lh - hl + hh);
        }
    }
    return p;
}

Plane pad_to_even(const Plane& p) {
    if (p.rows <= 0 || p.cols <= 0) throw config_error("pad_to_even: plane is empty");
    const int r = p.rows + (p.rows % 2);
    const int c = p.cols + (p.cols % 2);
    if (r == p.rows && c == p.cols) return p;
    Plane out(r, c);
    for (int i = 0; i < r; ++i) {
        const int si = i < p.rows ? i : p.rows - 1;
        for (int j = 0; j < c; ++j) {
            const int sj = j < p.cols ? j : p.cols - 1;
            out.at(i, j) = p.at(si, sj);
        }
    }
    return out;
}

Plane dct2d_mirror(const Plane& p) {
    require_square(p, "dct2d_mirror");
    const int n = p.rows;
    const int n2 = 2 * n;

    // Top-left quadrant is the plane itself, the rest are its reflections.
    std::vector<std::vector<cd>> grid(n2, std::vector<cd>(n2));
    auto mirror = [n, n2](int t) { return t < n ? t : n2 - 1 - t; };
    for (int y = 0; y < n2; ++y)
        for (int x = 0; x < n2; ++x)
            grid[y][x] = cd(p.at(mirror(y), mirror(x)), 0.0);

    for (int y = 0; y < n2; ++y) fftutil::fft(grid[y], false);
    std::vector<cd> col(n2);
    for (int x = 0; x < n2; ++x) {
        for (int y = 0; y < n2; ++y) col[y] = grid[y][x];
        fftutil::fft(col, false);
        for (int y = 0; y < n2; ++y) grid[y][x] = col[y];
    }

    // The extension is symmetric about half-sample centers, so each bin carries
    // a residual half-sample phase. Rotating it away leaves the plain cosine
    // sum, which the orthonormal weights then scale.
    const double c0 = std::sqrt(1.0 / n);
    const double ck = std::sqrt(2.0 / n);
    Plane out(n, n);
    for (int u = 0; u < n; ++u) {
        for (int w = 0; w < n; ++w) {
            const double ang = -kPi * (u + w) / static_cast<double>(n2);
            const cd rot(std::cos(ang), std::sin(ang));
            const double s = (grid[u][w] * rot).real() * 0.25;
            out.at(u, w) = s * (u == 0 ? c0 : ck) * (w == 0 ? c0 : ck);
        }
    }
    return out;
}

Plane dct2d_packed(const Plane& p) {
    require_square(p, "dct2d_packed");
    const int n = p.rows;
    Plane tmp(n, n), out(n, n);
    for (int r = 0; r < n; ++r) dct2_axis(&p.v[static_cast<size_t>(r) * n], &tmp.v[static_cast<size_t>(r) * n], n, 1);
    for (int c = 0; c < n; ++c) dct2_axis(&tmp.v[c], &out.v[c], n, n);
    return out;
}

Plane idct2d(const Plane& p) {
    require_square(p, "idct2d");
    const int n = p.rows;
    Plane tmp(n, n), out(n, n);
    for (int c = 0; c < n; ++c) dct3_axis(&p.v[c], &tmp.v[c], n, n);
    for (int r = 0; r < n; ++r) dct3_axis(&tmp.v[static_cast<size_t>(r) * n], &out.v[static_cast<size_t>(r) * n], n, 1);
    return out;
}

int decomposition_depth(long long sample_count) {
    if (sample_count < 1) throw config_error("decomposition_depth: sample count must be >= 1");
    const double d = std::floor(std::sqrt(std::log1p(static_cast<double>(sample_count))));
    return d < 1.0 ? 1 : static_cast<int>(d);
}

std::vector<std::pair<int, int>> segment_bands(int length, int depth) {
    if (length < 1) throw config_error("segment_bands: length must be >= 1");
    if (depth < 1 || depth > length) throw config_error("segment_bands: depth must be in [1, length]");
    std::vector<std::pair<int, int>> out;
    out.reserve(depth);
    for (int j = 0; j < depth; ++j) {
        const int lo = static_cast<int>(static_cast<long long>(j) * length / depth);
        const int hi = static_cast<int>(static_cast<long long>(j + 1) * length / depth);
        out.emplace_back(lo, hi);
    }
    return out;
}

}  // namespace specmark
