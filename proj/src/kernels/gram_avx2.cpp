#include "common.hpp"

#include <stdexcept>

#if defined(LINAE_HAVE_AVX2_TU)
#include <immintrin.h>
#endif

namespace linae::kernels {

#if defined(LINAE_HAVE_AVX2_TU)

namespace {

inline double hsum(__m256d v) {
	const __m128d lo = _mm256_castpd256_pd128(v);
	const __m128d hi = _mm256_extractf128_pd(v, 1);
	const __m128d s = _mm_add_pd(lo, hi);
	return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

struct Row {
	const double *re;
	const double *im;
};

// One (x-row, y-row) pair.
inline Complex dot1(Row x, Row y, std::size_t len) {
	__m256d acc_re = _mm256_setzero_pd();
	__m256d acc_im = _mm256_setzero_pd();
	std::size_t t = 0;
	for (; t + 4 <= len; t += 4) {
		const __m256d xr = _mm256_loadu_pd(x.re + t);
		const __m256d xi = _mm256_loadu_pd(x.im + t);
		const __m256d yr = _mm256_loadu_pd(y.re + t);
		const __m256d yi = _mm256_loadu_pd(y.im + t);
		acc_re = _mm256_fmadd_pd(xr, yr, acc_re);
		acc_re = _mm256_fmadd_pd(xi, yi, acc_re);
		acc_im = _mm256_fmadd_pd(xi, yr, acc_im);
		acc_im = _mm256_fnmadd_pd(xr, yi, acc_im);
	}
	double re = hsum(acc_re);
	double im = hsum(acc_im);
	for (; t < len; ++t) {
		re += x.re[t] * y.re[t] + x.im[t] * y.im[t];
		im += x.im[t] * y.re[t] - x.re[t] * y.im[t];
	}
	return {re, im};
}

// 2x2 register block: rows x0, x1 against y0, y1; each loaded vector feeds two pairs.
inline void dot2x2(Row x0, Row x1, Row y0, Row y1, std::size_t len, Complex r[4]) {
	__m256d re00 = _mm256_setzero_pd(), im00 = _mm256_setzero_pd();
	__m256d re01 = _mm256_setzero_pd(), im01 = _mm256_setzero_pd();
	__m256d re10 = _mm256_setzero_pd(), im10 = _mm256_setzero_pd();
	__m256d re11 = _mm256_setzero_pd(), im11 = _mm256_setzero_pd();
	std::size_t t = 0;
	for (; t + 4 <= len; t += 4) {
		const __m256d ar = _mm256_loadu_pd(x0.re + t), ai = _mm256_loadu_pd(x0.im + t);
		const __m256d br = _mm256_loadu_pd(x1.re + t), bi = _mm256_loadu_pd(x1.im + t);
		const __m256d cr = _mm256_loadu_pd(y0.re + t), ci = _mm256_loadu_pd(y0.im + t);
		const __m256d dr = _mm256_loadu_pd(y1.re + t), di = _mm256_loadu_pd(y1.im + t);

		re00 = _mm256_fmadd_pd(ar, cr, re00);
		re00 = _mm256_fmadd_pd(ai, ci, re00);
		im00 = _mm256_fmadd_pd(ai, cr, im00);
		im00 = _mm256_fnmadd_pd(ar, ci, im00);

		re01 = _mm256_fmadd_pd(ar, dr, re01);
		re01 = _mm256_fmadd_pd(ai, di, re01);
		im01 = _mm256_fmadd_pd(ai, dr, im01);
		im01 = _mm256_fnmadd_pd(ar, di, im01);

		re10 = _mm256_fmadd_pd(br, cr, re10);
		re10 = _mm256_fmadd_pd(bi, ci, re10);
		im10 = _mm256_fmadd_pd(bi, cr, im10);
		im10 = _mm256_fnmadd_pd(br, ci, im10);

		re11 = _mm256_fmadd_pd(br, dr, re11);
		re11 = _mm256_fmadd_pd(bi, di, re11);
		im11 = _mm256_fmadd_pd(bi, dr, im11);
		im11 = _mm256_fnmadd_pd(br, di, im11);
	}
	double s[8] = {hsum(re00), hsum(im00), hsum(re01), hsum(im01),
	               hsum(re10), hsum(im10), hsum(re11), hsum(im11)};
	for (; t < len; ++t) {
		s[0] += x0.re[t] * y0.re[t] + x0.im[t] * y0.im[t];
		s[1] += x0.im[t] * y0.re[t] - x0.re[t] * y0.im[t];
		s[2] += x0.re[t] * y1.re[t] + x0.im[t] * y1.im[t];
		s[3] += x0.im[t] * y1.re[t] - x0.re[t] * y1.im[t];
		s[4] += x1.re[t] * y0.re[t] + x1.im[t] * y0.im[t];
		s[5] += x1.im[t] * y0.re[t] - x1.re[t] * y0.im[t];
		s[6] += x1.re[t] * y1.re[t] + x1.im[t] * y1.im[t];
		s[7] += x1.im[t] * y1.re[t] - x1.re[t] * y1.im[t];
	}
	r[0] = {s[0], s[1]};
	r[1] = {s[2], s[3]};
	r[2] = {s[4], s[5]};
	r[3] = {s[6], s[7]};
}

} // namespace

void cross_gram_avx2(SplitRows x, SplitRows y, bool hermitian, Complex *out) {
	const std::size_t len = x.len;
	const std::size_t ny = y.rows;
	auto xrow = [&](std::size_t i) { return Row{x.re + i * len, x.im + i * len}; };
	auto yrow = [&](std::size_t j) { return Row{y.re + j * len, y.im + j * len}; };

	std::size_t i = 0;
	for (; i + 2 <= x.rows; i += 2) {
		std::size_t j = hermitian ? i : 0;
		for (; j + 2 <= ny; j += 2) {
			Complex r[4];
			dot2x2(xrow(i), xrow(i + 1), yrow(j), yrow(j + 1), len, r);
			out[i * ny + j] = r[0];
			out[i * ny + j + 1] = r[1];
			out[(i + 1) * ny + j] = r[2];
			out[(i + 1) * ny + j + 1] = r[3];
		}
		for (; j < ny; ++j) {
			out[i * ny + j] = dot1(xrow(i), yrow(j), len);
			out[(i + 1) * ny + j] = dot1(xrow(i + 1), yrow(j), len);
		}
	}
	for (; i < x.rows; ++i)
		for (std::size_t j = hermitian ? i : 0; j < ny; ++j)
			out[i * ny + j] = dot1(xrow(i), yrow(j), len);

	if (hermitian)
		detail::mirror_lower(x.rows, out);
}

#else

void cross_gram_avx2(SplitRows, SplitRows, bool, Complex *) {
	throw std::logic_error("cross_gram_avx2: not compiled for this target");
}

#endif

} // namespace linae::kernels
