#include "common.hpp"

namespace linae::kernels {

void cross_gram_scalar(SplitRows x, SplitRows y, bool hermitian, Complex *out) {
	const std::size_t len = x.len;
	for (std::size_t i = 0; i < x.rows; ++i) {
		const double *xr = x.re + i * len;
		const double *xi = x.im + i * len;
		for (std::size_t j = hermitian ? i : 0; j < y.rows; ++j) {
			const double *yr = y.re + j * len;
			const double *yi = y.im + j * len;
			double re = 0.0;
			double im = 0.0;
			for (std::size_t t = 0; t < len; ++t) {
				re += xr[t] * yr[t] + xi[t] * yi[t];
				im += xi[t] * yr[t] - xr[t] * yi[t];
			}
			out[i * y.rows + j] = Complex(re, im);
		}
	}
	if (hermitian)
		detail::mirror_lower(x.rows, out);
}

} // namespace linae::kernels
