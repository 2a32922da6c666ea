#pragma once

#include <linae/kernels.hpp>

namespace linae::kernels::detail {

// Completes a Hermitian result from its upper triangle.
inline void mirror_lower(std::size_t n, Complex *out) {
	for (std::size_t i = 0; i < n; ++i) {
		out[i * n + i] = Complex(out[i * n + i].real(), 0.0);
		for (std::size_t j = 0; j < i; ++j)
			out[i * n + j] = std::conj(out[j * n + i]);
	}
}

} // namespace linae::kernels::detail
