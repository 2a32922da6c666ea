#pragma once

// Sample-accumulation kernels. Each kernel has a portable scalar reference
// and an AVX2+FMA variant; the variant is chosen once at runtime from CPUID
// and can be overridden for equivalence testing.

#include <linae/types.hpp>

#include <cstddef>
#include <string_view>
#include <vector>

namespace linae::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set supported by both the build and the running CPU.
Isa detected_isa() noexcept;

/// Instruction set currently used by the dispatched entry points.
Isa active_isa() noexcept;

/// Switch dispatch; returns the previous value. Throws if `isa` is unavailable.
Isa set_active_isa(Isa isa);

/// Non-owning view of `rows` complex sequences of length `len`, stored as split
/// real/imaginary planes with row stride `len`.
struct SplitRows {
	const double *re = nullptr;
	const double *im = nullptr;
	std::size_t rows = 0;
	std::size_t len = 0;
};

/// Owning split storage. Built from an n x m sample matrix (one sample per
/// column), so row i holds coordinate i of every sample contiguously.
class SplitMatrix {
public:
	SplitMatrix() = default;
	explicit SplitMatrix(const ComplexMatrix &samples);

	SplitRows view() const noexcept { return {re_.data(), im_.data(), rows_, len_}; }

private:
	std::vector<double> re_;
	std::vector<double> im_;
	std::size_t rows_ = 0;
	std::size_t len_ = 0;
};

// out[i * y.rows + j] = sum_t x_i[t] * conj(y_j[t]).
// With `hermitian` set, x and y must be the same rows; only j >= i is
// accumulated, the strict lower triangle is mirrored, and the diagonal is
// stored with an exactly zero imaginary part.
void cross_gram_scalar(SplitRows x, SplitRows y, bool hermitian, Complex *out);
void cross_gram_avx2(SplitRows x, SplitRows y, bool hermitian, Complex *out);

/// Dispatched cross_gram returning an Eigen matrix (x.rows x y.rows).
ComplexMatrix cross_gram(SplitRows x, SplitRows y, bool hermitian);

} // namespace linae::kernels
