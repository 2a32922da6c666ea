#include <linae/kernels.hpp>

#include <atomic>
#include <stdexcept>
#include <string>

namespace linae::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(LINAE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
	__builtin_cpu_init();
	return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
	return false;
#endif
}

std::atomic<Isa> &active() {
	static std::atomic<Isa> isa{detected_isa()};
	return isa;
}

} // namespace

std::string_view isa_name(Isa isa) noexcept {
	switch (isa) {
	case Isa::Scalar:
		return "scalar";
	case Isa::Avx2:
		return "avx2";
	}
	return "unknown";
}

Isa detected_isa() noexcept {
	static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
	return isa;
}

Isa active_isa() noexcept {
	return active().load(std::memory_order_relaxed);
}

Isa set_active_isa(Isa isa) {
	if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
		throw std::runtime_error("set_active_isa: avx2 is not available on this CPU/build");
	return active().exchange(isa);
}

SplitMatrix::SplitMatrix(const ComplexMatrix &samples)
    : re_(static_cast<std::size_t>(samples.size())), im_(static_cast<std::size_t>(samples.size())),
      rows_(static_cast<std::size_t>(samples.rows())), len_(static_cast<std::size_t>(samples.cols())) {
	for (Index t = 0; t < samples.cols(); ++t)
		for (Index i = 0; i < samples.rows(); ++i) {
			const std::size_t k = static_cast<std::size_t>(i) * len_ + static_cast<std::size_t>(t);
			re_[k] = samples(i, t).real();
			im_[k] = samples(i, t).imag();
		}
}

ComplexMatrix cross_gram(SplitRows x, SplitRows y, bool hermitian) {
	if (x.len != y.len)
		throw std::invalid_argument("cross_gram: sequence lengths differ");
	if (hermitian && (x.re != y.re || x.im != y.im || x.rows != y.rows))
		throw std::invalid_argument("cross_gram: hermitian mode requires identical operands");

	// Row-major result so that out[i * ny + j] maps to (i, j).
	Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(
	    static_cast<Index>(x.rows), static_cast<Index>(y.rows));
	if (out.size() == 0)
		return out;
	if (active_isa() == Isa::Avx2)
		cross_gram_avx2(x, y, hermitian, out.data());
	else
		cross_gram_scalar(x, y, hermitian, out.data());
	return out;
}

} // namespace linae::kernels
