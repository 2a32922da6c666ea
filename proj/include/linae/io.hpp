#pragma once

#include <linae/covariance.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace linae {

/// Reads samples stored one per row with paired columns x<k>_re,x<k>_im and
/// optionally y<k>_re,y<k>_im. Parsing ignores the locale.
Dataset load_csv(const std::filesystem::path &path);

/// Writes the dataset in the layout load_csv reads, 17 significant digits.
void save_csv(const Dataset &d, const std::filesystem::path &path);

/// MNIST-style IDX images and labels. Pixels become real parts scaled to [0, 1];
/// `digit` and `cap` are applied in file order.
Dataset load_idx_images(const std::filesystem::path &images, const std::filesystem::path &labels,
                        std::optional<int> digit = std::nullopt, std::optional<Index> cap = std::nullopt);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);

/// Shortest round-trippable-by-17-digits formatting used by every emitted file.
std::string format_double(double v);

struct SyntheticSpec {
	enum class Kind { DiagonalSigma, RandomComplex, RandomReal };
	Kind kind = Kind::DiagonalSigma;

	/// DiagonalSigma: requested spectrum of Sigma_XX (positive).
	std::vector<double> eigenvalues;
	/// Samples per eigenvalue for DiagonalSigma.
	Index per_eigenvalue = 8;
	bool allow_duplicates = false;

	/// Random kinds.
	Index n = 0;
	Index m = 0;
	std::uint64_t seed = 0;
	/// Coordinate k is scaled by max(scale_decay^k, scale_floor); 1 leaves the data isotropic.
	double scale_decay = 1.0;
	double scale_floor = 0.0;
};

SyntheticSpec::Kind parse_synthetic_kind(const std::string &name);
std::string synthetic_kind_name(SyntheticSpec::Kind k);

/// Diagonal-sigma data is built from scaled basis vectors, so Sigma_XX equals the
/// requested diagonal up to rounding and the sample mean is zero.
Dataset generate_synthetic(const SyntheticSpec &spec);

} // namespace linae
