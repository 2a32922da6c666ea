#include <linae/io.hpp>

#include <fmt/format.h>

#include <fstream>
#include <iterator>

namespace linae {

namespace {

std::vector<unsigned char> read_all(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw FormatError("idx: cannot open " + path.string());
	return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char> &buf, std::size_t off, const std::filesystem::path &path) {
	if (off + 4 > buf.size())
		throw FormatError("idx: truncated header in " + path.string());
	return (std::uint32_t(buf[off]) << 24) | (std::uint32_t(buf[off + 1]) << 16) | (std::uint32_t(buf[off + 2]) << 8) |
	       std::uint32_t(buf[off + 3]);
}

} // namespace

Dataset load_idx_images(const std::filesystem::path &images, const std::filesystem::path &labels,
                        std::optional<int> digit, std::optional<Index> cap) {
	const auto img = read_all(images);
	const auto lab = read_all(labels);

	const std::uint32_t img_magic = be32(img, 0, images);
	if (img_magic != 0x00000803u)
		throw FormatError(fmt::format("idx: bad image magic 0x{:08x} in {}", img_magic, images.string()));
	const std::uint32_t lab_magic = be32(lab, 0, labels);
	if (lab_magic != 0x00000801u)
		throw FormatError(fmt::format("idx: bad label magic 0x{:08x} in {}", lab_magic, labels.string()));

	const std::uint64_t count = be32(img, 4, images);
	const std::uint64_t rows = be32(img, 8, images);
	const std::uint64_t cols = be32(img, 12, images);
	const std::uint64_t label_count = be32(lab, 4, labels);
	if (count != label_count)
		throw FormatError(fmt::format("idx: {} images but {} labels", count, label_count));
	const std::uint64_t pixels = rows * cols;
	if (pixels == 0)
		throw FormatError("idx: zero-sized images in " + images.string());
	if (img.size() < 16 + count * pixels)
		throw FormatError("idx: truncated image data in " + images.string());
	if (lab.size() < 8 + count)
		throw FormatError("idx: truncated label data in " + labels.string());
	if (cap && *cap <= 0)
		throw ConfigError("idx: sample cap must be positive");

	std::vector<std::uint64_t> keep;
	for (std::uint64_t i = 0; i < count; ++i) {
		if (cap && static_cast<Index>(keep.size()) >= *cap)
			break;
		if (!digit || lab[8 + i] == *digit)
			keep.push_back(i);
	}
	if (keep.empty())
		throw FormatError("idx: no images match the requested digit");

	ComplexMatrix x(static_cast<Index>(pixels), static_cast<Index>(keep.size()));
	for (std::size_t t = 0; t < keep.size(); ++t) {
		const unsigned char *src = img.data() + 16 + keep[t] * pixels;
		for (std::uint64_t k = 0; k < pixels; ++k)
			x(static_cast<Index>(k), static_cast<Index>(t)) = Complex(src[k] / 255.0, 0.0);
	}
	return Dataset(std::move(x));
}

} // namespace linae
