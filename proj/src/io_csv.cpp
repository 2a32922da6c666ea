#include <linae/io.hpp>

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace linae {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
	std::vector<std::string_view> out;
	std::size_t start = 0;
	while (true) {
		const std::size_t pos = line.find(',', start);
		if (pos == std::string_view::npos) {
			out.push_back(line.substr(start));
			break;
		}
		out.push_back(line.substr(start, pos - start));
		start = pos + 1;
	}
	return out;
}

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
		s.remove_prefix(1);
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
		s.remove_suffix(1);
	return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
	cell = trim(cell);
	if (!cell.empty() && cell.front() == '+')
		cell.remove_prefix(1);
	double v = 0.0;
	const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
	if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
		throw FormatError(fmt::format("csv: non-numeric cell '{}' at row {}, column {}", cell, row, col));
	return v;
}

// Number of complex dimensions in a header block "<prefix>0_re,<prefix>0_im,...".
Index check_block(const std::vector<std::string_view> &cols, std::size_t offset, std::size_t count, char prefix) {
	if (count % 2 != 0)
		throw FormatError(fmt::format("csv: malformed header, odd number of {} columns", prefix));
	for (std::size_t k = 0; k < count / 2; ++k) {
		const std::string re = fmt::format("{}{}_re", prefix, k);
		const std::string im = fmt::format("{}{}_im", prefix, k);
		if (trim(cols[offset + 2 * k]) != re)
			throw FormatError(fmt::format("csv: malformed header, expected '{}' in column {}", re, offset + 2 * k + 1));
		if (trim(cols[offset + 2 * k + 1]) != im)
			throw FormatError(
			    fmt::format("csv: malformed header, expected '{}' in column {}", im, offset + 2 * k + 2));
	}
	return static_cast<Index>(count / 2);
}

} // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
			throw Error("cannot open " + tmp.string() + " for writing");
		out << contents;
		out.flush();
		if (!out)
			throw Error("write failed: " + tmp.string());
	}
	std::filesystem::rename(tmp, path);
}

Dataset load_csv(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw FormatError("csv: cannot open " + path.string());
	std::string line;
	if (!std::getline(in, line))
		throw FormatError("csv: empty file " + path.string());
	const auto header = split_commas(line);

	std::size_t nx = 0;
	while (nx < header.size() && !trim(header[nx]).empty() && trim(header[nx]).front() == 'x')
		++nx;
	const std::size_t ny = header.size() - nx;
	if (nx == 0)
		throw FormatError("csv: malformed header, no x columns");
	const Index n = check_block(header, 0, nx, 'x');
	bool has_targets = false;
	if (ny > 0) {
		const Index n_y = check_block(header, nx, ny, 'y');
		if (n_y != n)
			throw FormatError(fmt::format("csv: malformed header, {} x dimensions but {} y dimensions", n, n_y));
		has_targets = true;
	}

	std::vector<std::vector<double>> rows;
	std::size_t row_no = 1;
	while (std::getline(in, line)) {
		++row_no;
		if (trim(line).empty())
			continue;
		const auto cells = split_commas(line);
		if (cells.size() != header.size())
			throw FormatError(fmt::format("csv: ragged row {} has {} cells, header has {}", row_no, cells.size(),
			                              header.size()));
		std::vector<double> vals(cells.size());
		for (std::size_t c = 0; c < cells.size(); ++c)
			vals[c] = parse_cell(cells[c], row_no, c + 1);
		rows.push_back(std::move(vals));
	}
	if (rows.empty())
		throw FormatError("csv: no samples in " + path.string());

	const Index m = static_cast<Index>(rows.size());
	ComplexMatrix x(n, m);
	ComplexMatrix y;
	if (has_targets)
		y.resize(n, m);
	for (Index t = 0; t < m; ++t) {
		const auto &r = rows[static_cast<std::size_t>(t)];
		for (Index k = 0; k < n; ++k) {
			x(k, t) = Complex(r[2 * k], r[2 * k + 1]);
			if (has_targets)
				y(k, t) = Complex(r[nx + 2 * k], r[nx + 2 * k + 1]);
		}
	}
	if (has_targets)
		return Dataset(std::move(x), std::move(y));
	return Dataset(std::move(x));
}

void save_csv(const Dataset &d, const std::filesystem::path &path) {
	const Index n = d.dim();
	std::string out;
	for (Index k = 0; k < n; ++k)
		out += fmt::format("{}x{}_re,x{}_im", k ? "," : "", k, k);
	if (!d.auto_associative())
		for (Index k = 0; k < n; ++k)
			out += fmt::format(",y{}_re,y{}_im", k, k);
	out += '\n';
	for (Index t = 0; t < d.samples(); ++t) {
		for (Index k = 0; k < n; ++k) {
			const Complex v = d.inputs()(k, t);
			out += fmt::format("{}{},{}", k ? "," : "", format_double(v.real()), format_double(v.imag()));
		}
		if (!d.auto_associative())
			for (Index k = 0; k < n; ++k) {
				const Complex v = d.targets()(k, t);
				out += fmt::format(",{},{}", format_double(v.real()), format_double(v.imag()));
			}
		out += '\n';
	}
	write_file_atomic(path, out);
}

} // namespace linae
