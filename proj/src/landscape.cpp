#include <linae/landscape.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace linae {

namespace {

constexpr double kSpectrumHermitianTol = 1e-10;
constexpr double kGapWarning = 1e-8;

ComplexMatrix orthonormal_basis(const ComplexMatrix &a) {
	Eigen::HouseholderQR<ComplexMatrix> qr(a);
	return qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
}

} // namespace

Spectrum spectrum(const ComplexMatrix &sigma) {
	if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
		throw DimensionError("spectrum: matrix must be square and nonempty");
	if (!sigma.allFinite())
		throw NonFiniteError("spectrum: non-finite entries");
	const double defect = hermitian_defect(sigma);
	if (defect > kSpectrumHermitianTol)
		throw NotHermitianError("spectrum: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

	const ComplexMatrix h = 0.5 * (sigma + sigma.adjoint());
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
	if (es.info() != Eigen::Success)
		throw Error("spectrum: eigensolver failed to converge");

	const Index n = h.rows();
	Spectrum out;
	out.eigenvalues = es.eigenvalues().reverse();
	out.eigenvectors = es.eigenvectors().rowwise().reverse();

	for (Index k = 0; k < n; ++k) {
		auto col = out.eigenvectors.col(k);
		const double scale = col.cwiseAbs().maxCoeff();
		for (Index i = 0; i < n; ++i) {
			const double mag = std::abs(col(i));
			if (mag > 1e-10 * scale) {
				col *= std::conj(col(i)) / mag;
				col(i) = Complex(col(i).real(), 0.0);
				break;
			}
		}
	}

	const double top = out.eigenvalues.cwiseAbs().maxCoeff();
	out.min_relative_gap = std::numeric_limits<double>::infinity();
	for (Index i = 0; i + 1 < n; ++i) {
		const double gap = out.eigenvalues(i) - out.eigenvalues(i + 1);
		out.min_relative_gap = std::min(out.min_relative_gap, top > 0.0 ? gap / top : 0.0);
	}
	out.gap_warning = out.min_relative_gap < kGapWarning;
	return out;
}

IndexSet::IndexSet(std::vector<int> indices, Index n) : indices_(std::move(indices)), n_(n) {
	if (indices_.empty())
		throw DimensionError("IndexSet: must not be empty");
	for (std::size_t k = 0; k < indices_.size(); ++k) {
		if (indices_[k] < 1 || indices_[k] > n_)
			throw DimensionError("IndexSet: index " + std::to_string(indices_[k]) + " outside [1, " +
			                     std::to_string(n_) + "]");
		if (k > 0 && indices_[k] <= indices_[k - 1])
			throw DimensionError("IndexSet: indices must be strictly increasing");
	}
}

IndexSet IndexSet::top(Index p, Index n) {
	std::vector<int> idx(static_cast<std::size_t>(p));
	std::iota(idx.begin(), idx.end(), 1);
	return IndexSet(std::move(idx), n);
}

std::vector<int> IndexSet::complement() const {
	std::vector<int> out;
	std::size_t k = 0;
	for (int i = 1; i <= n_; ++i) {
		if (k < indices_.size() && indices_[k] == i)
			++k;
		else
			out.push_back(i);
	}
	return out;
}

ComplexMatrix IndexSet::select_columns(const ComplexMatrix &u) const {
	ComplexMatrix out(u.rows(), size());
	for (std::size_t k = 0; k < indices_.size(); ++k)
		out.col(static_cast<Index>(k)) = u.col(indices_[k] - 1);
	return out;
}

std::string IndexSet::to_string() const {
	std::ostringstream os;
	os << '{';
	for (std::size_t k = 0; k < indices_.size(); ++k)
		os << (k ? "," : "") << indices_[k];
	os << '}';
	return os.str();
}

AutoencoderParams build_critical_point(const Spectrum &spec, const IndexSet &idx, const ComplexMatrix &c,
                                       const CovarianceSet &cov) {
	const Index p = idx.size();
	if (c.rows() != p || c.cols() != p)
		throw DimensionError("build_critical_point: C must be p x p");
	if (spec.dim() != cov.dim() || idx.universe() != cov.dim())
		throw DimensionError("build_critical_point: spectrum, index set and covariances disagree on n");
	const double cond = condition_number(c);
	if (!(cond <= 1e10))
		throw SingularMatrixError("build_critical_point: C is singular", cond);

	const ComplexMatrix u = idx.select_columns(spec.eigenvectors);
	const Eigen::PartialPivLU<ComplexMatrix> lu(c);
	ComplexMatrix b;
	if (cov.auto_associative)
		b = lu.solve(ComplexMatrix(u.adjoint()));
	else
		b = lu.solve(ComplexMatrix(cov.solve_xx(cov.sigma_xy * u).adjoint()));
	return AutoencoderParams(u * c, std::move(b));
}

double critical_error(const Spectrum &spec, const IndexSet &idx, const CovarianceSet &cov) {
	if (idx.universe() != spec.dim())
		throw DimensionError("critical_error: index set universe does not match the spectrum");
	double captured = 0.0;
	for (int i : idx.indices())
		captured += spec.eigenvalues(i - 1);
	return cov.sigma_yy.trace().real() - captured;
}

StationarityResiduals stationarity_residuals(const AutoencoderParams &params, const CovarianceSet &cov) {
	const ComplexMatrix &a = params.a();
	const ComplexMatrix &b = params.b();
	const ComplexMatrix b_sxx = b * cov.sigma_xx;
	const ComplexMatrix gram = a.adjoint() * a;
	StationarityResiduals r;
	// A* Sigma_YX = (Sigma_XY A)*, Sigma_YX B* = (B Sigma_XY)*.
	r.b_eq = relative_residual(gram * b_sxx, (cov.sigma_xy * a).adjoint());
	r.a_eq = relative_residual(a * (b_sxx * b.adjoint()), (b * cov.sigma_xy).adjoint());
	return r;
}

std::optional<IndexSet> classify_subspace(const ComplexMatrix &a, const Spectrum &spec, double angle_tol) {
	if (a.rows() != spec.dim() || a.cols() == 0 || !is_full_rank(a))
		return std::nullopt;
	const ComplexMatrix q = orthonormal_basis(a);
	const ComplexMatrix overlap = q.adjoint() * spec.eigenvectors;
	std::vector<int> picked;
	for (Index i = 0; i < overlap.cols(); ++i)
		if (overlap.col(i).squaredNorm() > 0.5)
			picked.push_back(static_cast<int>(i + 1));
	if (static_cast<Index>(picked.size()) != a.cols())
		return std::nullopt;
	IndexSet idx(std::move(picked), spec.dim());
	const ComplexMatrix u = idx.select_columns(spec.eigenvectors);
	const ComplexMatrix outside = u - q * (q.adjoint() * u);
	Eigen::JacobiSVD<ComplexMatrix> svd(outside);
	const double sin_max = svd.singularValues()(0);
	if (!(sin_max < angle_tol))
		return std::nullopt;
	return idx;
}

CriticalPointReport is_critical(const AutoencoderParams &params, const CovarianceSet &cov, double tol,
                                const Spectrum *spec) {
	if (params.n() != cov.dim())
		throw DimensionError("is_critical: parameter dimension does not match covariances");
	CriticalPointReport report;
	const StationarityResiduals r = stationarity_residuals(params, cov);
	report.residual_b_eq = r.b_eq;
	report.residual_a_eq = r.a_eq;
	report.is_critical = r.b_eq <= tol && r.a_eq <= tol;
	report.error_value = reconstruction_error(params, cov);

	if (params.a_full_rank()) {
		const ComplexMatrix q = orthonormal_basis(params.a());
		const ComplexMatrix target = q * (q.adjoint() * cov.regression_map());
		const ComplexMatrix w = params.w();
		const double scale = std::max(w.norm(), 1e-300);
		report.w_projection_residual = (w - target).norm() / scale;
	} else {
		report.w_projection_residual = std::numeric_limits<double>::quiet_NaN();
	}

	if (report.is_critical) {
		try {
			if (spec) {
				report.classified_index_set = classify_subspace(params.a(), *spec);
			} else {
				const Spectrum own = spectrum(cov.sigma);
				report.classified_index_set = classify_subspace(params.a(), own);
			}
		} catch (const Error &) {
			report.classified_index_set.reset();
		}
	}
	return report;
}

double binomial(Index n, Index k) {
	if (k < 0 || k > n)
		return 0.0;
	k = std::min(k, n - k);
	double out = 1.0;
	for (Index i = 1; i <= k; ++i) {
		out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
		if (!std::isfinite(out))
			return std::numeric_limits<double>::infinity();
	}
	return std::round(out);
}

std::vector<CriticalValue> enumerate_critical_values(const Spectrum &spec, Index p, const CovarianceSet &cov,
                                                     double cap) {
	const Index n = spec.dim();
	if (p < 1 || p > n)
		throw DimensionError("enumerate_critical_values: p must lie in [1, n]");
	const double count = binomial(n, p);
	if (count > cap)
		throw CapExceededError("enumerate_critical_values: C(" + std::to_string(n) + ", " + std::to_string(p) +
		                       ") = " + std::to_string(count) + " exceeds cap " + std::to_string(cap));

	const double tr_yy = cov.sigma_yy.trace().real();
	std::vector<CriticalValue> out;
	out.reserve(static_cast<std::size_t>(count));
	std::vector<int> idx(static_cast<std::size_t>(p));
	std::iota(idx.begin(), idx.end(), 1);
	const int ni = static_cast<int>(n);
	const int pi = static_cast<int>(p);
	while (true) {
		double captured = 0.0;
		for (int i : idx)
			captured += spec.eigenvalues(i - 1);
		out.push_back({IndexSet(idx, n), tr_yy - captured});

		int k = pi - 1;
		while (k >= 0 && idx[static_cast<std::size_t>(k)] == ni - pi + k + 1)
			--k;
		if (k < 0)
			break;
		++idx[static_cast<std::size_t>(k)];
		for (int j = k + 1; j < pi; ++j)
			idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
	}
	std::stable_sort(out.begin(), out.end(),
	                 [](const CriticalValue &l, const CriticalValue &r) { return l.error < r.error; });
	return out;
}

EscapeResult saddle_escape(const AutoencoderParams &params, const Spectrum &spec, const CovarianceSet &cov,
                           double step) {
	const auto idx = classify_subspace(params.a(), spec);
	if (!idx)
		throw Error("saddle_escape: parameters are not at a classified critical point");
	const std::vector<int> unused = idx->complement();
	const int out_i = idx->indices().back();
	if (unused.empty() || unused.front() > out_i)
		throw NoEscapeError("saddle_escape: " + idx->to_string() + " is the global minimum; no escape direction");
	const int in_i = unused.front();

	const ComplexVector uo = spec.eigenvectors.col(out_i - 1);
	const ComplexVector ui = spec.eigenvectors.col(in_i - 1);
	const ComplexMatrix &a = params.a();
	const ComplexMatrix co = uo.adjoint() * a;
	const ComplexMatrix ci = ui.adjoint() * a;
	const double c = std::cos(step);
	const double s = std::sin(step);
	// Plane rotation in span{u_out, u_in}: u_out -> cos u_out + sin u_in.
	const ComplexMatrix a_new = a + (c - 1.0) * (uo * co + ui * ci) + s * (ui * co - uo * ci);
	ComplexMatrix b_new = solve_b_given_a(a_new, cov);

	AutoencoderParams moved(a_new, std::move(b_new));
	const double delta = reconstruction_error(moved, cov) - reconstruction_error(params, cov);
	return {std::move(moved), delta, out_i, in_i};
}

ConjugacyReport conjugate_transpose_identity(const AutoencoderParams &params, const CovarianceSet &cov) {
	ConjugacyReport r;
	const ComplexMatrix w = params.w();
	const double wn = std::max(w.norm(), 1e-300);
	r.hermitian_residual = (w - w.adjoint()).norm() / wn;

	const AutoencoderParams transposed(params.b().adjoint(), params.a().adjoint());
	r.error = reconstruction_error(params, cov);
	r.transposed_error = reconstruction_error(transposed, cov);
	r.transpose_error_residual = std::abs(r.error - r.transposed_error) / std::max(r.error, 1e-300);

	try {
		const ComplexMatrix a_swapped = params.b().adjoint();
		const ComplexMatrix b_swapped = solve_b_given_a(a_swapped, cov);
		r.swap_resolve_residual = (a_swapped * b_swapped - w).norm() / wn;
	} catch (const RankDeficientError &) {
		r.swap_resolve_residual = std::numeric_limits<double>::infinity();
	}
	return r;
}

AutoencoderParams ProblemTransform::map(const AutoencoderParams &params) const {
	return AutoencoderParams(d_out * params.a(), params.b() * c_in_inverse);
}

ProblemTransform transform_problem(const Dataset &d, const ComplexMatrix &c_in, const ComplexMatrix &d_out) {
	const Index n = d.dim();
	if (c_in.rows() != n || c_in.cols() != n || d_out.rows() != n || d_out.cols() != n)
		throw DimensionError("transform_problem: coordinate changes must be n x n");
	const double unitary_defect = (d_out.adjoint() * d_out - ComplexMatrix::Identity(n, n)).norm();
	if (unitary_defect > 1e-10 * std::sqrt(static_cast<double>(n)))
		throw Error("transform_problem: output change D is not unitary (defect " + std::to_string(unitary_defect) +
		            ")");
	const double cond = condition_number(c_in);
	if (!(cond <= kSingularCondition))
		throw SingularMatrixError("transform_problem: input change C is singular", cond);

	ComplexMatrix inputs = c_in * d.inputs();
	ComplexMatrix targets = d_out * d.targets();
	ComplexMatrix c_inv = c_in.partialPivLu().inverse();
	return ProblemTransform{Dataset(std::move(inputs), std::move(targets), d.centered()), c_in, std::move(c_inv),
	                        d_out};
}

Index tangent_space_dimension(const AutoencoderParams &params, double tol) {
	const Index n = params.n();
	const Index p = params.p();
	ComplexMatrix span(n * n, 2 * n * p);
	Index col = 0;
	// Perturbing A along E_ik contributes E_ik B; perturbing B along E_kj contributes A E_kj.
	for (Index i = 0; i < n; ++i)
		for (Index k = 0; k < p; ++k) {
			ComplexMatrix d = ComplexMatrix::Zero(n, n);
			d.row(i) = params.b().row(k);
			span.col(col++) = d.reshaped();
		}
	for (Index k = 0; k < p; ++k)
		for (Index j = 0; j < n; ++j) {
			ComplexMatrix d = ComplexMatrix::Zero(n, n);
			d.col(j) = params.a().col(k);
			span.col(col++) = d.reshaped();
		}
	return numerical_rank(span, tol);
}

} // namespace linae
