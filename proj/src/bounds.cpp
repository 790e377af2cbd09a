#include "spid/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spid/metrics.hpp"
#include "spid/rng.hpp"

namespace spid {

namespace {

// Column-Gram difference A^T A - tau B^T B, the symmetric matrix behind
// eps(tau). Dimension is the shared column count.
DenseMatrix gram_difference(const DenseMatrix& a, const DenseMatrix& b, double tau) {
    const std::size_t n = a.cols();
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v =
                dot(a.col_span(i), a.col_span(j)) - tau * dot(b.col_span(i), b.col_span(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

} // namespace

double eps_tau(const DenseMatrix& a, const DenseMatrix& b, double tau) {
    if (a.cols() != b.cols())
        raise("DimensionMismatch", "eps_tau needs equal column counts");
    return sym_eig_max(gram_difference(a, b, tau));
}

BoundReport thm1_check(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule,
                       const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) raise("BadTauGrid", "tau grid is empty");
    for (double tau : tau_grid)
        if (tau < 0.0) raise("BadTauGrid", "tau values must be nonnegative");

    // The Gram-eigen route resolves vanishing singular values only to about
    // sqrt(machine eps) of sigma_1, which sets the rank-deficiency threshold.
    const DenseMatrix sketch = subsample(a, spec);
    const auto sv = singular_values(sketch);
    if (rule.mode() == RankRule::Mode::FixedRank &&
        (rule.k() > sv.size() || sv[rule.k() - 1] <= 1e-7 * sv[0]))
        raise("RankExceedsSketch", "sketch rank is below the requested ID rank");

    const IdFactors factors = sub_id(a, spec, rule);
    const std::size_t k = factors.achieved_rank;
    if (k > sv.size() || sv[k - 1] <= 1e-7 * sv[0])
        raise("RankExceedsSketch", "sketch rank is below the requested ID rank");

    BoundReport report;
    report.rank = k;
    report.tau_grid = tau_grid;
    report.sigma_k = sv[k - 1];
    report.sigma_k1 = k < sv.size() ? sv[k] : 0.0;
    report.coeff_norm = norms(factors.coeffs).spectral;
    report.actual_error_spectral = norms(subtract(a, reconstruct(factors))).spectral;

    // sketch-side rank-k ID error ||B - Bhat||_2
    const DenseMatrix sketch_skeleton = select_columns(sketch, factors.skeleton_indices);
    report.sketch_error =
        norms(subtract(sketch, matmul(sketch_skeleton, factors.coeffs))).spectral;

    double best = std::numeric_limits<double>::infinity();
    for (double tau : tau_grid) {
        const double eps = eps_tau(a, sketch, tau);
        report.eps_tau_samples.push_back(eps);
        // A radicand that is genuinely negative makes this tau inadmissible;
        // one negative only through round-off is clamped to zero.
        const double rad1 = tau * report.sigma_k1 * report.sigma_k1 + eps;
        const double rad2 = tau + eps / (report.sigma_k * report.sigma_k);
        const double noise1 = 1e-12 * (tau * report.sigma_k1 * report.sigma_k1 + std::abs(eps));
        const double noise2 = 1e-12 * (tau + std::abs(eps) / (report.sigma_k * report.sigma_k));
        if (rad1 < -noise1 || rad2 < -noise2) continue;
        const double rho = (1.0 + report.coeff_norm) * std::sqrt(std::max(0.0, rad1)) +
                           report.sketch_error * std::sqrt(std::max(0.0, rad2));
        best = std::min(best, rho);
    }
    report.thm1_bound = best;

    if (!(report.actual_error_spectral <= best * (1.0 + 1e-8)))
        raise("BoundViolated", "subsampled-ID error bound does not hold");
    return report;
}

BoundReport thm2_check(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule) {
    const SpidFactors factors = spid(a, spec, rule);
    const DenseMatrix sketch = subsample(a, spec);

    BoundReport report;
    report.rank = factors.base.achieved_rank;
    report.coeff_norm = norms(factors.base.coeffs).spectral;
    report.actual_error_spectral = norms(subtract(a, reconstruct(factors))).spectral;

    // E_I = A - M B measures pure interpolation error on the uncompressed sketch.
    report.interp_error = norms(subtract(a, factors.interp.apply(sketch))).spectral;
    report.interp_norm = norms(factors.interp.materialize()).spectral;
    report.sketch_error =
        norms(subtract(sketch, reconstruct(factors.base))).spectral;

    report.thm2_bound = report.interp_error + report.interp_norm * report.sketch_error;
    if (!(report.actual_error_spectral <= report.thm2_bound * (1.0 + 1e-8)))
        raise("BoundViolated", "single-pass ID error bound does not hold");
    return report;
}

LemmaReport lemma_check(const IdFactors& factors, const DenseMatrix& a) {
    LemmaReport report;
    const std::size_t k = factors.achieved_rank;
    const std::size_t n = factors.source_cols;

    report.identity_ok = true;
    for (std::size_t j = 0; j < k && report.identity_ok; ++j)
        for (std::size_t i = 0; i < k; ++i) {
            const double expected = i == j ? 1.0 : 0.0;
            if (factors.coeffs(i, factors.skeleton_indices[j]) != expected) {
                report.identity_ok = false;
                break;
            }
        }
    if (!report.identity_ok)
        raise("IdentityViolated", "coefficients at skeleton columns are not the identity");

    report.exactness_applicable = (k == n) || (k == a.rows());
    if (report.exactness_applicable) {
        report.exactness_error = rel_frob_error(a, reconstruct(factors));
        if (!(report.exactness_error <= 1e-10))
            raise("ExactnessViolated", "full-rank ID failed to reproduce the matrix");
    }

    report.max_abs_coeff = max_abs(factors.coeffs);
    report.entry_bound_ok = report.max_abs_coeff <= 1.0 + 1e-12;

    report.coeff_norm = norms(factors.coeffs).spectral;
    report.coeff_norm_bound = std::sqrt(static_cast<double>(k * (n - k) + 1));
    report.coeff_norm_ok = report.coeff_norm <= report.coeff_norm_bound * (1.0 + 1e-10);

    const auto c_sv = singular_values(factors.coeffs);
    report.coeff_sigma_k = k <= c_sv.size() ? c_sv[k - 1] : 0.0;
    report.sigma_k_ok = report.coeff_sigma_k >= 1.0 - 1e-10;

    const auto a_sv = singular_values(a);
    const double sigma_k1 = k < a_sv.size() ? a_sv[k] : 0.0;
    report.spectral_bound = report.coeff_norm_bound * sigma_k1;
    if (factors.skeleton.rows() == a.rows()) {
        report.spectral_error = norms(subtract(a, reconstruct(factors))).spectral;
        report.spectral_bound_ok =
            report.spectral_error <= report.spectral_bound * (1.0 + 1e-10) ||
            report.spectral_error <= 1e-12 * a_sv[0];
    } else {
        report.spectral_bound_ok = true; // coarse skeleton: property not applicable
    }
    return report;
}

DenseMatrix gen_decaying_field(std::size_t m, std::size_t n, std::size_t modes,
                               std::uint64_t seed) {
    SplitMix64 rng(seed);
    DenseMatrix a(m, n);
    for (std::size_t mode = 0; mode < modes; ++mode) {
        const double weight = std::pow(0.5, static_cast<double>(mode));
        const double phase = 2.0 * std::numbers::pi * rng.next_unit();
        std::vector<double> temporal(n);
        for (std::size_t t = 0; t < n; ++t) temporal[t] = rng.next_sym();
        for (std::size_t i = 0; i < m; ++i) {
            const double x = static_cast<double>(i) / static_cast<double>(m);
            const double spatial =
                std::sin(2.0 * std::numbers::pi * static_cast<double>(mode + 1) * x + phase);
            for (std::size_t t = 0; t < n; ++t) a(i, t) += weight * spatial * temporal[t];
        }
    }
    return a;
}

BoundsSuiteResult run_bounds_suite(std::size_t seed_count, const std::vector<double>& tau_grid) {
    BoundsSuiteResult result;
    const std::size_t m = 60, n = 40;
    const auto grid = GridGeom::structured({m});

    for (std::uint64_t seed = 1; seed <= seed_count; ++seed) {
        const DenseMatrix a = gen_decaying_field(m, n, 8, seed);
        for (std::size_t stride : {std::size_t{2}, std::size_t{3}}) {
            const auto spec = SubsampleSpec::strided(grid, {stride});
            for (std::size_t k : {std::size_t{2}, std::size_t{5}}) {
                const auto rule = RankRule::fixed(k);

                const BoundReport r1 = thm1_check(a, spec, rule, tau_grid);
                ++result.thm1_checked;
                result.worst_thm1_margin = std::max(
                    result.worst_thm1_margin, r1.actual_error_spectral / r1.thm1_bound);

                const BoundReport r2 = thm2_check(a, spec, rule);
                ++result.thm2_checked;
                result.worst_thm2_margin = std::max(
                    result.worst_thm2_margin, r2.actual_error_spectral / r2.thm2_bound);

                const LemmaReport lem = lemma_check(sub_id(a, spec, rule), a);
                ++result.lemma_checked;
                result.entry_bound_violations += lem.entry_bound_ok ? 0 : 1;
                result.coeff_norm_violations += lem.coeff_norm_ok ? 0 : 1;
                result.sigma_k_violations += lem.sigma_k_ok ? 0 : 1;
                result.spectral_bound_violations += lem.spectral_bound_ok ? 0 : 1;
            }
        }
    }
    return result;
}

} // namespace spid
