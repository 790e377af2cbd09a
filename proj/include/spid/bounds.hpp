#pragma once

#include <cstdint>

#include "spid/eig.hpp"
#include "spid/id.hpp"

namespace spid {

/// Numerical record of one error-bound evaluation. thm1_bound is the minimum
/// of rho_k over the tau grid; thm2_bound is the interpolation-plus-sketch
/// bound. Populated fields depend on which check produced the report.
struct BoundReport {
    double actual_error_spectral = 0.0;
    double thm1_bound = 0.0;
    double thm2_bound = 0.0;
    std::vector<double> tau_grid;
    std::vector<double> eps_tau_samples;
    double sigma_k = 0.0;
    double sigma_k1 = 0.0;
    double sketch_error = 0.0; // ||B - Bhat||_2
    double interp_error = 0.0; // ||E_I||_2
    double interp_norm = 0.0;  // ||M||_2
    double coeff_norm = 0.0;   // ||C||_2
    std::size_t rank = 0;
};

inline const std::vector<double>& default_tau_grid() {
    static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    return grid;
}

/// eps(tau) = lambda_max of the column-Gram difference of the data matrix and
/// the scaled sketch. Both matrices must share the column count.
double eps_tau(const DenseMatrix& a, const DenseMatrix& b, double tau);

/// Subsampled-ID spectral error bound: runs the two-pass ID, evaluates
/// rho_k(tau) = (1+||C||)sqrt(tau s_{k+1}^2 + eps(tau))
///            + ||B-Bhat|| sqrt(tau + eps(tau)/s_k^2)
/// over the grid and raises BoundViolated if the actual error exceeds the
/// minimum by more than 1e-8 relative.
BoundReport thm1_check(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule,
                       const std::vector<double>& tau_grid = default_tau_grid());

/// Single-pass ID spectral error bound ||E_I|| + ||M|| ||B - Bhat||, with the
/// operator norm taken on the materialized interpolator. Raises BoundViolated
/// past 1e-8 relative slack.
BoundReport thm2_check(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule);

/// Coefficient-matrix properties of an ID. The identity submatrix and the
/// full-rank exactness property are hard requirements (raised on failure);
/// the entry, norm and spectral-gap bounds hold for *some* ID but not
/// necessarily the pivoted-QR one, so they are reported, never asserted.
struct LemmaReport {
    bool identity_ok = false;       // hard: C(:, I) == identity, bitwise
    bool exactness_applicable = false;
    double exactness_error = 0.0;   // hard when applicable: <= 1e-10 relative
    double max_abs_coeff = 0.0;     // diagnostic against 1
    double coeff_norm = 0.0;        // diagnostic against sqrt(k(n-k)+1)
    double coeff_norm_bound = 0.0;
    double coeff_sigma_k = 0.0;     // diagnostic against 1
    double spectral_error = 0.0;    // diagnostic against sqrt(k(n-k)+1) s_{k+1}
    double spectral_bound = 0.0;
    bool entry_bound_ok = false;
    bool coeff_norm_ok = false;
    bool sigma_k_ok = false;
    bool spectral_bound_ok = false;
};

LemmaReport lemma_check(const IdFactors& factors, const DenseMatrix& a);

/// Seeded sweep used by the verify-bounds surface: theorem checks across
/// strides {2, 3} and ranks {2, 5}, lemma diagnostics per instance.
struct BoundsSuiteResult {
    std::size_t thm1_checked = 0;
    std::size_t thm2_checked = 0;
    std::size_t lemma_checked = 0;
    double worst_thm1_margin = 0.0; // max actual/bound observed
    double worst_thm2_margin = 0.0;
    std::size_t entry_bound_violations = 0;
    std::size_t coeff_norm_violations = 0;
    std::size_t sigma_k_violations = 0;
    std::size_t spectral_bound_violations = 0;
};

BoundsSuiteResult run_bounds_suite(std::size_t seed_count,
                                   const std::vector<double>& tau_grid = default_tau_grid());

/// Seeded desk-scale test matrix with geometrically decaying spectrum and
/// smooth spatial modes on a 1D grid of m points.
DenseMatrix gen_decaying_field(std::size_t m, std::size_t n, std::size_t modes,
                               std::uint64_t seed);

} // namespace spid
