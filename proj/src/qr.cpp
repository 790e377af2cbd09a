#include "spid/qr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spid {

namespace {

constexpr double kZeroFloor = 1e-300;
constexpr double kCollapseRel = 1e-14;

QrFactorization qr_core(const DenseMatrix& a, const RankRule& rule, bool strict_rank);

} // namespace

QrFactorization pivoted_mgs_qr(const DenseMatrix& a, const RankRule& rule) {
    return qr_core(a, rule, true);
}

QrFactorization pivoted_mgs_qr_at_most(const DenseMatrix& a, std::size_t k) {
    const std::size_t cap = std::min({k, a.rows(), a.cols()});
    return qr_core(a, RankRule::fixed(std::max<std::size_t>(cap, 1)), false);
}

namespace {

QrFactorization qr_core(const DenseMatrix& a, const RankRule& rule, bool strict_rank) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t max_rank = std::min(m, n);

    if (!a.all_finite())
        raise("NonFiniteInput", "input matrix contains NaN or infinity");

    if (rule.mode() == RankRule::Mode::FixedRank && rule.k() > max_rank)
        raise("RankUnreachable", "requested rank exceeds min(rows, cols)");

    // Working residual copy; columns are swapped in place as pivots are chosen.
    std::vector<double> work(a.data(), a.data() + m * n);
    auto wcol = [&](std::size_t j) { return work.data() + j * m; };

    std::vector<std::size_t> pivots(n);
    std::iota(pivots.begin(), pivots.end(), 0);

    double max_init = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        max_init = std::max(max_init, norm2({wcol(j), m}));
    if (max_init < kZeroFloor)
        raise("ZeroMatrix", "all columns are numerically zero");

    const std::size_t step_limit =
        rule.mode() == RankRule::Mode::FixedRank ? rule.k() : max_rank;

    std::vector<double> q;          // m x rank, grown column by column
    std::vector<double> r(step_limit * n, 0.0); // row-major rank x n scratch
    auto rr = [&](std::size_t i, std::size_t j) -> double& { return r[i * n + j]; };

    std::size_t rank = 0;
    for (std::size_t s = 0; s < step_limit; ++s) {
        // Fresh residual norms; cheaper norm downdating drifts and can change
        // pivot order between runs of different block sizes.
        double best_norm = -1.0;
        std::size_t best = s;
        for (std::size_t j = s; j < n; ++j) {
            const double nj = norm2({wcol(j), m});
            if (nj > best_norm || (nj == best_norm && pivots[j] < pivots[best])) {
                best_norm = nj;
                best = j;
            }
        }

        if (rule.mode() == RankRule::Mode::Tolerance &&
            best_norm <= rule.tol() * max_init)
            break;
        if (best_norm < kCollapseRel * max_init) {
            if (rule.mode() == RankRule::Mode::FixedRank && strict_rank)
                raise("RankUnreachable", "residual collapsed before reaching target rank");
            break;
        }

        if (best != s) {
            std::swap_ranges(wcol(s), wcol(s) + m, wcol(best));
            std::swap(pivots[s], pivots[best]);
            for (std::size_t i = 0; i < s; ++i) std::swap(rr(i, s), rr(i, best));
        }

        const double pivot_norm = norm2({wcol(s), m});
        rr(s, s) = pivot_norm;
        double* qs = wcol(s);
        for (std::size_t i = 0; i < m; ++i) qs[i] /= pivot_norm;

        for (std::size_t j = s + 1; j < n; ++j) {
            double* wj = wcol(j);
            double r1 = dot({qs, m}, {wj, m});
            for (std::size_t i = 0; i < m; ++i) wj[i] -= r1 * qs[i];
            // second pass restores orthogonality lost to cancellation
            double r2 = dot({qs, m}, {wj, m});
            for (std::size_t i = 0; i < m; ++i) wj[i] -= r2 * qs[i];
            rr(s, j) = r1 + r2;
        }

        q.insert(q.end(), qs, qs + m);
        rank = s + 1;
    }

    if (rank == 0)
        raise("ZeroMatrix", "no column exceeded the stopping threshold");

    double residual_sq = 0.0;
    for (std::size_t j = rank; j < n; ++j) {
        const double nj = norm2({wcol(j), m});
        residual_sq += nj * nj;
    }

    QrFactorization out{DenseMatrix(m, rank), DenseMatrix(rank, n),
                        std::move(pivots), rank, std::sqrt(residual_sq)};
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < m; ++i) out.q(i, j) = q[j * m + i];
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < n; ++j) out.r_mat(i, j) = rr(i, j);
    return out;
}

} // namespace

DenseMatrix solve_upper_triangular(const DenseMatrix& r11, const DenseMatrix& rhs) {
    const std::size_t k = r11.rows();
    if (r11.cols() != k)
        raise("DimensionMismatch", "triangular factor must be square");
    if (rhs.rows() != k)
        raise("DimensionMismatch", "right-hand side row count must match factor");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        max_diag = std::max(max_diag, std::abs(r11(i, i)));
    for (std::size_t i = 0; i < k; ++i)
        if (std::abs(r11(i, i)) < 1e-14 * max_diag || max_diag == 0.0)
            raise("SingularPivot", "triangular factor has a negligible diagonal entry");

    DenseMatrix x(k, rhs.cols());
    for (std::size_t col = 0; col < rhs.cols(); ++col) {
        for (std::size_t ii = k; ii-- > 0;) {
            double sum = rhs(ii, col);
            for (std::size_t j = ii + 1; j < k; ++j) sum -= r11(ii, j) * x(j, col);
            x(ii, col) = sum / r11(ii, ii);
        }
    }
    return x;
}

} // namespace spid
