#pragma once

#include "doctest.h"

#include <cmath>
#include <functional>

#include "spid/bounds.hpp"
#include "spid/rng.hpp"

namespace testutil {

inline spid::DenseMatrix seeded_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    spid::SplitMix64 rng(seed);
    spid::DenseMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) a(i, j) = rng.next_sym();
    return a;
}

inline std::vector<double> seeded_vector(std::size_t m, std::uint64_t seed) {
    spid::SplitMix64 rng(seed);
    std::vector<double> v(m);
    for (double& x : v) x = rng.next_sym();
    return v;
}

inline spid::DenseMatrix outer(const std::vector<double>& u, const std::vector<double>& v) {
    spid::DenseMatrix a(u.size(), v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < u.size(); ++i) a(i, j) = u[i] * v[j];
    return a;
}

inline double rel_err(const spid::DenseMatrix& exact, const spid::DenseMatrix& approx) {
    return spid::frobenius_norm(spid::subtract(exact, approx)) / spid::frobenius_norm(exact);
}

// Largest eigenvalue of a symmetric matrix by shifted power iteration: an
// oracle that shares no code with the Jacobi solver. The Gershgorin shift
// makes the target the dominant eigenvalue of S + cI.
inline double power_iteration_max_eig(const spid::DenseMatrix& s) {
    const std::size_t n = s.rows();
    REQUIRE(s.cols() == n);

    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += std::abs(s(i, j));
        shift = std::max(shift, row_sum);
    }
    if (shift == 0.0) return 0.0;

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        std::vector<double> w(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) w[i] += (s(i, j) + (i == j ? shift : 0.0)) * v[j];
        double norm = 0.0, rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm += w[i] * w[i];
            rayleigh += w[i] * v[i];
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (iter > 4 && std::abs(rayleigh - lambda) <= 1e-14 * std::abs(rayleigh) + 1e-300)
            return rayleigh - shift;
        lambda = rayleigh;
    }
    return lambda - shift;
}

// Every ID produced in the tests goes through the hard lemma assertions
// (identity submatrix, exactness at full rank); the raising happens inside
// lemma_check itself.
inline spid::LemmaReport check_id(const spid::IdFactors& factors, const spid::DenseMatrix& a) {
    spid::LemmaReport report;
    REQUIRE_NOTHROW(report = spid::lemma_check(factors, a));
    return report;
}

inline std::string error_name(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const spid::Error& e) {
        return e.name();
    }
    return "";
}

} // namespace testutil
