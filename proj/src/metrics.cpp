#include "spid/metrics.hpp"

namespace spid {

double compression_factor(std::size_t m, std::size_t n, std::size_t stored_entries) {
    if (m == 0 || n == 0)
        raise("ZeroDenominator", "matrix dimensions must be positive");
    if (stored_entries == 0)
        raise("ZeroDenominator", "stored entry count must be positive");
    return static_cast<double>(m) * static_cast<double>(n) /
           static_cast<double>(stored_entries);
}

double rel_frob_error(const DenseMatrix& exact, const DenseMatrix& approx) {
    if (!exact.same_shape(approx))
        raise("DimensionMismatch", "matrices must have equal shapes");
    const double ref = frobenius_norm(exact);
    if (ref == 0.0)
        raise("ZeroReference", "reference matrix is zero");
    return frobenius_norm(subtract(exact, approx)) / ref;
}

} // namespace spid
