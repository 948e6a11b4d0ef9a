#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "axrec/types.hpp"

namespace axrec {

/// Small dense row-major matrix (used for the onion-peeling system B).
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    static DenseMatrix zeros(int r, int c) {
        return DenseMatrix{r, c, std::vector<double>(std::size_t(r) * c, 0.0)};
    }
    double& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
    double at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

/// Sparse forward model with exact-transpose adjoint. Entries are kept as
/// coordinate triplets sorted by (row, col); compressed row/column offsets
/// are built once at finalize() for repeated application.
struct SparseOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> row_idx;
    std::vector<std::uint32_t> col_idx;
    std::vector<double> weight;
    std::vector<std::size_t> row_ptr; // rows + 1 offsets into the triplet arrays

    // column-major view for the adjoint: permutation into the triplet arrays
    std::vector<std::size_t> col_ptr;
    std::vector<std::size_t> col_perm;

    double norm_estimate = 0.0; // cached ||A||_2 from power iteration

    // descriptors filled in by the geometric builders (empty for raw loads)
    DetectorGrid detector;
    RadialGrid volume;

    std::size_t nnz() const { return weight.size(); }
    void push(std::uint32_t r, std::uint32_t c, double w) {
        row_idx.push_back(r);
        col_idx.push_back(c);
        weight.push_back(w);
    }
    /// Sorts triplets by (row, col), merges duplicates by summation, and
    /// builds the row/column offset tables. Must be called before applying.
    void finalize();
};

/// Onion-peeling system for one detector row: B[i][j] is the chord length of
/// the ray at x_i = (i+1/2)*delta_r through annulus j. Upper triangular with
/// strictly positive diagonal.
DenseMatrix build_onion_peeling_matrix(int m, double delta_r);

/// Full parallel-beam operator: per-row system A = [B, B]^T with the left
/// detector half mirroring the right, replicated over the grid rows.
/// Shape (n_rows * 2m) x (n_rows * m).
SparseOperator build_parallel_operator(const RadialGrid& grid);

/// Detector layout the parallel operator projects onto.
DetectorGrid parallel_detector(const RadialGrid& grid);

/// Cone-beam operator: entry (i, j) is the Euclidean length of the ray from
/// the source to pixel i inside annulus cell j.
SparseOperator build_cone_operator(const ConeGeometry& geometry, const RadialGrid& grid,
                                   const DetectorGrid& detector);

void apply_forward(const SparseOperator& op, std::span<const double> u, std::span<double> out);
void apply_adjoint(const SparseOperator& op, std::span<const double> h, std::span<double> out);
Projection apply_forward(const SparseOperator& op, const SampledField& u);
SampledField apply_adjoint(const SparseOperator& op, const Projection& h);

/// Largest-singular-value estimate by power iteration on A^T A; the returned
/// estimate is nondecreasing in iters. A zero operator yields 0.
double operator_norm_estimate(const SparseOperator& op, int iters);

/// Binary export/import: magic "AXOP", u32 version, u64 rows/cols/nnz, then
/// nnz * (u32 row, u32 col, f64 weight), all little-endian.
void save_operator(const std::string& path, const SparseOperator& op);
SparseOperator load_operator(const std::string& path);

} // namespace axrec
