#include "axrec/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "axrec/rng.hpp"

namespace axrec {

void SparseOperator::finalize() {
    const std::size_t n = weight.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row_idx[a] != row_idx[b]) return row_idx[a] < row_idx[b];
        return col_idx[a] < col_idx[b];
    });

    std::vector<std::uint32_t> r2, c2;
    std::vector<double> w2;
    r2.reserve(n);
    c2.reserve(n);
    w2.reserve(n);
    for (std::size_t k : order) {
        if (!w2.empty() && r2.back() == row_idx[k] && c2.back() == col_idx[k]) {
            w2.back() += weight[k];
        } else {
            r2.push_back(row_idx[k]);
            c2.push_back(col_idx[k]);
            w2.push_back(weight[k]);
        }
    }
    row_idx = std::move(r2);
    col_idx = std::move(c2);
    weight = std::move(w2);

    row_ptr.assign(rows + 1, 0);
    for (std::uint32_t r : row_idx) ++row_ptr[r + 1];
    for (std::size_t i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];

    col_ptr.assign(cols + 1, 0);
    for (std::uint32_t c : col_idx) ++col_ptr[c + 1];
    for (std::size_t i = 0; i < cols; ++i) col_ptr[i + 1] += col_ptr[i];
    col_perm.resize(weight.size());
    std::vector<std::size_t> cursor(col_ptr.begin(), col_ptr.end() - 1);
    for (std::size_t k = 0; k < weight.size(); ++k) col_perm[cursor[col_idx[k]]++] = k;
}

DenseMatrix build_onion_peeling_matrix(int m, double delta_r) {
    if (m < 1) throw std::invalid_argument("build_onion_peeling_matrix: m must be >= 1");
    if (!(delta_r > 0.0)) throw std::invalid_argument("build_onion_peeling_matrix: delta_r must be > 0");

    DenseMatrix b = DenseMatrix::zeros(m, m);
    for (int i = 0; i < m; ++i) {
        const double x = (i + 0.5) * delta_r;
        const double x2 = x * x;
        for (int j = i; j < m; ++j) {
            const double r_in = (j + 0.5) * delta_r;
            const double r_out = (j + 1.5) * delta_r;
            const double inner = std::max(r_in * r_in, x2) - x2;
            b.at(i, j) = 2.0 * (std::sqrt(r_out * r_out - x2) - std::sqrt(inner));
        }
    }
    return b;
}

DetectorGrid parallel_detector(const RadialGrid& grid) {
    DetectorGrid det;
    det.n_px_x = 2 * grid.m;
    det.n_px_y = grid.n_rows;
    det.delta_x = grid.delta_r;
    det.delta_y = grid.delta_y;
    det.center_x = double(grid.m);
    det.center_y = 0.5 * grid.n_rows;
    return det;
}

SparseOperator build_parallel_operator(const RadialGrid& grid) {
    grid.validate();
    const int m = grid.m;
    const DenseMatrix b = build_onion_peeling_matrix(m, grid.delta_r);

    SparseOperator op;
    op.rows = std::size_t(grid.n_rows) * (2 * m);
    op.cols = grid.cells();
    op.detector = parallel_detector(grid);
    op.volume = grid;

    // right half column p = m + i carries x_i; left half p = m - 1 - i mirrors it
    for (int k = 0; k < grid.n_rows; ++k) {
        const std::uint32_t row0 = std::uint32_t(k) * (2 * m);
        const std::uint32_t col0 = std::uint32_t(k) * m;
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                const double w = b.at(i, j);
                op.push(row0 + std::uint32_t(m + i), col0 + std::uint32_t(j), w);
                op.push(row0 + std::uint32_t(m - 1 - i), col0 + std::uint32_t(j), w);
            }
        }
    }
    op.finalize();
    op.norm_estimate = operator_norm_estimate(op, 100);
    return op;
}

namespace {

struct RaySegments {
    std::vector<std::uint32_t> cols;
    std::vector<double> lens;

    void add(std::uint32_t c, double len) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == c) {
                lens[k] += len;
                return;
            }
        }
        cols.push_back(c);
        lens.push_back(len);
    }
};

} // namespace

SparseOperator build_cone_operator(const ConeGeometry& geometry, const RadialGrid& grid,
                                   const DetectorGrid& detector) {
    geometry.validate();
    grid.validate();
    detector.validate();

    const double r_max = grid.r_max();
    const double src_r2 = geometry.source_x * geometry.source_x + geometry.source_z * geometry.source_z;
    if (src_r2 <= r_max * r_max && geometry.source_y >= grid.y_min() &&
        geometry.source_y <= grid.y_min() + grid.n_rows * grid.delta_y)
        throw std::invalid_argument("build_cone_operator: source lies inside the reconstruction cylinder");
    if (!(geometry.source_z < -r_max) || !(geometry.detector_z > r_max))
        throw std::invalid_argument("build_cone_operator: cylinder must sit between source and detector");

    const int m = grid.m;
    const int n_rows = grid.n_rows;
    const double y_lo = grid.plane_y(0);
    const double y_hi = grid.plane_y(n_rows);
    const double r_in = grid.interface_r(0);

    const double sx = geometry.source_x, sy = geometry.source_y, sz = geometry.source_z;

    SparseOperator op;
    op.rows = detector.pixels();
    op.cols = grid.cells();
    op.detector = detector;
    op.volume = grid;

    std::vector<RaySegments> per_ray(op.rows);

#pragma omp parallel for schedule(static)
    for (int py = 0; py < detector.n_px_y; ++py) {
        std::vector<double> ts;
        for (int px = 0; px < detector.n_px_x; ++px) {
            const std::size_t ray = std::size_t(py) * detector.n_px_x + px;
            const double dx = detector.pixel_x(px) - sx;
            const double dy = detector.pixel_y(py) - sy;
            const double dz = geometry.detector_z - sz;
            const double len_d = std::sqrt(dx * dx + dy * dy + dz * dz);

            // quadratic in t for ||(x, z)(t)|| = r_c
            const double qa = dx * dx + dz * dz;
            const double qb = 2.0 * (sx * dx + sz * dz);
            const double qc0 = sx * sx + sz * sz;
            if (qa <= 0.0) continue; // ray parallel to the axis cannot reach the detector

            // parameter window: outer cylinder, y slab stack, ray extent
            double t_lo = 0.0, t_hi = 1.0;
            {
                const double disc = qb * qb - 4.0 * qa * (qc0 - r_max * r_max);
                if (disc <= 1e-12 * qa * r_max * r_max) continue;
                const double sq = std::sqrt(disc);
                t_lo = std::max(t_lo, (-qb - sq) / (2.0 * qa));
                t_hi = std::min(t_hi, (-qb + sq) / (2.0 * qa));
            }
            if (std::fabs(dy) > 0.0) {
                const double ta = (y_lo - sy) / dy;
                const double tb = (y_hi - sy) / dy;
                t_lo = std::max(t_lo, std::min(ta, tb));
                t_hi = std::min(t_hi, std::max(ta, tb));
            } else if (sy < y_lo || sy >= y_hi) {
                continue;
            }
            if (t_lo >= t_hi) continue;

            ts.clear();
            ts.push_back(t_lo);
            ts.push_back(t_hi);
            for (int j = 0; j <= m; ++j) {
                const double rc = grid.interface_r(j);
                const double disc = qb * qb - 4.0 * qa * (qc0 - rc * rc);
                if (disc <= 1e-12 * qa * rc * rc) continue; // tangent: no crossing
                const double sq = std::sqrt(disc);
                const double t0 = (-qb - sq) / (2.0 * qa);
                const double t1 = (-qb + sq) / (2.0 * qa);
                if (t0 > t_lo && t0 < t_hi) ts.push_back(t0);
                if (t1 > t_lo && t1 < t_hi) ts.push_back(t1);
            }
            if (std::fabs(dy) > 0.0) {
                for (int k = 1; k < n_rows; ++k) {
                    const double t = (grid.plane_y(k) - sy) / dy;
                    if (t > t_lo && t < t_hi) ts.push_back(t);
                }
            }
            std::sort(ts.begin(), ts.end());

            for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
                const double ta = ts[s], tb = ts[s + 1];
                if (tb - ta <= 0.0) continue;
                const double tm = 0.5 * (ta + tb);
                const double x = sx + tm * dx;
                const double z = sz + tm * dz;
                const double y = sy + tm * dy;
                const double r = std::sqrt(x * x + z * z);
                if (r < r_in || r >= r_max) continue;
                const int j = int(std::floor(r / grid.delta_r - 0.5));
                if (j < 0 || j >= m) continue;
                const int k = int(std::floor((y - y_lo) / grid.delta_y));
                if (k < 0 || k >= n_rows) continue;
                per_ray[ray].add(std::uint32_t(k) * std::uint32_t(m) + std::uint32_t(j),
                                 (tb - ta) * len_d);
            }
        }
    }

    for (std::size_t ray = 0; ray < per_ray.size(); ++ray)
        for (std::size_t k = 0; k < per_ray[ray].cols.size(); ++k)
            op.push(std::uint32_t(ray), per_ray[ray].cols[k], per_ray[ray].lens[k]);

    op.finalize();
    op.norm_estimate = operator_norm_estimate(op, 100);
    return op;
}

void apply_forward(const SparseOperator& op, std::span<const double> u, std::span<double> out) {
    if (u.size() != op.cols || out.size() != op.rows)
        throw std::invalid_argument("apply_forward: shape mismatch");
    const auto* col = op.col_idx.data();
    const auto* w = op.weight.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < std::int64_t(op.rows); ++r) {
        double acc = 0.0;
        for (std::size_t k = op.row_ptr[r]; k < op.row_ptr[r + 1]; ++k)
            acc += w[k] * u[col[k]];
        out[std::size_t(r)] = acc;
    }
}

void apply_adjoint(const SparseOperator& op, std::span<const double> h, std::span<double> out) {
    if (h.size() != op.rows || out.size() != op.cols)
        throw std::invalid_argument("apply_adjoint: shape mismatch");
    const auto* row = op.row_idx.data();
    const auto* w = op.weight.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < std::int64_t(op.cols); ++c) {
        double acc = 0.0;
        for (std::size_t k = op.col_ptr[c]; k < op.col_ptr[c + 1]; ++k) {
            const std::size_t e = op.col_perm[k];
            acc += w[e] * h[row[e]];
        }
        out[std::size_t(c)] = acc;
    }
}

Projection apply_forward(const SparseOperator& op, const SampledField& u) {
    Projection d = Projection::zeros(op.detector);
    apply_forward(op, u.values, d.values);
    return d;
}

SampledField apply_adjoint(const SparseOperator& op, const Projection& h) {
    SampledField u = SampledField::zeros(op.volume);
    apply_adjoint(op, h.values, u.values);
    return u;
}

double operator_norm_estimate(const SparseOperator& op, int iters) {
    if (iters < 1) throw std::invalid_argument("operator_norm_estimate: iters must be >= 1");
    if (op.nnz() == 0) return 0.0;

    Rng rng(0x5eedULL);
    std::vector<double> v(op.cols), av(op.rows);
    for (auto& x : v) x = rng.uniform(0.5, 1.5);
    double nv = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (auto& x : v) x /= nv;

    double est = 0.0;
    for (int it = 0; it < iters; ++it) {
        apply_forward(op, v, av);
        const double na = std::sqrt(std::inner_product(av.begin(), av.end(), av.begin(), 0.0));
        est = na;
        if (na == 0.0) return 0.0;
        apply_adjoint(op, av, v);
        nv = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (nv == 0.0) return est;
        for (auto& x : v) x /= nv;
    }
    return est;
}

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

} // namespace

void save_operator(const std::string& path, const SparseOperator& op) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write("AXOP", 4);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, op.rows);
    put<std::uint64_t>(out, op.cols);
    put<std::uint64_t>(out, op.nnz());
    for (std::size_t k = 0; k < op.nnz(); ++k) {
        put<std::uint32_t>(out, op.row_idx[k]);
        put<std::uint32_t>(out, op.col_idx[k]);
        put<double>(out, op.weight[k]);
    }
    if (!out) throw std::runtime_error("short write: " + path);
}

SparseOperator load_operator(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "AXOP", 4) != 0)
        throw std::runtime_error("bad operator file magic: " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != 1) throw std::runtime_error("unsupported operator file version");
    SparseOperator op;
    op.rows = get<std::uint64_t>(in);
    op.cols = get<std::uint64_t>(in);
    const auto nnz = get<std::uint64_t>(in);
    op.row_idx.resize(nnz);
    op.col_idx.resize(nnz);
    op.weight.resize(nnz);
    for (std::uint64_t k = 0; k < nnz; ++k) {
        op.row_idx[k] = get<std::uint32_t>(in);
        op.col_idx[k] = get<std::uint32_t>(in);
        op.weight[k] = get<double>(in);
    }
    if (!in) throw std::runtime_error("truncated operator file: " + path);
    op.finalize();
    op.norm_estimate = operator_norm_estimate(op, 100);
    return op;
}

} // namespace axrec
