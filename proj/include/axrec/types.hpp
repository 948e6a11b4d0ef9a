#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace axrec {

/// Cylindrical (r, y) reconstruction grid. Annulus j spans radii
/// [(j+1/2)*delta_r, (j+3/2)*delta_r); its sample point sits on the inner
/// interface, at the same abscissa as detector pixel j. The outermost
/// interface is r_max = (m+1/2)*delta_r. Rows are centered on y = 0.
struct RadialGrid {
    int m = 0;            // radial bins
    double delta_r = 0.0; // bin width
    int n_rows = 1;       // axial rows
    double delta_y = 1.0; // axial spacing

    double r_max() const { return (m + 0.5) * delta_r; }
    double interface_r(int j) const { return (j + 0.5) * delta_r; } // j = 0..m
    double sample_r(int j) const { return (j + 0.5) * delta_r; }
    double y_min() const { return -0.5 * n_rows * delta_y; }
    double plane_y(int k) const { return y_min() + k * delta_y; } // k = 0..n_rows
    double sample_y(int k) const { return y_min() + (k + 0.5) * delta_y; }
    std::size_t cells() const { return std::size_t(m) * std::size_t(n_rows); }

    void validate() const {
        if (m < 1 || n_rows < 1 || !(delta_r > 0.0) || !(delta_y > 0.0))
            throw std::invalid_argument("RadialGrid: need m >= 1, n_rows >= 1 and positive spacings");
    }
};

/// Axisymmetric density samples u(r, y), row-major (row, radial bin).
struct SampledField {
    RadialGrid grid;
    std::vector<double> values;

    static SampledField zeros(const RadialGrid& g) {
        g.validate();
        return SampledField{g, std::vector<double>(g.cells(), 0.0)};
    }
    double& at(int row, int j) { return values[std::size_t(row) * grid.m + j]; }
    double at(int row, int j) const { return values[std::size_t(row) * grid.m + j]; }

    void validate() const {
        grid.validate();
        if (values.size() != grid.cells())
            throw std::invalid_argument("SampledField: values size does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("SampledField: non-finite value");
    }
};

/// Detector pixel lattice. center_x / center_y give the pixel coordinate of
/// the symmetry axis, so pixel (row, col) is centered at
/// x = (col + 1/2 - center_x) * delta_x, y = (row + 1/2 - center_y) * delta_y.
struct DetectorGrid {
    int n_px_x = 0;
    int n_px_y = 0;
    double delta_x = 0.0;
    double delta_y = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;

    double pixel_x(int col) const { return (col + 0.5 - center_x) * delta_x; }
    double pixel_y(int row) const { return (row + 0.5 - center_y) * delta_y; }
    std::size_t pixels() const { return std::size_t(n_px_x) * std::size_t(n_px_y); }

    void validate() const {
        if (n_px_x < 1 || n_px_y < 1 || !(delta_x > 0.0) || !(delta_y > 0.0))
            throw std::invalid_argument("DetectorGrid: need positive pixel counts and pitches");
    }
};

/// Detector-plane absorption image d(x, y), row-major (row, col).
struct Projection {
    DetectorGrid grid;
    std::vector<double> values;

    static Projection zeros(const DetectorGrid& g) {
        g.validate();
        return Projection{g, std::vector<double>(g.pixels(), 0.0)};
    }
    double& at(int row, int col) { return values[std::size_t(row) * grid.n_px_x + col]; }
    double at(int row, int col) const { return values[std::size_t(row) * grid.n_px_x + col]; }

    void validate() const {
        grid.validate();
        if (values.size() != grid.pixels())
            throw std::invalid_argument("Projection: values size does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("Projection: non-finite value");
    }
};

/// Point-source acquisition geometry. The symmetry axis is the y-axis through
/// the origin; the detector plane is z = detector_z with rays running from the
/// source at (source_x, source_y, source_z), source_z < 0 < detector_z.
struct ConeGeometry {
    double source_x = 0.0;
    double source_y = 0.0;
    double source_z = 0.0;
    double detector_z = 0.0;
    double dist_source_object = 0.0;   // delta_so
    double dist_source_detector = 0.0; // delta_sd

    static ConeGeometry from_distances(double so, double sd,
                                       double source_x = 0.0, double source_y = 0.0) {
        ConeGeometry g;
        g.source_x = source_x;
        g.source_y = source_y;
        g.source_z = -so;
        g.detector_z = sd - so;
        g.dist_source_object = so;
        g.dist_source_detector = sd;
        g.validate();
        return g;
    }

    double magnification() const { return dist_source_detector / dist_source_object; }

    void validate() const {
        if (!(source_z < 0.0) || !(detector_z > 0.0))
            throw std::invalid_argument("ConeGeometry: need source_z < 0 < detector_z");
        if (!(magnification() > 1.0))
            throw std::invalid_argument("ConeGeometry: magnification must exceed 1");
    }
};

} // namespace axrec
