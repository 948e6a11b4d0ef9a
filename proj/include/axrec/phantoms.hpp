#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "axrec/operators.hpp"
#include "axrec/types.hpp"

namespace axrec {

enum class ProfileKind { Disk, Hemisphere, Parabolic, PowerThreeHalves, Gaussian };

/// Radial density profile with a closed-form projection.
struct AnalyticProfile {
    ProfileKind kind = ProfileKind::Disk;
    double delta = 1.0;     // support radius (all kinds except Gaussian)
    double sigma = 1.0;     // Gaussian width
    double amplitude = 1.0; // scale factor

    void validate() const;
    /// Peak density u(0).
    double peak() const;
};

double analytic_profile_eval(const AnalyticProfile& p, double r);

/// Closed-form projection of the profile at lateral offset x. The parabolic
/// and power-3/2 constants are the quadrature-verified values 4/3 and 3*pi/8.
double analytic_projection_eval(const AnalyticProfile& p, double x);

/// One profile occupying a contiguous band of grid rows.
struct ParallelPrimitive {
    AnalyticProfile profile;
    int row_begin = 0;
    int row_end = 0; // exclusive
};

struct ParallelSceneOptions {
    int min_primitives = 1;
    int max_primitives = 6;
    double delta_lo = 0.15; // fractions of r_max
    double delta_hi = 0.85;
    double amplitude_lo = 0.2;
    double amplitude_hi = 1.0;
    int row_margin = 0;    // keep bands this many rows away from the borders
    int min_band_rows = 2;
};

struct ParallelScene {
    std::uint64_t seed = 0;
    std::vector<ParallelPrimitive> primitives;
};

ParallelScene draw_parallel_scene(std::uint64_t seed, const RadialGrid& grid,
                                  const ParallelSceneOptions& opt);
SampledField rasterize_parallel_scene(const ParallelScene& scene, const RadialGrid& grid);
Projection project_parallel_scene(const ParallelScene& scene, const RadialGrid& grid);

/// Random multi-band scene with its analytic (noise-free) projection.
std::pair<SampledField, Projection> sample_scene_parallel(std::uint64_t seed, const RadialGrid& grid,
                                                          const ParallelSceneOptions& opt = {});

enum class SolidKind { Rod, Shell, Ellipsoid, Blob };

/// Axisymmetric solid in the (r, y) half-plane.
struct ScenePrimitive {
    SolidKind kind = SolidKind::Rod;
    double r_outer = 0.0;
    double r_inner = 0.0;  // shells only
    double y_center = 0.0;
    double half_height = 0.0; // rods/shells: half height; ellipsoid/blob: y semi-axis
    double density = 1.0;
};

struct ConeSceneOptions {
    int min_objects = 1;
    int max_objects = 40;
    double density_lo = 0.1;
    double density_hi = 20.0;
    /// Opacity guard: reject scenes whose projection exceeds this areal
    /// density (default keeps expected transmitted counts >= 1 at I0 = 1e5).
    double max_areal_density = 11.512925464970229;
    int object_pool_size = 10000;
    double pool_train_fraction = 0.8;
    bool draw_from_eval_pool = false;
    int max_attempts = 64;
};

struct SceneSpec {
    std::uint64_t seed = 0;
    std::vector<ScenePrimitive> primitives; // placement order; later entries win overlaps
    std::vector<int> object_ids;            // pool ids, parallel to primitives
};

SceneSpec draw_cone_scene(std::uint64_t seed, const RadialGrid& grid, const ConeSceneOptions& opt);
SampledField rasterize_cone_scene(const SceneSpec& scene, const RadialGrid& grid);

/// Rasterizes a random scene and projects it through the cone operator,
/// retrying with follow-up seeds until the opacity guard passes.
std::pair<SampledField, Projection> sample_scene_cone(std::uint64_t seed, const SparseOperator& op,
                                                      const ConeSceneOptions& opt = {});
std::pair<SampledField, Projection> sample_scene_cone(std::uint64_t seed, const RadialGrid& grid,
                                                      const ConeGeometry& geometry,
                                                      const DetectorGrid& detector,
                                                      const ConeSceneOptions& opt = {});

struct DegradationParams {
    // point-spread blur
    bool use_parametric_psf = false;
    int psf_support = 4;       // kernel radius in pixels
    double esf_a[6] = {0, 0, 0, 0, 0, 0}; // parametric kernel weights when enabled
    // transmission noise
    double i0 = 1e5;
    // detector counts noise (cone modality)
    bool poisson_gaussian = false;
    double gain = 1.0;
    double read_mu = 0.0;
    double read_sigma2 = 0.0;
};

struct DatasetConfig {
    std::string modality = "parallel"; // "parallel" | "cone"
    int n_scenes = 10;
    double train_fraction = 0.8;
    int augmentation = 5;
    std::uint64_t seed = 0;
    RadialGrid grid;
    DetectorGrid detector;              // cone only; derived for parallel
    std::optional<ConeGeometry> geometry;
    DegradationParams degradation;
    ParallelSceneOptions parallel_scene;
    ConeSceneOptions cone_scene;

    void validate() const;
};

struct SampleRecord {
    std::string role; // "train" | "eval"
    int scene = 0;
    int aug = 0;
    std::uint64_t noise_seed = 0;
    std::string truth_file;
    std::string clean_file;
    std::string noisy_file;
};

struct DatasetManifest {
    DatasetConfig config;
    std::vector<SampleRecord> samples;
    int n_train_scenes = 0;
    int n_eval_scenes = 0;
    std::string config_hash;
};

/// Generates scenes, applies the degradation chain, writes one f32 file per
/// field/projection plus manifest.json into out_dir.
DatasetManifest build_dataset(const DatasetConfig& config, const std::string& out_dir);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

} // namespace axrec
