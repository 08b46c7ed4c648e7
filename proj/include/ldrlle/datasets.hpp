#pragma once

#include "ldrlle/types.hpp"

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

namespace ldrlle {

/// Seeded random source shared by the generators and the experiments.
///
/// Algorithm "mt19937_64": the raw stream is std::mt19937_64, whose output
/// sequence is fixed by the standard. Uniform variates take the top 53 bits
/// scaled by 2^-53, normals use the Marsaglia polar method on those uniforms,
/// so the whole stream is reproducible across standard libraries.
class Rng
{
public:
  static constexpr const char* algorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : mEngine(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(mEngine() >> 11) * 0x1.0p-53; }
  double normal();
  std::uint64_t next() { return mEngine(); }

  /// Seed for an independent stream, derived from (master seed, stream index).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

private:
  std::mt19937_64 mEngine;
  bool mHasSpare = false;
  double mSpare = 0.0;
};

/// Points together with the ground-truth parameters they were generated from.
struct GeneratedSample
{
  PointCloud points;
  Matrix preimage; // N x d
  std::string generatorName;
  std::uint64_t seed = 0;
};

/// Angular opening of the default open ring. With 16 points and K = 4 the
/// opening is wider than four sample spacings, so no neighborhood reaches
/// across it.
inline constexpr double kRingGap = std::numbers::pi / 2.0;

/// n points on the unit circle, angles evenly spaced over [0, 2*pi - gap].
/// Deterministic; the preimage is the angle.
GeneratedSample genOpenRing(Index n, double gap = kRingGap);

/// S-curve. Per point draws u then h uniform on [0,1).
GeneratedSample genScurve(Index n, std::uint64_t seed);

/// Swissroll. Per point draws u then h uniform on [0,1).
GeneratedSample genSwissroll(Index n, std::uint64_t seed);

/// Single-point maps used by the generators; (u, h) in [0,1]^2.
Eigen::Vector3d scurvePoint(double u, double h);
Eigen::Vector3d swissrollPoint(double u, double h);

/// Dispatch by name: "ring", "scurve" or "swissroll".
GeneratedSample generate(const std::string& name, Index n, std::uint64_t seed);

Matrix parseCsv(const std::string& text);
std::string formatCsv(const Matrix& m);

PointCloud loadCsv(const std::filesystem::path& path);
Matrix loadMatrixCsv(const std::filesystem::path& path);
void saveCsv(const Matrix& m, const std::filesystem::path& path);
inline void saveCsv(const PointCloud& cloud, const std::filesystem::path& path)
{
  saveCsv(cloud.data(), path);
}

/// Sibling path that holds a sample's preimage: "<stem>.preimage.csv".
std::filesystem::path preimagePath(const std::filesystem::path& points);

} // namespace ldrlle
