#include "ldrlle/datasets.hpp"
#include "ldrlle/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace ldrlle {

PointCloud::PointCloud(Matrix data) : mData(std::move(data))
{
  if (mData.rows() < 1 || mData.cols() < 1)
    throw InvalidArgument("point cloud must have at least one point and one dimension");
  if (!mData.allFinite()) throw InvalidArgument("point cloud contains non-finite values");
}

double Rng::normal()
{
  if (mHasSpare) {
    mHasSpare = false;
    return mSpare;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  mSpare = v * f;
  mHasSpare = true;
  return u * f;
}

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream)
{
  // splitmix64 finalizer over the pair
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GeneratedSample genOpenRing(Index n, double gap)
{
  if (n < 3) throw InvalidArgument("open ring needs at least 3 points");
  if (!(gap > 0.0 && gap < 2.0 * std::numbers::pi)) throw InvalidArgument("ring gap must lie in (0, 2 pi)");
  const double span = 2.0 * std::numbers::pi - gap;
  Matrix x(n, 2);
  Matrix z(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double theta = span * static_cast<double>(i) / static_cast<double>(n - 1);
    x(i, 0) = std::cos(theta);
    x(i, 1) = std::sin(theta);
    z(i, 0) = theta;
  }
  return {PointCloud(std::move(x)), std::move(z), "ring", 0};
}

Eigen::Vector3d scurvePoint(double u, double h)
{
  const double t = 3.0 * std::numbers::pi * (u - 0.5);
  const double sign = (t > 0.0) - (t < 0.0);
  return {std::sin(t), 2.0 * h, sign * (std::cos(t) - 1.0)};
}

Eigen::Vector3d swissrollPoint(double u, double h)
{
  const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * u);
  return {t * std::cos(t), 21.0 * h, t * std::sin(t)};
}

namespace {

template <typename PointFn, typename ParamFn>
GeneratedSample sampleSurface(Index n, std::uint64_t seed, const char* name, PointFn point,
                              ParamFn param)
{
  if (n < 1) throw InvalidArgument(std::string(name) + " needs at least 1 point");
  Rng rng(seed);
  Matrix x(n, 3);
  Matrix z(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double h = rng.uniform();
    x.row(i) = point(u, h).transpose();
    z.row(i) = param(u, h).transpose();
  }
  return {PointCloud(std::move(x)), std::move(z), name, seed};
}

} // namespace

GeneratedSample genScurve(Index n, std::uint64_t seed)
{
  return sampleSurface(n, seed, "scurve", scurvePoint, [](double u, double h) {
    return Eigen::Vector2d(3.0 * std::numbers::pi * (u - 0.5), 2.0 * h);
  });
}

GeneratedSample genSwissroll(Index n, std::uint64_t seed)
{
  return sampleSurface(n, seed, "swissroll", swissrollPoint, [](double u, double h) {
    return Eigen::Vector2d(1.5 * std::numbers::pi * (1.0 + 2.0 * u), 21.0 * h);
  });
}

GeneratedSample generate(const std::string& name, Index n, std::uint64_t seed)
{
  if (name == "ring") {
    auto s = genOpenRing(n);
    s.seed = seed;
    return s;
  }
  if (name == "scurve") return genScurve(n, seed);
  if (name == "swissroll") return genSwissroll(n, seed);
  throw InvalidArgument("unknown generator '" + name + "' (expected ring, scurve or swissroll)");
}

Matrix parseCsv(const std::string& text)
{
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::size_t lineNo = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Index count = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      std::size_t b = pos, e = end;
      while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      double v = 0.0;
      const char* first = line.data() + b;
      const char* last = line.data() + e;
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (b == e || ec != std::errc() || ptr != last)
        throw FormatError("non-numeric cell '" + line.substr(b, e - b) + "' at line " +
                              std::to_string(lineNo) + ", column " + std::to_string(count + 1),
                          lineNo, static_cast<std::size_t>(count + 1));
      values.push_back(v);
      ++count;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cols < 0) cols = count;
    else if (count != cols)
      throw FormatError("ragged row at line " + std::to_string(lineNo) + ": expected " +
                            std::to_string(cols) + " columns, found " + std::to_string(count),
                        lineNo);
    ++rows;
  }
  if (rows == 0) throw FormatError("empty CSV input", lineNo);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return m;
}

std::string formatCsv(const Matrix& m)
{
  std::string out;
  char buf[32];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      // shortest representation that round-trips exactly
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(i, j));
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

Matrix loadMatrixCsv(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseCsv(ss.str());
}

PointCloud loadCsv(const std::filesystem::path& path) { return PointCloud(loadMatrixCsv(path)); }

void saveCsv(const Matrix& m, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << formatCsv(m);
}

std::filesystem::path preimagePath(const std::filesystem::path& points)
{
  auto p = points;
  p.replace_extension();
  p += ".preimage.csv";
  return p;
}

} // namespace ldrlle
