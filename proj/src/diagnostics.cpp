#include "ldrlle/diagnostics.hpp"
#include "ldrlle/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace ldrlle {

double reconstructionError(const NeighborhoodMatrix& xi, const Vector& w)
{
  if (w.size() != xi.rows.rows())
    throw InvalidArgument("weight vector has " + std::to_string(w.size()) + " entries for " +
                          std::to_string(xi.rows.rows()) + " neighbors");
  return (xi.rows.transpose() * w).squaredNorm();
}

std::optional<double> perturbationBound(double lambdaD, double alpha, double epsilon)
{
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(lambdaD > 0.0)) throw InvalidArgument("lambda_d must be positive");
  const double l2 = lambdaD * lambdaD;
  const double limit = std::min(l2 * l2 / 72.0, l2 * (1.0 - alpha) / 72.0);
  if (!(epsilon < limit)) return std::nullopt;
  return 20.0 * epsilon / (l2 * (1.0 - alpha));
}

bool spectralGapHolds(const NeighborhoodSpectrum& s)
{
  const double ld = s.singularValues(s.d - 1);
  const double next = s.d < s.k() ? s.singularValues(s.d) : 0.0;
  return next < std::min(ld * ld, ld / 72.0);
}

Index PerturbationReport::violations() const
{
  Index count = 0;
  for (std::size_t t = 0; t < distancesLdr.size(); ++t)
    if (preconditionsMet[t] && !(distancesLdr[t] < bound)) ++count;
  return count;
}

NeighborhoodMatrix gridCross(double spacing)
{
  Matrix rows = Matrix::Zero(4, 4);
  rows(0, 0) = spacing;
  rows(1, 0) = -spacing;
  rows(2, 1) = spacing;
  rows(3, 1) = -spacing;
  return makeNeighborhood(std::move(rows));
}

std::vector<PerturbationReport> perturbationExperiment(const PerturbationConfig& config)
{
  if (config.trials < 1) throw InvalidArgument("trials must be positive");
  if (!(config.topSingularValue > 0.0 && config.topSingularValue < 1.0))
    throw InvalidArgument("the base neighborhood must be scaled to lambda_1 in (0, 1)");
  for (double eps : config.epsilons)
    if (!(eps > 0.0)) throw InvalidArgument("perturbation magnitudes must be positive");

  constexpr Index d = 2;
  const NeighborhoodMatrix base = gridCross(config.topSingularValue / std::sqrt(2.0));
  const NeighborhoodSpectrum spectrum = neighborhoodSpectrum(base, d);
  const double lambdaD = spectrum.singularValues(d - 1);
  const bool assumptions = spectralGapHolds(spectrum) && spectrum.singularValues(0) < 1.0;
  const Vector uniform = Vector::Constant(4, 0.25);

  std::vector<PerturbationReport> reports;
  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    const double eps = config.epsilons[e];
    const std::uint64_t epsSeed = Rng::derive(config.seed, e);
    const auto bound = perturbationBound(lambdaD, spectrum.alpha, eps);

    PerturbationReport report;
    report.epsilon = eps;
    report.trials = config.trials;
    report.bound = 20.0 * eps / (lambdaD * lambdaD * (1.0 - spectrum.alpha));
    for (Index t = 0; t < config.trials; ++t) {
      Rng rng(Rng::derive(epsSeed, static_cast<std::uint64_t>(t)));
      Matrix noise(4, 4);
      for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) noise(i, j) = rng.normal();
      noise /= noise.norm();
      const NeighborhoodMatrix perturbed = makeNeighborhood(base.rows + eps * noise);

      double classical = std::numeric_limits<double>::quiet_NaN();
      try {
        classical = (lleWeightsPinv(perturbed) - uniform).norm();
      } catch (const DegenerateWeights&) {
      }
      report.distancesClassical.push_back(classical);
      report.distancesLdr.push_back((ldrWeights(perturbed, d) - uniform).norm());
      report.preconditionsMet.push_back(assumptions && bound.has_value());
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

namespace {

double quantile(std::vector<double> v, double q)
{
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

nlohmann::json summary(const std::vector<double>& v)
{
  return {{"median", quantile(v, 0.5)}, {"p95", quantile(v, 0.95)}, {"max", quantile(v, 1.0)}};
}

std::string fmt(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

} // namespace

nlohmann::json perturbationJson(const PerturbationConfig& config, const std::vector<PerturbationReport>& reports)
{
  nlohmann::json out;
  out["config"] = {{"epsilons", config.epsilons},
                   {"trials", config.trials},
                   {"seed", config.seed},
                   {"rng", Rng::algorithm},
                   {"top_singular_value", config.topSingularValue},
                   {"neighborhood", "grid cross, K = D = 4"},
                   {"d", 2}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    const auto met = std::count(r.preconditionsMet.begin(), r.preconditionsMet.end(), true);
    const auto degenerate = std::count_if(r.distancesClassical.begin(), r.distancesClassical.end(),
                                          [](double x) { return std::isnan(x); });
    rows.push_back({{"epsilon", r.epsilon},
                    {"trials", r.trials},
                    {"bound", r.bound},
                    {"preconditions_met", met},
                    {"violations", r.violations()},
                    {"ldr", summary(r.distancesLdr)},
                    {"classical", summary(r.distancesClassical)},
                    {"classical_degenerate", degenerate}});
  }
  out["per_epsilon"] = std::move(rows);
  return out;
}

std::string perturbationCsv(const std::vector<PerturbationReport>& reports)
{
  std::string out = "epsilon,trial,classical,ldr,preconditions_met\n";
  for (const auto& r : reports)
    for (std::size_t t = 0; t < r.distancesLdr.size(); ++t)
      out += fmt(r.epsilon) + ',' + std::to_string(t) + ',' + fmt(r.distancesClassical[t]) + ',' +
             fmt(r.distancesLdr[t]) + ',' + (r.preconditionsMet[t] ? "1" : "0") + '\n';
  return out;
}

double phiOverN(const Matrix& z, const SparseMatrix& w) { return phi(z, w) / static_cast<double>(z.rows()); }

PreimageCheckResult preimageResidualCheck(const PointCloud& points, const Matrix& preimage, Index k, Index d,
                             const PreimageCheckOptions& options)
{
  if (preimage.rows() != points.size())
    throw InvalidArgument("preimage has " + std::to_string(preimage.rows()) + " rows for " +
                          std::to_string(points.size()) + " points");
  if (!preimage.allFinite()) throw InvalidArgument("preimage contains non-finite values");

  const NeighborGraph graph = knn(points, k);
  const WeightAssembly assembly = assembleWeightMatrix(points, graph, LdrMethod{d});

  PreimageCheckResult r;
  r.n = points.size();
  r.phiZOverN = phiOverN(preimage, assembly.w);
  for (const auto& s : assembly.spectra) {
    r.maxLambdaDp1 = std::max(r.maxLambdaDp1, s.singularValues(d));
    r.rMax = std::max(r.rMax, s.radius);
  }
  const double scale = r.maxLambdaDp1 * r.rMax * r.rMax;
  r.ratio = scale > 0.0 ? r.phiZOverN / scale
                        : (r.phiZOverN == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

  if (options.nullDraws > 0) {
    Rng rng(options.seed);
    std::vector<Index> perm(static_cast<std::size_t>(r.n));
    double total = 0.0;
    for (Index draw = 0; draw < options.nullDraws; ++draw) {
      std::iota(perm.begin(), perm.end(), Index{0});
      // Fisher-Yates on our own stream; std::shuffle is not portable
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.next() % (i + 1));
        std::swap(perm[i], perm[j]);
      }
      Matrix shuffled(preimage.rows(), preimage.cols());
      for (Index i = 0; i < r.n; ++i) shuffled.row(i) = preimage.row(perm[static_cast<std::size_t>(i)]);
      total += phiOverN(shuffled, assembly.w);
    }
    r.nullPhiZOverN = total / static_cast<double>(options.nullDraws);
  }
  return r;
}

double linearR2(const Matrix& x, const Matrix& y)
{
  if (x.rows() != y.rows())
    throw InvalidArgument("linear fit: X has " + std::to_string(x.rows()) + " rows, Y has " +
                          std::to_string(y.rows()));
  const Index n = x.rows();
  Matrix design(n, x.cols() + 1);
  design << x, Matrix::Ones(n, 1);
  const Matrix coef = design.completeOrthogonalDecomposition().solve(y);
  const double residual = (y - design * coef).squaredNorm();
  const double total = (y.rowwise() - y.colwise().mean()).squaredNorm();
  if (!(total > 0.0)) return residual == 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - residual / total, 0.0, 1.0);
}

double procrustesResidual(const Matrix& y, const Matrix& reference)
{
  if (y.rows() != reference.rows() || y.cols() != reference.cols())
    throw InvalidArgument("Procrustes alignment needs equally shaped matrices");
  Matrix a = y.rowwise() - y.colwise().mean();
  Matrix b = reference.rowwise() - reference.colwise().mean();
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw InvalidArgument("Procrustes alignment of a constant configuration");
  a /= na;
  b /= nb;
  const double s = Eigen::JacobiSVD<Matrix>(a.transpose() * b).singularValues().sum();
  return std::clamp(1.0 - s * s, 0.0, 1.0);
}

namespace {

Vector ranks(const Vector& v)
{
  const Index n = v.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) < v(b); });
  Vector r(n);
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && v(order[static_cast<std::size_t>(j + 1)]) == v(order[static_cast<std::size_t>(i)])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index t = i; t <= j; ++t) r(order[static_cast<std::size_t>(t)]) = avg;
    i = j + 1;
  }
  return r;
}

} // namespace

double monotonicity1d(const Vector& y, const Vector& preimage)
{
  if (y.size() != preimage.size()) throw InvalidArgument("rank correlation needs equal lengths");
  const Vector ry = ranks(y), rz = ranks(preimage);
  const Vector cy = ry.array() - ry.mean();
  const Vector cz = rz.array() - rz.mean();
  const double denom = cy.norm() * cz.norm();
  if (!(denom > 0.0)) throw InvalidArgument("rank correlation is undefined for constant input");
  return std::clamp(cy.dot(cz) / denom, -1.0, 1.0);
}

EmbeddingDiagnostics linearProjectionDiagnostic(const PointCloud& x, const Embedding& y, const SparseMatrix& w,
                                                const Matrix* reference)
{
  if (x.size() != y.y.rows()) throw InvalidArgument("embedding and input have different point counts");
  EmbeddingDiagnostics out;
  out.phiValue = phi(y.y, w);
  out.linearR2 = linearR2(x.data(), y.y);
  if (reference) {
    if (reference->cols() == y.y.cols()) out.procrustesResidual = procrustesResidual(y.y, *reference);
    if (reference->cols() == 1 && y.y.cols() == 1)
      out.rankCorrelation = monotonicity1d(y.y.col(0), reference->col(0));
  }
  return out;
}

} // namespace ldrlle
