// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "ldrlle/datasets.hpp"
#include "ldrlle/diagnostics.hpp"
#include "ldrlle/embedding.hpp"
#include "ldrlle/errors.hpp"
#include "ldrlle/neighbors.hpp"
#include "ldrlle/weights.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace ldrlle;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double median(std::vector<double> v)
{
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double seconds(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Index uniformIndex(Rng& rng, Index lo, Index hi) { return lo + static_cast<Index>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1)); }

// Embeddings of the 2000-point swissroll shared by criteria 5 to 7.
struct SwissrollRuns
{
  GeneratedSample sample = genSwissroll(2000, 7);
  NeighborGraph graph = knn(sample.points, 12);
  WeightAssembly classical = assembleWeightMatrix(sample.points, graph, ClassicalMethod{1e-9});
  WeightAssembly ldr = assembleWeightMatrix(sample.points, graph, LdrMethod{2});
  Embedding classical1 = embed(classical.w, 1);
  Embedding classical2 = embed(classical.w, 2);
  Embedding ldr2 = embed(ldr.w, 2);
};

const SwissrollRuns& swissroll()
{
  static const SwissrollRuns runs;
  return runs;
}

const std::vector<PerturbationReport>& perturbation(double* elapsed = nullptr)
{
  static double time = 0.0;
  static const std::vector<PerturbationReport> reports = [] {
    const auto start = std::chrono::steady_clock::now();
    auto r = perturbationExperiment(PerturbationConfig{});
    time = seconds(start);
    return r;
  }();
  if (elapsed) *elapsed = time;
  return reports;
}

Outcome criterion1()
{
  double elapsed = 0.0;
  const auto& reports = perturbation(&elapsed);
  Index violations = 0, eligible = 0;
  for (const auto& r : reports) {
    violations += r.violations();
    eligible += static_cast<Index>(std::count(r.preconditionsMet.begin(), r.preconditionsMet.end(), true));
  }
  return {violations == 0 && eligible > 0 && elapsed < 10.0,
          std::to_string(violations) + " violations in " + std::to_string(eligible) + " eligible trials, " +
              num(elapsed) + " s"};
}

Outcome criterion2()
{
  for (const auto& r : perturbation()) {
    if (r.epsilon != 1e-4) continue;
    const double ldr = median(r.distancesLdr), classical = median(r.distancesClassical);
    return {ldr < 1e-2 && classical > 0.1, "median LDR " + num(ldr) + ", median classical " + num(classical)};
  }
  return {false, "epsilon 1e-4 missing from the experiment"};
}

Outcome criterion3()
{
  const auto start = std::chrono::steady_clock::now();
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Index k = uniformIndex(rng, 4, 12), dim = uniformIndex(rng, 2, 6);
    const Index d = uniformIndex(rng, 1, std::min(k, dim) - 1);
    const Matrix x = oracle::randomMatrix(k, dim, rng);
    const Vector w = ldrWeights(makeNeighborhood(x), d);
    worst = std::max(worst, (w - oracle::kktMinNormWeights(x, d)).norm());
  }
  const double elapsed = seconds(start);
  return {worst < 1e-8 && elapsed < 5.0, "max l2 gap to KKT " + num(worst) + ", " + num(elapsed) + " s"};
}

Outcome criterion4()
{
  Rng rng(4);
  double worstGap = 0.0, worstSlack = 0.0;
  int done = 0;
  while (done < 200) {
    const Index dim = uniformIndex(rng, 2, 6), k = uniformIndex(rng, 2, dim);
    const Matrix x = oracle::randomMatrix(k, dim, rng);
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(x * x.transpose()).eigenvalues();
    if (ev.minCoeff() < 1e-6 * ev.maxCoeff()) continue;
    const auto xi = makeNeighborhood(x);
    const Vector w = lleWeights(xi, 0.0);
    const double best = reconstructionError(xi, w);
    for (int v = 0; v < 100; ++v)
      worstSlack = std::max(worstSlack, best - reconstructionError(xi, oracle::randomAffineVector(k, rng)));
    worstGap = std::max(worstGap, (w - oracle::kktClassicalWeights(x)).norm());
    ++done;
  }
  return {worstSlack <= 0.0 && worstGap < 1e-8,
          "max error excess over feasible vectors " + num(worstSlack) + ", max l2 gap to KKT " + num(worstGap)};
}

Outcome criterion5()
{
  const auto& s = swissroll();
  const auto ring = genOpenRing(16);
  const auto ringW = assembleWeightMatrix(ring.points, knn(ring.points, 4), LdrMethod{1}).w;
  struct Case
  {
    const Embedding* e;
    const SparseMatrix* w;
  };
  const Embedding ringE = embed(ringW, 1);
  const Case cases[] = {{&s.classical1, &s.classical.w}, {&s.classical2, &s.classical.w}, {&s.ldr2, &s.ldr.w},
                        {&ringE, &ringW}};
  double mean = 0.0, ortho = 0.0, trace = 0.0, solver = 0.0;
  for (const auto& c : cases) {
    const Matrix& y = c.e->y;
    const Index d = y.cols();
    mean = std::max(mean, (y.transpose() * Vector::Ones(y.rows())).cwiseAbs().maxCoeff());
    ortho = std::max(ortho, (y.transpose() * y - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
    const double value = phi(y, *c.w);
    trace = std::max(trace, std::abs(value - c.e->eigenvalues.sum()) / value);
    // the eigensolver's own eigenvalues, accurate to a multiple of eps |M|
    const SparseMatrix m = buildM(*c.w);
    const double scale = Matrix(m).norm();
    const Vector raw = smallestEigenpairs(m, d, Deflation::constant).values;
    solver = std::max(solver, std::abs(value - raw.sum()) / scale);
  }
  return {mean < 1e-8 && ortho < 1e-8 && trace < 1e-8 && solver < 1e-12,
          "|Y'1|max " + num(mean) + ", |Y'Y-I|max " + num(ortho) + ", Phi vs eigenvalue sum rel " + num(trace) +
              ", Phi vs solver eigenvalues " + num(solver) + " |M|"};
}

Outcome criterion6()
{
  const auto& s = swissroll();
  const Vector a = s.classical1.y.col(0), b = s.classical2.y.col(0);
  const double dev = std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
  return {dev < 1e-6, "classical max abs deviation " + num(dev)};
}

Outcome criterion7()
{
  const auto& s = swissroll();
  const double rc = linearR2(s.sample.points.data(), s.classical2.y);
  const double rl = linearR2(s.sample.points.data(), s.ldr2.y);
  return {rc > 0.9 && rl <= rc - 0.2, "linear R^2 classical " + num(rc) + ", LDR " + num(rl)};
}

Outcome criterion8()
{
  const auto start = std::chrono::steady_clock::now();
  const auto ring = genOpenRing(16);
  const auto g = knn(ring.points, 4);
  const Vector t = ring.preimage.col(0);
  const double ldr =
      std::abs(monotonicity1d(embed(assembleWeightMatrix(ring.points, g, LdrMethod{1}).w, 1).y.col(0), t));
  const double classical = std::abs(
      monotonicity1d(embed(assembleWeightMatrix(ring.points, g, ClassicalMethod{1e-9}).w, 1).y.col(0), t));
  const double elapsed = seconds(start);
  return {ldr > 0.95 && classical < ldr && elapsed < 1.0,
          "|rho| LDR " + num(ldr) + ", classical " + num(classical) + ", " + num(elapsed) + " s"};
}

Outcome criterion9()
{
  std::ostringstream detail;
  bool pass = true;
  double base = 0.0;
  for (Index n : {500, 1000, 2000}) {
    const auto r = preimageResidualCheck(genSwissroll(n, 7), 12, 2);
    if (n == 500) base = r.ratio;
    pass = pass && std::isfinite(r.ratio) && r.ratio <= 2.0 * base && 10.0 * r.phiZOverN <= r.nullPhiZOverN;
    detail << (n == 500 ? "" : "; ") << "n=" << n << " ratio " << num(r.ratio) << " Phi(Z)/N " << num(r.phiZOverN)
           << " null " << num(r.nullPhiZOverN);
  }
  return {pass, detail.str()};
}

Outcome criterion10()
{
  Rng rng(10);
  double worst = 0.0;
  auto compare = [&](const Matrix& x, const Matrix& moved, Index d) {
    const auto a = makeNeighborhood(x), b = makeNeighborhood(moved);
    worst = std::max(worst, (ldrWeights(a, d) - ldrWeights(b, d)).norm());
    worst = std::max(worst, (lleWeights(a, 1e-3) - lleWeights(b, 1e-3)).norm());
    if (x.rows() <= x.cols()) worst = std::max(worst, (lleWeights(a, 0.0) - lleWeights(b, 0.0)).norm());
  };
  for (int t = 0; t < 100; ++t) {
    const Index k = uniformIndex(rng, 4, 12), dim = uniformIndex(rng, 2, 6);
    const Index d = uniformIndex(rng, 1, std::min(k, dim) - 1);
    const Matrix x = oracle::randomMatrix(k, dim, rng);
    for (double c : {1e-3, 1e3}) compare(x, c * x, d);
    compare(x, x * oracle::randomOrthogonal(dim, rng), d);
  }

  const auto roll = genSwissroll(500, 10);
  const auto base = knn(roll.points, 12);
  Matrix moved = roll.points.data() * oracle::randomOrthogonal(3, rng);
  moved.rowwise() += Eigen::RowVector3d(5.0, -2.0, 11.0);
  const auto g = knn(PointCloud(moved), 12);
  Index mismatched = 0;
  for (Index i = 0; i < base.size(); ++i) {
    std::set<Index> a, b;
    for (Index j = 0; j < base.k; ++j) {
      a.insert(base.indices(i, j));
      b.insert(g.indices(i, j));
    }
    mismatched += a != b;
  }
  return {worst < 1e-10 && mismatched == 0,
          "max weight change " + num(worst) + ", knn rows changed " + std::to_string(mismatched)};
}

Outcome criterion11()
{
  const Vector w = lleWeights(gridCross(), 1e6);
  const double dev = (w - Vector::Constant(4, 0.25)).cwiseAbs().maxCoeff();
  return {dev < 1e-6, "max deviation from uniform " + num(dev)};
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"perturbation bound never violated", criterion1},
      {"LDR vs classical separation under noise", criterion2},
      {"LDR weights match the KKT oracle", criterion3},
      {"classical weights are the constrained minimizer", criterion4},
      {"embedding constraints and trace identity", criterion5},
      {"classical embeddings nest", criterion6},
      {"linear projection phenomenon", criterion7},
      {"open ring recovery", criterion8},
      {"preimage residual stays bounded", criterion9},
      {"scale and rotation invariance", criterion10},
      {"heavy regularization gives uniform weights", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
