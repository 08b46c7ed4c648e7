// ldrlle command-line tool: generate, embed, perturb, theorem2.

#include "ldrlle/datasets.hpp"
#include "ldrlle/diagnostics.hpp"
#include "ldrlle/embedding.hpp"
#include "ldrlle/errors.hpp"
#include "ldrlle/neighbors.hpp"
#include "ldrlle/weights.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace ldrlle;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum ExitCode : int
{
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDisconnected = 3,
  kGeneralPosition = 4,
  kNumerical = 5,
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kGenerators{"ring", "scurve", "swissroll"};

void writeText(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void writeJson(const fs::path& path, const ordered_json& j) { writeText(path, j.dump(2) + "\n"); }

fs::path sidecarPath(const fs::path& out)
{
  fs::path p = out;
  return p.replace_extension(".json");
}

// --- generate -------------------------------------------------------------

struct GenerateArgs
{
  std::string name;
  Index n = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

int runGenerate(const GenerateArgs& a)
{
  const GeneratedSample s = generate(a.name, a.n, a.seed);
  const fs::path out = a.out.empty() ? fs::path(a.name + ".csv") : fs::path(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  saveCsv(s.points, out);
  saveCsv(s.preimage, preimagePath(out));
  std::cout << "wrote " << out.string() << " (" << s.points.size() << " x " << s.points.dim() << ") and "
            << preimagePath(out).string() << "\n";
  return kOk;
}

// --- embed ----------------------------------------------------------------

struct EmbedArgs
{
  std::string input;
  std::string generator;
  Index n = 2000;
  std::uint64_t seed = 1;
  Index k = 12;
  Index d = 2;
  std::string method = "ldr";
  double delta = kDefaultDelta;
  std::string out = "embedding.csv";
  std::string weightsOut;
  std::string spectraOut;
  std::string solver = "auto";
};

ordered_json embedConfig(const EmbedArgs& a, const fs::path& sidecar)
{
  ordered_json c;
  c["command"] = "embed";
  if (!a.input.empty()) {
    c["input"] = a.input;
  } else {
    c["generator"] = {{"name", a.generator}, {"n", a.n}, {"seed", a.seed}};
  }
  c["k"] = a.k;
  c["d"] = a.d;
  c["method"] = a.method;
  if (a.method == "classical") c["delta"] = a.delta;
  c["seed"] = a.seed;
  c["solver"] = a.solver;
  ordered_json outputs{{"embedding", a.out}, {"sidecar", sidecar.string()}};
  if (!a.weightsOut.empty()) outputs["weights"] = a.weightsOut;
  if (!a.spectraOut.empty()) outputs["spectra"] = a.spectraOut;
  c["outputs"] = outputs;
  return c;
}

int runEmbed(const EmbedArgs& a)
{
  if (a.input.empty() == a.generator.empty()) throw UsageError("give exactly one of --input or --generator");
  if (a.k < 1) throw UsageError("K must be at least 1");
  if (a.method == "ldr" && a.k < a.d + 1)
    throw UsageError("LDR weights need K >= d + 1 (K = " + std::to_string(a.k) + ", d = " + std::to_string(a.d) + ")");
  if (!(a.delta >= 0.0) || !std::isfinite(a.delta)) throw UsageError("Delta must be a finite non-negative number");

  PointCloud points = PointCloud(Matrix::Zero(1, 1));
  std::optional<Matrix> preimage;
  if (!a.input.empty()) {
    points = loadCsv(a.input);
    if (fs::exists(preimagePath(a.input))) preimage = loadMatrixCsv(preimagePath(a.input));
  } else {
    GeneratedSample s = generate(a.generator, a.n, a.seed);
    points = std::move(s.points);
    preimage = std::move(s.preimage);
  }
  if (preimage && preimage->rows() != points.size()) preimage.reset();

  const NeighborGraph graph = knn(points, a.k);
  const WeightMethod method = a.method == "ldr" ? WeightMethod(LdrMethod{a.d}) : WeightMethod(ClassicalMethod{a.delta});
  const WeightAssembly weights = assembleWeightMatrix(points, graph, method, a.d);

  EmbedOptions options;
  options.solver = a.solver == "dense"       ? EigenSolverKind::dense
                   : a.solver == "iterative" ? EigenSolverKind::iterative
                                             : EigenSolverKind::automatic;
  const Embedding e = embed(weights.w, a.d, options);
  const Matrix* reference = preimage && preimage->cols() == a.d ? &*preimage : nullptr;
  const EmbeddingDiagnostics diag = linearProjectionDiagnostic(points, e, weights.w, reference);

  double alphaMin = 1.0, alphaMax = 0.0, alphaSum = 0.0, rMax = 0.0;
  ordered_json gapPoints = ordered_json::array();
  for (std::size_t i = 0; i < weights.spectra.size(); ++i) {
    const auto& s = weights.spectra[i];
    alphaMin = std::min(alphaMin, s.alpha);
    alphaMax = std::max(alphaMax, s.alpha);
    alphaSum += s.alpha;
    rMax = std::max(rMax, s.radius);
    if (s.gapWarning) gapPoints.push_back(i);
  }

  const fs::path out(a.out);
  const fs::path sidecar = sidecarPath(out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  saveCsv(e.y, out);
  if (!a.weightsOut.empty()) writeText(a.weightsOut, formatSparseTriplets(weights.w));
  if (!a.spectraOut.empty()) writeText(a.spectraOut, formatSpectraCsv(weights.spectra));

  ordered_json j;
  j["config"] = embedConfig(a, sidecar);
  j["n"] = points.size();
  j["input_dim"] = points.dim();
  j["eigenvalues"] = std::vector<double>(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
  j["dropped_eigenvalue"] = e.droppedEigenvalue;
  j["phi"] = diag.phiValue;
  j["eigenvalue_sum"] = e.eigenvalues.sum();
  j["alpha"] = {{"min", alphaMin},
                {"mean", alphaSum / static_cast<double>(weights.spectra.size())},
                {"max", alphaMax}};
  j["r_max"] = rMax;
  j["gap_warnings"] = {{"count", gapPoints.size()}, {"points", gapPoints}};
  j["linear_r2"] = diag.linearR2;
  if (diag.procrustesResidual) j["procrustes_residual"] = *diag.procrustesResidual;
  if (diag.rankCorrelation) j["spearman_rho"] = *diag.rankCorrelation;
  writeJson(sidecar, j);
  std::cout << "wrote " << out.string() << " and " << sidecar.string() << "\n";
  return kOk;
}

// --- perturb --------------------------------------------------------------

struct PerturbArgs
{
  std::vector<double> epsilons{1e-2, 1e-4, 1e-6};
  Index trials = 1000;
  std::uint64_t seed = 1;
  std::string out = "perturbation.json";
  std::string csv;
};

int runPerturb(const PerturbArgs& a)
{
  for (double eps : a.epsilons)
    if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("every epsilon must be a positive finite number");
  if (a.trials < 1) throw UsageError("trials must be at least 1");

  PerturbationConfig config;
  config.epsilons = a.epsilons;
  config.trials = a.trials;
  config.seed = a.seed;
  const auto reports = perturbationExperiment(config);

  ordered_json j;
  ordered_json c{{"command", "perturb"}, {"epsilons", a.epsilons}, {"trials", a.trials}, {"seed", a.seed},
                 {"outputs", {{"report", a.out}}}};
  if (!a.csv.empty()) c["outputs"]["trials_csv"] = a.csv;
  j["config"] = c;
  j["report"] = perturbationJson(config, reports);
  writeJson(a.out, j);
  if (!a.csv.empty()) writeText(a.csv, perturbationCsv(reports));

  Index violations = 0;
  for (const auto& r : reports) violations += r.violations();
  std::cout << "wrote " << a.out << "; " << violations << " bound violations\n";
  return violations == 0 ? kOk : kFailure;
}

// --- theorem2 -------------------------------------------------------------

struct PreimageArgs
{
  std::string generator = "swissroll";
  std::string input;
  std::string preimage;
  std::vector<Index> sizes{500, 1000, 2000};
  Index k = 12;
  Index d = 2;
  std::uint64_t seed = 1;
  Index nullDraws = 20;
  std::string out = "theorem2.json";
  std::string csv;
};

int runPreimageCheck(const PreimageArgs& a)
{
  if (a.k < a.d + 1) throw UsageError("LDR weights need K >= d + 1");
  if (a.nullDraws < 1) throw UsageError("null draws must be at least 1");

  const PreimageCheckOptions options{a.nullDraws, a.seed};
  std::vector<PreimageCheckResult> rows;
  ordered_json c{{"command", "theorem2"}};
  if (!a.input.empty()) {
    const fs::path pre = a.preimage.empty() ? preimagePath(a.input) : fs::path(a.preimage);
    if (!fs::exists(pre))
      throw UsageError("theorem2 compares the weights against the ground-truth preimage, but " + pre.string() +
                       " does not exist; pass --preimage or use a generated sample");
    rows.push_back(preimageResidualCheck(loadCsv(a.input), loadMatrixCsv(pre), a.k, a.d, options));
    c["input"] = a.input;
    c["preimage"] = pre.string();
  } else {
    if (a.sizes.empty()) throw UsageError("give at least one sample size");
    for (Index n : a.sizes) rows.push_back(preimageResidualCheck(generate(a.generator, n, a.seed), a.k, a.d, options));
    c["generator"] = a.generator;
    c["n"] = a.sizes;
  }
  c["k"] = a.k;
  c["d"] = a.d;
  c["seed"] = a.seed;
  c["null_draws"] = a.nullDraws;
  c["outputs"] = {{"report", a.out}};
  if (!a.csv.empty()) c["outputs"]["table_csv"] = a.csv;

  const double base = rows.front().ratio;
  bool bounded = true, nullBeaten = true;
  ordered_json table = ordered_json::array();
  std::string csv = "n,phi_z_over_n,max_lambda_dp1,r_max,ratio,null_phi_z_over_n\n";
  for (const auto& r : rows) {
    bounded = bounded && std::isfinite(r.ratio) && r.ratio <= 2.0 * base;
    nullBeaten = nullBeaten && 10.0 * r.phiZOverN <= r.nullPhiZOverN;
    table.push_back({{"n", r.n},
                     {"phi_z_over_n", r.phiZOverN},
                     {"max_lambda_dp1", r.maxLambdaDp1},
                     {"r_max", r.rMax},
                     {"ratio", r.ratio},
                     {"null_phi_z_over_n", r.nullPhiZOverN}});
    csv += formatCsv(Matrix{{static_cast<double>(r.n), r.phiZOverN, r.maxLambdaDp1, r.rMax, r.ratio,
                             r.nullPhiZOverN}});
  }
  ordered_json j{{"config", c}, {"rows", table}, {"bounded", bounded}, {"null_beaten_10x", nullBeaten}};
  writeJson(a.out, j);
  if (!a.csv.empty()) writeText(a.csv, csv);
  std::cout << "wrote " << a.out << "; bounded " << (bounded ? "yes" : "no") << ", null beaten "
            << (nullBeaten ? "yes" : "no") << "\n";
  return kOk;
}

int report(const std::string& message, int code)
{
  std::cerr << "error: " << message << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Locally linear embedding with low-dimensional representation weights"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic sample and its preimage as CSV");
  g->add_option("name", gen.name, "ring, scurve or swissroll")->required()->check(CLI::IsMember(kGenerators));
  g->add_option("--n", gen.n, "Number of points")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Random seed (ignored by ring)");
  g->add_option("--out", gen.out, "Points CSV; the preimage goes to <stem>.preimage.csv");

  EmbedArgs emb;
  auto* e = app.add_subcommand("embed", "Run knn, weights and the embedding; writes CSV plus a JSON sidecar");
  e->add_option("--input", emb.input, "Points CSV, one point per row");
  e->add_option("--generator", emb.generator, "Generate the input instead")->check(CLI::IsMember(kGenerators));
  e->add_option("--n", emb.n, "Points for --generator")->check(CLI::PositiveNumber);
  e->add_option("--seed", emb.seed, "Seed for --generator");
  e->add_option("--k", emb.k, "Neighbors per point");
  e->add_option("--d", emb.d, "Embedding dimension")->check(CLI::PositiveNumber);
  e->add_option("--method", emb.method, "ldr or classical")->check(CLI::IsMember({"ldr", "classical"}));
  e->add_option("--delta", emb.delta, "Regularization for classical weights");
  e->add_option("--out", emb.out, "Embedding CSV; the sidecar goes next to it with extension .json");
  e->add_option("--weights-out", emb.weightsOut, "Weight matrix as 'i j w' lines");
  e->add_option("--spectra-out", emb.spectraOut, "Per-point singular values, alpha and radius");
  e->add_option("--solver", emb.solver, "auto, dense or iterative")->check(CLI::IsMember({"auto", "dense", "iterative"}));

  PerturbArgs per;
  auto* p = app.add_subcommand("perturb", "Weight stability of the grid cross under noise");
  p->add_option("--epsilons", per.epsilons, "Noise levels")->expected(1, -1);
  p->add_option("--trials", per.trials, "Trials per noise level");
  p->add_option("--seed", per.seed, "Random seed");
  p->add_option("--out", per.out, "JSON report");
  p->add_option("--csv", per.csv, "Per-trial CSV");

  PreimageArgs th;
  auto* t = app.add_subcommand("theorem2", "Preimage residual of LDR weights over a sample-size sweep");
  t->add_option("--generator", th.generator, "Sample generator")->check(CLI::IsMember(kGenerators));
  t->add_option("--input", th.input, "External points CSV instead of a generator");
  t->add_option("--preimage", th.preimage, "Preimage CSV for --input (default <stem>.preimage.csv)");
  t->add_option("--n", th.sizes, "Sample sizes")->expected(1, -1)->check(CLI::PositiveNumber);
  t->add_option("--k", th.k, "Neighbors per point");
  t->add_option("--d", th.d, "Manifold dimension")->check(CLI::PositiveNumber);
  t->add_option("--seed", th.seed, "Seed for generation and the permutation null");
  t->add_option("--null-draws", th.nullDraws, "Permutations in the null model");
  t->add_option("--out", th.out, "JSON report");
  t->add_option("--csv", th.csv, "Table CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return runGenerate(gen);
    if (*e) return runEmbed(emb);
    if (*p) return runPerturb(per);
    if (*t) return runPreimageCheck(th);
  } catch (const UsageError& err) {
    return report(err.what(), kUsage);
  } catch (const InvalidArgument& err) {
    return report(err.what(), kUsage);
  } catch (const FormatError& err) {
    return report(err.what(), kUsage);
  } catch (const DisconnectedGraph& err) {
    return report(err.what(), kDisconnected);
  } catch (const GeneralPositionViolation& err) {
    return report(err.what(), kGeneralPosition);
  } catch (const Error& err) {
    return report(err.what(), kNumerical);
  } catch (const std::exception& err) {
    return report(err.what(), kFailure);
  }
  return kUsage;
}
