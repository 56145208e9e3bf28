// affinedim: dimension analysis of affine iterated function systems.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "affinedim/builtin.hpp"
#include "affinedim/furstenberg.hpp"
#include "affinedim/lyapunov.hpp"
#include "affinedim/selfaffine.hpp"
#include "affinedim/verifier.hpp"

using namespace affinedim;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::int64_t samples = 100000;
  std::int64_t chain_samples = 20000;
  std::int64_t burnin = 1000;
  int depth = 0;
  double tol = 0.0;
  std::string out_dir;
  int threads = 1;
  bool timings = false;
  bool json = false;
};

// "builtin:<name>" selects a built-in example, anything else is a file.
IFSSpec load_spec(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin(source.substr(prefix.size()));
  return IFSSpec::load(source);
}

void emit(const Globals& g, const std::string& file, const ordered_json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / file;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  std::cout << "wrote " << path.string() << '\n';
}

LyapunovOptions lyapunov_options(const Globals& g) {
  LyapunovOptions o;
  o.n_steps = 100000;
  o.seed = stage_seeds(g.seed).lyapunov;
  o.n_substreams = 4;
  o.threads = g.threads;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension analysis of self-affine measures and their Furstenberg measures"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("AFFINEDIM_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: AFFINEDIM_SEED is not an unsigned integer\n";
      return 2;
    }
  }
  app.add_option("--seed", g.seed, "Master seed (falls back to AFFINEDIM_SEED, then 0)");
  app.add_option("--samples", g.samples, "Points in the measure cloud")->check(CLI::PositiveNumber);
  app.add_option("--chain-samples", g.chain_samples, "Points in the Furstenberg cloud")
      ->check(CLI::PositiveNumber);
  app.add_option("--burnin", g.burnin, "Discarded chain steps")->check(CLI::NonNegativeNumber);
  app.add_option("--depth", g.depth, "Word length for measure sampling (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol", g.tol, "Bottom-cluster tolerance for m (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for reports and CSV clouds");
  app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timings", g.timings, "Record stage timings in the report");
  app.add_flag("--json", g.json, "Print the JSON report instead of the summary");

  std::string source;
  auto* analyze = app.add_subcommand("analyze", "Full analysis and report");
  analyze->add_option("spec", source, "Spec JSON file or builtin:<name>")->required();

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponents, m, k and D");
  lyap->add_option("spec", source, "Spec JSON file or builtin:<name>")->required();

  int m_override = 0;
  auto* furst = app.add_subcommand("furstenberg", "Furstenberg chain, correlation dimension, certificates");
  furst->add_option("spec", source, "Spec JSON file or builtin:<name>")->required();
  furst->add_option("--m", m_override, "Grassmannian dimension (default: multiplicity m)");

  std::string cloud_path;
  auto* dim = app.add_subcommand("dimension", "Measure sample and dimension estimate");
  dim->add_option("spec", source, "Spec JSON file or builtin:<name>");
  dim->add_option("--cloud", cloud_path, "Estimate from an existing point-cloud CSV")
      ->check(CLI::ExistingFile);

  int max_depth = 12;
  auto* ssc = app.add_subcommand("ssc", "Strong separation certificate");
  ssc->add_option("spec", source, "Spec JSON file or builtin:<name>")->required();
  ssc->add_option("--max-depth", max_depth, "Refinement limit")->check(CLI::PositiveNumber);

  int power = 2;
  std::string output;
  auto* iter = app.add_subcommand("iterate", "Spec of the n-fold compositions");
  iter->add_option("spec", source, "Spec JSON file or builtin:<name>")->required();
  iter->add_option("-n,--power", power, "Word length")->check(CLI::PositiveNumber);
  iter->add_option("-o,--output", output, "Write the spec here instead of stdout");

  std::string name;
  BuiltinParams params;
  double s = 0.0;
  auto* example = app.add_subcommand("example", "Print a built-in spec");
  example->add_option("name", name, "e23, e24, cf, corners or flagship")->required();
  example->add_option("--s", s, "Scalar applied to every matrix");
  example->add_option("--E", params.E, "e24 parameter E");
  example->add_option("--L", params.L, "e24 parameter L");
  example->add_option("--ns", params.ns, "cf entries n");
  example->add_option("-o,--output", output, "Write the spec here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const IFSSpec spec = load_spec(source);
      VerifyOptions vo;
      vo.seed = g.seed;
      vo.measure_samples = g.samples;
      vo.chain_samples = g.chain_samples;
      vo.burn_in = g.burnin;
      vo.depth = g.depth;
      vo.tol_cluster = g.tol;
      vo.threads = g.threads;
      vo.timings = g.timings;
      vo.out_dir = g.out_dir;
      const auto report = verify(spec, vo);
      const auto j = to_json(report);
      const std::string summary = text_summary(report);
      if (!g.out_dir.empty()) {
        std::ofstream(std::filesystem::path(g.out_dir) / "report.json") << j.dump(2) << '\n';
        std::ofstream(std::filesystem::path(g.out_dir) / "summary.txt") << summary;
      }
      std::cout << (g.json ? j.dump(2) + "\n" : summary);
    } else if (*lyap) {
      const IFSSpec spec = load_spec(source);
      emit(g, "lyapunov.json", to_json(lyapunov_report(spec, lyapunov_options(g), g.tol)));
    } else if (*furst) {
      const IFSSpec spec = load_spec(source);
      const auto seeds = stage_seeds(g.seed);
      int m = m_override;
      if (m <= 0) m = lyapunov_report(spec, lyapunov_options(g), g.tol).multiplicity.m;
      if (m >= spec.d()) throw Error("m = d: the Grassmannian G(d, m) is a single point");
      ChainOptions co;
      co.burn_in = g.burnin;
      co.n = g.chain_samples;
      co.seed = seeds.chain;
      co.n_chains = 4;
      co.threads = g.threads;
      const auto cloud = sample_chain(spec, m, co);
      ordered_json j;
      j["m"] = m;
      CorrelationOptions cd;
      cd.threads = g.threads;
      j["dimension"] = cloud.size() >= 1000 ? to_json(correlation_dimension(cloud, cd)) : ordered_json(nullptr);
      StationarityOptions so;
      so.seed = seeds.stationarity;
      const auto st = stationarity_test(cloud, spec, so);
      j["stationarity"] = {{"gap", st.gap}, {"null_q95", st.test.null_q95}, {"pass", st.test.pass}};
      j["irreducibility"] = to_json(irreducibility_check(spec.matrices(), m, 0, seeds.irreducibility));
      auto lo = lyapunov_options(g);
      lo.seed = seeds.contraction;
      const auto c = contraction_check(spec, m, lo);
      j["contraction"] = {{"gap", c.eta_gap}, {"gap_stderr", c.gap_stderr}, {"contracting", c.contracting}};
      if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        const auto path = std::filesystem::path(g.out_dir) / "furstenberg.csv";
        std::ofstream out(path);
        write_cloud_csv(out, cloud);
        j["cloud_csv"] = path.string();
      }
      emit(g, "furstenberg.json", j);
    } else if (*dim) {
      PointCloud cloud;
      if (!cloud_path.empty()) {
        std::ifstream in(cloud_path);
        cloud = read_point_cloud_csv(in);
      } else {
        if (source.empty()) throw Error("dimension: give a spec or --cloud");
        SampleOptions so;
        so.n = g.samples;
        so.depth = g.depth;
        so.seed = stage_seeds(g.seed).measure;
        so.threads = g.threads;
        cloud = sample_measure(load_spec(source), so);
      }
      MeasureDimensionOptions mo;
      mo.threads = g.threads;
      ordered_json j = to_json(measure_dimension_estimate(cloud, mo));
      if (!g.out_dir.empty() && cloud_path.empty()) {
        std::filesystem::create_directories(g.out_dir);
        const auto path = std::filesystem::path(g.out_dir) / "measure.csv";
        std::ofstream out(path);
        write_point_cloud_csv(out, cloud);
        j["cloud_csv"] = path.string();
      }
      emit(g, "dimension.json", j);
    } else if (*ssc) {
      const IFSSpec spec = load_spec(source);
      ordered_json j = to_json(ssc_certify(spec, max_depth));
      j["det_sum"] = det_sum(spec);
      emit(g, "ssc.json", j);
    } else if (*iter) {
      const IFSSpec out = iterate_spec(load_spec(source), power);
      if (output.empty()) std::cout << out.to_json().dump(2) << '\n';
      else out.save(output);
    } else if (*example) {
      if (example->count("--s")) params.s = s;
      const IFSSpec spec = builtin(name, params);
      if (output.empty()) std::cout << spec.to_json().dump(2) << '\n';
      else spec.save(output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
