#include "affinedim/verifier.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "affinedim/rng.hpp"

namespace affinedim {

using nlohmann::ordered_json;

StageSeeds stage_seeds(std::uint64_t master) {
  StageSeeds s;
  s.lyapunov = substream_seed(master, 1);
  s.chain = substream_seed(master, 2);
  s.stationarity = substream_seed(master, 3);
  s.irreducibility = substream_seed(master, 4);
  s.contraction = substream_seed(master, 5);
  s.measure = substream_seed(master, 6);
  s.slice = substream_seed(master, 7);
  return s;
}

namespace {

class StageClock {
 public:
  StageClock(bool enabled, ordered_json& sink) : enabled_(enabled), sink_(sink) {}
  void mark(const std::string& stage) {
    if (!enabled_) return;
    const auto now = std::chrono::steady_clock::now();
    sink_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  bool enabled_;
  ordered_json& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ordered_json vec_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json fit_json(const LinearFit& f) {
  return ordered_json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.n}};
}

template <class T>
ordered_json opt_json(const std::optional<T>& x) {
  return x ? to_json(*x) : ordered_json(nullptr);
}

ordered_json opt_num(const std::optional<double>& x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

}  // namespace

VerificationReport verify(const IFSSpec& spec, const VerifyOptions& options) {
  VerificationReport r;
  StageClock clock(options.timings, r.timings);
  r.spec_name = spec.name();
  r.d = spec.d();
  r.maps = spec.size();
  r.max_norm = spec.max_norm();
  r.contractive = spec.contractive();
  r.master_seed = options.seed;
  r.seeds = stage_seeds(options.seed);
  r.det_sum = det_sum(spec);
  const int d = spec.d();

  LyapunovOptions lo;
  lo.n_steps = options.lyapunov_steps;
  lo.seed = r.seeds.lyapunov;
  lo.n_substreams = 4;
  lo.threads = options.threads;
  r.lyapunov = lyapunov_report(spec, lo, options.tol_cluster);
  r.m = r.lyapunov.multiplicity.m;
  r.condition_rhs = (r.m + 1) * (d - r.m);
  clock.mark("lyapunov");

  std::optional<GrassmannCloud> fcloud;
  if (r.m < d) {
    ChainOptions co;
    co.burn_in = options.burn_in;
    co.n = options.chain_samples;
    co.stride = options.stride;
    co.seed = r.seeds.chain;
    co.n_chains = 4;
    co.threads = options.threads;
    fcloud = sample_chain(spec, r.m, co);
    clock.mark("furstenberg_chain");

    if (fcloud->size() >= 1000) {
      CorrelationOptions cd;
      cd.threads = options.threads;
      r.furstenberg_dim = correlation_dimension(*fcloud, cd);
    }
    StationarityOptions so;
    so.n_probe = options.stationarity_probe;
    so.resamples = options.stationarity_resamples;
    so.seed = r.seeds.stationarity;
    r.stationarity = stationarity_test(*fcloud, spec, so);
    clock.mark("furstenberg_dimension");

    const auto mats = spec.matrices();
    r.irreducibility = irreducibility_check(mats, r.m, 0, r.seeds.irreducibility);
    LyapunovOptions ci = lo;
    ci.seed = r.seeds.contraction;
    r.contraction = contraction_check(spec, r.m, ci);
    clock.mark("certificates");
  } else {
    r.note =
        "m = d: the exponents form a single cluster; Grassmannian stages do not apply and the "
        "equal-exponent case is covered by the conformal-type theory";
  }

  std::optional<PointCloud> mcloud;
  if (r.contractive) {
    r.ssc = ssc_certify(spec, options.ssc_max_depth);
    clock.mark("ssc");
    SampleOptions sa;
    sa.n = options.measure_samples;
    sa.depth = options.depth;
    sa.seed = r.seeds.measure;
    sa.threads = options.threads;
    mcloud = sample_measure(spec, sa);
    clock.mark("measure_sample");
    MeasureDimensionOptions mo;
    mo.threads = options.threads;
    try {
      r.measure_dim = measure_dimension_estimate(*mcloud, mo);
    } catch (const Error&) {
      r.measure_dim.reset();
    }
    clock.mark("measure_dimension");
    if (fcloud && r.lyapunov.gammas(d - 1) < 0.0) {
      SliceDimensionOptions so;
      so.max_subspaces = options.slice_subspaces;
      so.seed = r.seeds.slice;
      so.threads = options.threads;
      r.slice = slice_dimension_F(*fcloud, *mcloud, r.lyapunov.gammas(d - 1), so);
      clock.mark("slice");
    }
  } else {
    r.note += std::string(r.note.empty() ? "" : "; ") +
              "maps are not all contractions: spatial stages skipped";
  }

  if (r.furstenberg_dim && r.lyapunov.D) r.condition_lhs = r.furstenberg_dim->estimate + *r.lyapunov.D;
  const bool reducible =
      r.irreducibility &&
      r.irreducibility->verdict == IrreducibilityCertificate::Verdict::ReducibleCertified;
  const bool separated = r.ssc && r.ssc->verdict == SSCCertificate::Verdict::Certified;
  r.hypothesis_pass = r.condition_lhs && *r.condition_lhs > r.condition_rhs && r.m < d && !reducible &&
                      separated;
  if (r.measure_dim && r.lyapunov.D)
    r.conclusion_gap = std::abs((r.measure_dim->degenerate ? 0.0 : r.measure_dim->estimate) - *r.lyapunov.D);

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    const std::string stem = spec.name().empty() ? "spec" : spec.name();
    if (fcloud) {
      r.furstenberg_cloud_path = (std::filesystem::path(options.out_dir) / (stem + "_furstenberg.csv")).string();
      std::ofstream out(r.furstenberg_cloud_path);
      require(static_cast<bool>(out), "cannot write " + r.furstenberg_cloud_path);
      write_cloud_csv(out, *fcloud);
    }
    if (mcloud) {
      r.measure_cloud_path = (std::filesystem::path(options.out_dir) / (stem + "_measure.csv")).string();
      std::ofstream out(r.measure_cloud_path);
      require(static_cast<bool>(out), "cannot write " + r.measure_cloud_path);
      write_point_cloud_csv(out, *mcloud);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool strongly_irreducible(const VerificationReport& r) {
  return r.irreducibility && r.contraction && r.contraction->contracting &&
         r.irreducibility->verdict == IrreducibilityCertificate::Verdict::IrreducibleCertified;
}

}  // namespace

ordered_json to_json(const LyapunovReport& r) {
  ordered_json j;
  j["gammas"] = vec_json(r.gammas);
  j["stderr"] = vec_json(r.stderr_);
  j["entropy"] = r.h;
  j["m"] = r.multiplicity.m;
  j["m_gap"] = r.multiplicity.gap;
  j["tol_cluster"] = r.multiplicity.tol_cluster;
  j["m_ambiguous"] = r.multiplicity.ambiguous;
  j["k"] = r.k;
  j["D"] = r.D ? ordered_json(*r.D) : ordered_json(nullptr);
  j["D_stderr"] = r.D_stderr;
  j["n_steps"] = r.n_steps;
  j["seed"] = r.seed;
  return j;
}

ordered_json to_json(const SSCCertificate& c) {
  return ordered_json{{"verdict", to_string(c.verdict)},
                      {"depth", c.depth},
                      {"min_gap", c.min_gap},
                      {"radius", c.radius},
                      {"hulls", c.hulls}};
}

ordered_json to_json(const IrreducibilityCertificate& c) {
  ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["algebra_rank"] = c.algebra_rank;
  j["q"] = c.q;
  j["words_used"] = c.words_used;
  if (c.witness) {
    ordered_json w = ordered_json::array();
    for (Eigen::Index k = 0; k < c.witness->cols(); ++k) w.push_back(vec_json(c.witness->col(k)));
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

ordered_json to_json(const CorrelationDimension& c) {
  ordered_json j;
  j["label"] = "correlation dimension (numerical proxy)";
  j["estimate"] = c.estimate;
  j["fit"] = fit_json(c.fit);
  j["r_lo"] = c.r_lo;
  j["r_hi"] = c.r_hi;
  j["median_nn"] = c.median_nn;
  j["diameter"] = c.diameter;
  j["n_pairs"] = c.n_pairs;
  j["degenerate"] = c.degenerate;
  return j;
}

ordered_json to_json(const MeasureDimension& m) {
  ordered_json j;
  j["estimate"] = m.estimate;
  j["fit"] = fit_json(m.fit);
  j["correlation_estimate"] = m.correlation_estimate;
  j["correlation_fit"] = fit_json(m.correlation_fit);
  j["r_lo"] = m.r_lo;
  j["r_hi"] = m.r_hi;
  j["extent"] = m.extent;
  j["n_ref"] = m.n_ref;
  j["degenerate"] = m.degenerate;
  return j;
}

ordered_json to_json(const VerificationReport& r) {
  ordered_json j;
  j["spec"] = ordered_json{{"name", r.spec_name},
                           {"d", r.d},
                           {"maps", r.maps},
                           {"max_norm", r.max_norm},
                           {"contractive", r.contractive}};
  j["lyapunov"] = to_json(r.lyapunov);
  j["m"] = r.m;
  j["note"] = r.note;

  ordered_json f;
  f["dimension"] = opt_json(r.furstenberg_dim);
  if (r.stationarity) {
    f["stationarity"] = ordered_json{{"gap", r.stationarity->gap},
                                     {"null_q95", r.stationarity->test.null_q95},
                                     {"sigma", r.stationarity->sigma},
                                     {"pass", r.stationarity->test.pass}};
  } else {
    f["stationarity"] = nullptr;
  }
  f["cloud_csv"] = r.furstenberg_cloud_path.empty() ? ordered_json(nullptr) : ordered_json(r.furstenberg_cloud_path);
  j["furstenberg"] = f;

  j["irreducibility"] = opt_json(r.irreducibility);
  if (r.contraction) {
    j["contraction"] = ordered_json{{"eta1", r.contraction->eta1},
                                    {"eta2", r.contraction->eta2},
                                    {"gap", r.contraction->eta_gap},
                                    {"gap_stderr", r.contraction->gap_stderr},
                                    {"contracting", r.contraction->contracting},
                                    {"strongly_irreducible_and_contracting", strongly_irreducible(r)}};
  } else {
    j["contraction"] = nullptr;
  }
  j["ssc"] = opt_json(r.ssc);
  j["det_sum"] = r.det_sum;

  ordered_json md = opt_json(r.measure_dim);
  if (!md.is_null())
    md["cloud_csv"] = r.measure_cloud_path.empty() ? ordered_json(nullptr) : ordered_json(r.measure_cloud_path);
  j["measure_dim"] = md;

  if (r.slice) {
    ordered_json s;
    s["scales"] = r.slice->scales;
    s["mean_H"] = r.slice->mean_H;
    s["F"] = r.slice->F;
    s["extrapolated"] = r.slice->extrapolated;
    s["undersampled"] = r.slice->undersampled;
    s["gamma_d"] = r.slice->gamma_d;
    j["F_estimate"] = s;
  } else {
    j["F_estimate"] = nullptr;
  }

  j["condition_lhs"] = opt_num(r.condition_lhs);
  j["condition_rhs"] = r.condition_rhs;
  j["hypothesis_pass"] = r.hypothesis_pass;
  j["conclusion_gap"] = opt_num(r.conclusion_gap);
  j["seeds"] = ordered_json{{"master", r.master_seed},
                            {"lyapunov", r.seeds.lyapunov},
                            {"chain", r.seeds.chain},
                            {"stationarity", r.seeds.stationarity},
                            {"irreducibility", r.seeds.irreducibility},
                            {"contraction", r.seeds.contraction},
                            {"measure", r.seeds.measure},
                            {"slice", r.seeds.slice}};
  j["timings"] = r.timings;
  return j;
}

std::string text_summary(const VerificationReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << "spec " << (r.spec_name.empty() ? "<unnamed>" : r.spec_name) << ": d=" << r.d << ", " << r.maps
      << " maps, max|A|=" << r.max_norm << '\n';
  out << "exponents:";
  for (Eigen::Index i = 0; i < r.lyapunov.gammas.size(); ++i)
    out << ' ' << r.lyapunov.gammas(i) << " (+-" << r.lyapunov.stderr_(i) << ')';
  out << "\nentropy " << r.lyapunov.h << ", k=" << r.lyapunov.k << ", D=";
  if (r.lyapunov.D) out << *r.lyapunov.D << " (+-" << r.lyapunov.D_stderr << ")";
  else out << "undefined";
  out << ", m=" << r.m << (r.lyapunov.multiplicity.ambiguous ? " (ambiguous)" : "")
      << '\n';
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  if (r.furstenberg_dim)
    out << "Furstenberg correlation dimension (numerical proxy): " << r.furstenberg_dim->estimate
        << " (R2 " << r.furstenberg_dim->fit.r2 << ")\n";
  if (r.stationarity)
    out << "stationarity MMD " << r.stationarity->gap << " vs null q95 " << r.stationarity->test.null_q95
        << (r.stationarity->test.pass ? " (pass)" : " (fail)") << '\n';
  if (r.irreducibility) out << "irreducibility: " << to_string(r.irreducibility->verdict) << '\n';
  if (r.contraction)
    out << "contraction gap " << r.contraction->eta_gap << " (+-" << r.contraction->gap_stderr << ")"
        << (r.contraction->contracting ? " contracting" : " not established") << '\n';
  if (strongly_irreducible(r))
    out << "strongly irreducible and contracting (numerical, irreducible algebra plus exponent gap)\n";
  if (r.ssc)
    out << "separation: " << to_string(r.ssc->verdict) << " at depth " << r.ssc->depth << ", gap "
        << r.ssc->min_gap << "; det sum " << r.det_sum << '\n';
  if (r.condition_lhs)
    out << "condition: " << *r.condition_lhs << " > " << r.condition_rhs << " ? "
        << (*r.condition_lhs > r.condition_rhs ? "yes" : "no") << '\n';
  out << "hypothesis " << (r.hypothesis_pass ? "passes" : "does not pass") << '\n';
  if (r.measure_dim)
    out << "measure dimension " << r.measure_dim->estimate << " (R2 " << r.measure_dim->fit.r2
        << "), correlation " << r.measure_dim->correlation_estimate << ", |estimate - D| = "
        << r.conclusion_gap.value_or(0.0) << '\n';
  if (!r.hypothesis_pass && r.measure_dim)
    out << "(the hypothesis is sufficient, not necessary; the comparison above is informational)\n";
  if (r.slice) {
    out << "F by scale:";
    for (std::size_t i = 0; i < r.slice->F.size(); ++i) out << " n=" << r.slice->scales[i] << ':' << r.slice->F[i];
    out << " (trend intercept " << r.slice->extrapolated << (r.slice->undersampled ? ", undersampled" : "")
        << ")\n";
  }
  return out.str();
}

}  // namespace affinedim
