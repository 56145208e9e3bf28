#include "affinedim/builtin.hpp"

#include <cmath>

namespace affinedim {

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix M(2, 2);
  M << a, b, c, d;
  return M;
}

IFSSpec assemble(int d, const std::vector<Matrix>& mats, const BuiltinParams& params,
                 const std::string& name, double default_s = 1.0) {
  const double s = params.s.value_or(default_s);
  require(std::isfinite(s) && s != 0.0, name + ": scale s must be finite and non-zero");
  const std::size_t n = mats.size();
  require(params.translations.empty() || params.translations.size() == n,
          name + ": expected " + std::to_string(n) + " translations");
  require(params.p.empty() || params.p.size() == n,
          name + ": expected " + std::to_string(n) + " weights");
  std::vector<AffineMap> maps;
  for (std::size_t i = 0; i < n; ++i) {
    AffineMap f;
    f.A = s * mats[i];
    f.v = params.translations.empty() ? Vector::Zero(d) : params.translations[i];
    f.p = params.p.empty() ? 1.0 / static_cast<double>(n) : params.p[i];
    maps.push_back(std::move(f));
  }
  return IFSSpec(d, std::move(maps), name);
}

}  // namespace

std::vector<std::string> builtin_names() { return {"e23", "e24", "cf", "corners", "flagship"}; }

IFSSpec builtin(const std::string& name, const BuiltinParams& params) {
  if (name == "e23") {
    return assemble(2, {mat2(1, 2, 0, 1), mat2(1, 0, 2, 1)}, params, "e23");
  }
  if (name == "e24") {
    require(std::isfinite(params.E) && std::isfinite(params.L), "e24: E and L must be finite");
    require(std::abs(params.E) + std::abs(params.L) < 2.0, "e24: need |E| + |L| < 2");
    const Matrix m1 = mat2(params.E - params.L, -1, 1, 0);
    const Matrix m2 = mat2(params.E + params.L, -1, 1, 0);
    return assemble(2, {m1.inverse(), m2.inverse()}, params, "e24");
  }
  if (name == "cf") {
    require(!params.ns.empty(), "cf: need at least one n");
    std::vector<Matrix> mats;
    for (int n : params.ns) {
      require(n >= 1, "cf: entries n must be >= 1");
      mats.push_back(mat2(0, 1, 1, n).inverse());
    }
    return assemble(2, mats, params, "cf");
  }
  if (name == "corners") {
    BuiltinParams p = params;
    if (p.translations.empty()) {
      for (double x : {0.0, 2.0 / 3.0})
        for (double y : {0.0, 2.0 / 3.0}) p.translations.push_back((Vector(2) << x, y).finished());
    }
    const Matrix I = Matrix::Identity(2, 2);
    return assemble(2, {I, I, I, I}, p, "corners", 1.0 / 3.0);
  }
  if (name == "flagship") {
    BuiltinParams p = params;
    if (p.translations.empty()) {
      const double v[10][2] = {{-0.748166, -0.447290}, {-0.161031, -0.877426}, {0.427803, -1.299406},
                               {1.479567, -0.702771},  {-1.304572, 0.554471},  {0.037538, 0.716988},
                               {0.802242, 0.425618},   {1.256420, -0.131439},  {-1.326120, 1.118240},
                               {-0.463681, 0.643015}};
      for (const auto& t : v) p.translations.push_back((Vector(2) << t[0], t[1]).finished());
    }
    std::vector<Matrix> mats;
    for (int i = 0; i < 10; ++i) mats.push_back(i % 2 == 0 ? mat2(1, 2, 0, 1) : mat2(1, 0, 2, 1));
    return assemble(2, mats, p, "flagship", 0.2);
  }
  throw Error("unknown builtin '" + name + "' (expected e23, e24, cf, corners or flagship)");
}

IFSSpec flagship_spec() { return builtin("flagship"); }

}  // namespace affinedim
