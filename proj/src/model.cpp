#include "ivtree/model.hpp"

#include <cmath>
#include <sstream>

#include "ivtree/error.hpp"

namespace ivtree {

ModelParams make_params(double J, double Jp, double T, int k) {
  if (!std::isfinite(J) || !std::isfinite(Jp) || !std::isfinite(T)) {
    throw Error(ErrorCode::NonFiniteInput, "couplings and temperature must be finite");
  }
  if (!(T > 0.0)) {
    std::ostringstream os;
    os << "temperature must be positive, got " << T;
    throw Error(ErrorCode::NonPositiveTemperature, os.str());
  }
  if (k < 2) {
    std::ostringstream os;
    os << "tree order must be at least 2, got " << k;
    throw Error(ErrorCode::TreeOrderTooSmall, os.str());
  }
  ModelParams p;
  p.J = J;
  p.Jp = Jp;
  p.T = T;
  p.k = k;
  p.beta = 1.0 / T;
  return p;
}

namespace {

double checked_exp(double exponent, const char* name) {
  const double w = std::exp(exponent);
  if (!std::isfinite(w) || w <= 0.0) {
    std::ostringstream os;
    os << "weight " << name << " = exp(" << exponent << ") is not representable";
    throw Error(ErrorCode::WeightOverflow, os.str());
  }
  return w;
}

}  // namespace

DerivedWeights derived_weights(const ModelParams& params) {
  DerivedWeights w;
  w.a = checked_exp(params.log_a(), "a");
  w.b = checked_exp(params.log_b(), "b");
  w.c = checked_exp(params.log_c(), "c");
  w.d = checked_exp(params.log_d(), "d");
  return w;
}

FiniteTreeConfig FiniteTreeConfig::from_bits(int depth, int k, std::uint64_t bits) {
  FiniteTreeConfig cfg;
  cfg.depth = depth;
  cfg.k = k;
  const int n = vertex_count(depth, k);
  cfg.spins.resize(n);
  for (int v = 0; v < n; ++v) cfg.spins[v] = ((bits >> v) & 1u) ? -1 : 1;
  return cfg;
}

double finite_energy(const FiniteTreeConfig& config, const ModelParams& params) {
  const int k = config.k;
  if (config.depth != 1 && config.depth != 2) {
    throw Error(ErrorCode::InvalidDepth, "finite tree depth must be 1 or 2");
  }
  const int n = FiniteTreeConfig::vertex_count(config.depth, k);
  if (static_cast<int>(config.spins.size()) != n) {
    std::ostringstream os;
    os << "configuration covers " << config.spins.size() << " vertices, V_" << config.depth
       << " has " << n;
    throw Error(ErrorCode::MissingVertex, os.str());
  }
  for (auto s : config.spins) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidSpin, "spins must be +1 or -1");
  }

  const auto& s = config.spins;
  long nn = 0;
  long nnn = 0;
  for (int i = 0; i < k; ++i) {
    const int y = FiniteTreeConfig::child(k, 0, i);
    nn += s[0] * s[y];
    if (config.depth == 2) {
      for (int j = 0; j < k; ++j) {
        const int z = FiniteTreeConfig::child(k, y, j);
        nn += s[y] * s[z];
        nnn += s[0] * s[z];
      }
    }
  }
  return -params.Jp * static_cast<double>(nnn) - params.J * static_cast<double>(nn);
}

}  // namespace ivtree
