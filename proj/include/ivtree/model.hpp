#pragma once

#include <cstdint>
#include <vector>

namespace ivtree {

enum class Parity { Even, Odd };

/// Couplings, temperature and tree order of the Ising-Vannimenus model.
/// Boltzmann's constant is 1, so beta = 1/T.
struct ModelParams {
  double J = 0.0;   ///< nearest-neighbour coupling
  double Jp = 0.0;  ///< prolonged (grandparent-grandchild) coupling
  double T = 1.0;
  int k = 2;        ///< branching number of the tree
  double beta = 1.0;

  Parity parity() const { return k % 2 == 0 ? Parity::Even : Parity::Odd; }
  bool even() const { return k % 2 == 0; }

  // Logs of the Boltzmann weights. These never overflow, unlike the weights.
  double log_a() const { return beta * J; }
  double log_b() const { return beta * Jp; }
  double log_c() const { return 2.0 * beta * J; }
  double log_d() const { return 2.0 * beta * Jp; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Validates and builds parameters. Throws Error with a code distinct for
/// each violated precondition.
ModelParams make_params(double J, double Jp, double T, int k);

/// a = e^{beta J}, b = e^{beta Jp}, c = a^2, d = b^2.
struct DerivedWeights {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;
};

/// Throws Error(WeightOverflow) naming the exponent if any weight is not a
/// finite positive double.
DerivedWeights derived_weights(const ModelParams& params);

/// Spins on the ball V_n of radius n in {1, 2}, breadth-first: vertex 0 is the
/// root, vertices 1..k its children, and the children of vertex i (1 <= i <= k)
/// occupy 1 + k + (i-1)*k + j for j in [0, k).
struct FiniteTreeConfig {
  int depth = 1;
  int k = 2;
  std::vector<std::int8_t> spins;

  static int vertex_count(int depth, int k) {
    return 1 + k + (depth == 2 ? k * k : 0);
  }
  static int child(int k, int parent, int j) { return parent == 0 ? 1 + j : 1 + k + (parent - 1) * k + j; }

  /// Spin pattern from the low bits of `bits`: bit v set means vertex v is -1.
  static FiniteTreeConfig from_bits(int depth, int k, std::uint64_t bits);
};

/// H_n(sigma) = -Jp * sum over grandparent-grandchild pairs - J * sum over edges,
/// both restricted to V_n.
double finite_energy(const FiniteTreeConfig& config, const ModelParams& params);

}  // namespace ivtree
